#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>

#include "porcupine/core.hpp"
#include "porcupine/fiber_maps.hpp"
#include "porcupine/itinerary.hpp"
#include "porcupine/parallel.hpp"
#include "porcupine/symbolic.hpp"

namespace porcupine {

// Deterministic word enumeration: lengths ascending, words within one length
// ordered by their binary code read left to right.
inline Word word_from_code(int length, std::uint64_t code) {
  Word w;
  w.bits.reserve(static_cast<std::size_t>(length));
  for (int i = length - 1; i >= 0; --i) w.push_back(static_cast<std::uint8_t>((code >> i) & 1));
  return w;
}

// All fixed points of f_[word] annotated as periodic orbits.
inline std::vector<PeriodicOrbit> fixed_points(const FiberMapPair& pair, const Word& w,
                                               std::size_t scan_grid = 2048) {
  if (w.empty()) throw std::invalid_argument("fixed_points: word must be nonempty");
  std::vector<PeriodicOrbit> orbits;
  for (double r : find_composition_fixed_points(pair, w, scan_grid)) {
    const double mult = std::exp(compose_log_deriv(pair, w, r));
    orbits.push_back(make_orbit(w, r, mult));
  }
  return orbits;
}

// (1/n) log |(f_[first n symbols])'(x)|.
inline double finite_time_exponent(const FiberMapPair& pair, const Word& cycle, double x,
                                   int n) {
  if (n < 1) throw std::invalid_argument("finite_time_exponent: n must be >= 1");
  if (cycle.empty()) throw std::invalid_argument("finite_time_exponent: empty word");
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const MapKind k = cycle[static_cast<std::size_t>(i) % cycle.size()] ? MapKind::f1 : MapKind::f0;
    acc += std::log(std::abs(pair.deriv(k, x)));
    x = pair.value(k, x);
  }
  return acc / static_cast<double>(n);
}

inline double finite_time_exponent(const FiberMapPair& pair, const SeqSpec& seq, double x,
                                   int n) {
  if (n < 1) throw std::invalid_argument("finite_time_exponent: n must be >= 1");
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const MapKind k = seq.bit_at(i) ? MapKind::f1 : MapKind::f0;
    acc += std::log(std::abs(pair.deriv(k, x)));
    x = pair.value(k, x);
  }
  return acc / static_cast<double>(n);
}

// The periodic realization of the excluded set: words 0^n at the repelling
// endpoint, the only periodic data whose forward tail sits at the repeller.
inline bool orbit_excluded(const Word& w, double fix) {
  return w.all_zero() && fix < 0.5;
}

// Word shape 1^l 0^m 1 0^j: a uniformly contracting composition whose fixed
// point has exponent in (-eps, 0); the stable set is all of [0,1].
inline PeriodicOrbit near_zero_negative(const FiberMapPair& pair, double eps,
                                        int budget = 400) {
  if (!(eps > 0.0)) throw std::invalid_argument("near_zero_negative: eps must be positive");

  // Fundamental domain of f0 holding the attracting fixed point of f1.
  const double p_hat = pair.c1 / (1.0 + pair.c1);
  const double x_lo = 0.5 * (p_hat + invert(pair, MapKind::f0, p_hat));
  const Interval J(x_lo, pair.f0_value(x_lo));

  // l0: all of [0,1] lands strictly inside J after l0 applications of f1.
  int ell0 = 1;
  {
    Interval img(pair.f1_value(1.0), pair.f1_value(0.0));
    while (!(img.lo > J.lo && img.hi < J.hi)) {
      img = Interval(pair.f1_value(img.hi), pair.f1_value(img.lo));
      if (++ell0 > 10000) throw ConstructionError("f1 iterates do not settle into the domain");
    }
  }

  double best = -std::numeric_limits<double>::infinity();
  const auto grid = linspace(0.0, 1.0, 1000);
  for (int m = 1; m <= budget; ++m) {
    Interval pushed = J;
    for (int i = 0; i < m; ++i) pushed = Interval(pair.f0_value(pushed.lo), pair.f0_value(pushed.hi));
    Interval jumped(pair.f1_value(pushed.hi), pair.f1_value(pushed.lo));
    if (!(jumped.hi < pair.a0)) continue;  // jump must land in the expanding region
    int j = 0;
    Interval back = jumped;
    while (!back.intersects(J) && j <= 100000) {
      back = Interval(pair.f0_value(back.lo), pair.f0_value(back.hi));
      ++j;
    }
    if (!back.intersects(J)) continue;

    for (int ell = ell0; ell <= ell0 + 64; ++ell) {
      Word w;
      w.append_run(1, static_cast<std::size_t>(ell));
      w.append_run(0, static_cast<std::size_t>(m));
      w.push_back(1);
      w.append_run(0, static_cast<std::size_t>(j));
      double dmax = 0.0;
      for (double x : grid) dmax = std::max(dmax, std::exp(compose_log_deriv(pair, w, x)));
      if (dmax >= 1.0) continue;  // need a global contraction
      const double p = detail::bracketed_fixed_point(pair, w, Interval(0.0, 1.0));
      const double mult = std::exp(compose_log_deriv(pair, w, p));
      PeriodicOrbit orbit = make_orbit(w, p, mult);
      if (orbit.exponent > -eps && orbit.exponent < 0.0) return orbit;
      best = std::max(best, orbit.exponent);
      break;  // longer l only drags the exponent down; grow m instead
    }
  }
  throw SearchBudgetError("near_zero_negative: budget exhausted", best);
}

// Word shape 0^m 1 0^j (successor chain) 0: an expanding fixed point with
// exponent in (0, eps).
inline PeriodicOrbit near_zero_positive(const FiberMapPair& pair, double eps,
                                        int budget = 400) {
  if (!(eps > 0.0)) throw std::invalid_argument("near_zero_positive: eps must be positive");
  const Interval I0 = pair.fundamental_I0();
  const Interval band = admissible_band(pair);
  double best = std::numeric_limits<double>::infinity();
  for (int m = 1; m <= budget; ++m) {
    Interval pushed = I0;
    for (int i = 0; i < m; ++i) pushed = Interval(pair.f0_value(pushed.lo), pair.f0_value(pushed.hi));
    Interval jumped(pair.f1_value(pushed.hi), pair.f1_value(pushed.lo));
    if (!(jumped.hi < pair.a0)) continue;
    int j = 0;
    Interval back = jumped;
    while (!back.intersects(I0) && j <= 100000) {
      back = Interval(pair.f0_value(back.lo), pair.f0_value(back.hi));
      ++j;
    }
    if (!back.intersects(I0)) continue;
    const Interval Jmj = back.clamped(band);
    if (!Jmj.nontrivial()) continue;

    SuccessorChain chain;
    try {
      chain = successor_chain(pair, Jmj);
    } catch (const ConstructionError&) {
      continue;
    }
    Word w;
    w.append_run(0, static_cast<std::size_t>(m));
    w.push_back(1);
    w.append_run(0, static_cast<std::size_t>(j));
    w.append(chain_word(chain));
    w.push_back(0);
    if (!interval_image(pair, w, I0).contains(I0, kBandTol)) continue;
    const double p = detail::bracketed_fixed_point(pair, w, I0);
    const double mult = std::exp(compose_log_deriv(pair, w, p));
    if (!(mult > 1.0 + kNeutralBand)) continue;
    PeriodicOrbit orbit = make_orbit(w, p, mult);
    if (orbit.exponent < eps) return orbit;
    best = std::min(best, orbit.exponent);
  }
  throw SearchBudgetError("near_zero_positive: budget exhausted", best);
}

struct GapEstimate {
  int n_max = 0;
  double chi_tilde = 0.0;   // max non-excluded per-period exponent
  double beta_tilde = 0.0;  // exp(chi_tilde)
  double margin = 0.0;      // log(beta) - chi_tilde
  PeriodicOrbit argmax;
  long included_count = 0;
  long excluded_count = 0;
  std::string excluded_description =
      "periodic words 0^n at the repelling endpoint (forward tail all zeros)";
  std::string note =
      "beta_tilde_n is a lower bound for the true supremum; the margin is an "
      "empirical certificate, convergence in n is not claimed";
};

namespace detail {

template <typename Visit>
void enumerate_orbits(const FiberMapPair& pair, int n_max, unsigned threads, Visit&& visit) {
  // visit(block, word, orbit) with deterministic block-major ordering
  std::vector<std::pair<int, std::uint64_t>> jobs;
  for (int n = 1; n <= n_max; ++n)
    for (std::uint64_t code = 0; code < (1ull << n); ++code) jobs.emplace_back(n, code);
  // long enumerations announce progress on the error stream only
  const bool report = jobs.size() >= (1u << 16);
  std::atomic<std::size_t> done{0};
  run_blocks(jobs.size(), threads, [&](std::size_t block, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const Word w = word_from_code(jobs[i].first, jobs[i].second);
      for (const auto& orbit : fixed_points(pair, w)) visit(block, orbit);
    }
    if (report)
      std::fprintf(stderr, "enumeration: %zu/%zu blocks\n", done.fetch_add(1) + 1,
                   block_count(jobs.size()));
  });
}

}  // namespace detail

inline GapEstimate gap_estimate(const FiberMapPair& pair, int n_max, unsigned threads = 1) {
  if (n_max < 1) throw std::invalid_argument("gap_estimate: n_max must be >= 1");
  GapEstimate out;
  out.n_max = n_max;
  const std::size_t nb = kReduceBlocks;
  std::vector<double> block_max(nb, -std::numeric_limits<double>::infinity());
  std::vector<PeriodicOrbit> block_arg(nb);
  std::vector<long> block_inc(nb, 0), block_exc(nb, 0);
  detail::enumerate_orbits(pair, n_max, threads, [&](std::size_t b, const PeriodicOrbit& o) {
    if (orbit_excluded(o.word, o.fix)) {
      ++block_exc[b];
      return;
    }
    ++block_inc[b];
    if (o.exponent > block_max[b]) {
      block_max[b] = o.exponent;
      block_arg[b] = o;
    }
  });
  double chi = -std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < nb; ++b) {
    out.included_count += block_inc[b];
    out.excluded_count += block_exc[b];
    if (block_max[b] > chi) {
      chi = block_max[b];
      out.argmax = block_arg[b];
    }
  }
  out.chi_tilde = chi;
  out.beta_tilde = std::exp(chi);
  out.margin = std::log(pair.beta) - chi;
  return out;
}

struct SpectrumPoint {
  Word word;
  double fix = 0.0;
  double multiplier = 0.0;
  double exponent = 0.0;
  Stability stability = Stability::neutral;
  bool excluded = false;
};

// Every per-period exponent of every periodic orbit with |word| <= n_max,
// tagged with the excluded-set membership.
inline std::vector<SpectrumPoint> spectrum_sample(const FiberMapPair& pair, int n_max,
                                                  unsigned threads = 1) {
  if (n_max < 1) throw std::invalid_argument("spectrum_sample: n_max must be >= 1");
  const std::size_t nb = kReduceBlocks;
  std::vector<std::vector<SpectrumPoint>> parts(nb);
  detail::enumerate_orbits(pair, n_max, threads, [&](std::size_t b, const PeriodicOrbit& o) {
    SpectrumPoint p;
    p.word = o.word;
    p.fix = o.fix;
    p.multiplier = o.multiplier;
    p.exponent = o.exponent;
    p.stability = o.stability;
    p.excluded = orbit_excluded(o.word, o.fix);
    parts[b].push_back(std::move(p));
  });
  std::vector<SpectrumPoint> all;
  for (auto& part : parts)
    for (auto& p : part) all.push_back(std::move(p));
  return all;
}

struct DistortionProfile {
  std::vector<int> iterates;            // m = 0..m_max
  std::vector<double> ratios;           // max/min of (f0^m)' over the interval
  std::vector<double> tempered_rates;   // (1/m) log ratio_m, m >= 1
};

// max/min ratio of (f0^m)' over J with its tempered rate; the rate decreases
// toward zero for C^1 maps.
inline DistortionProfile distortion_profile(const FiberMapPair& pair, Interval J, int m_max) {
  if (!(J.lo > 0.0 && J.hi < 1.0))
    throw std::invalid_argument("distortion_profile: interval must sit inside (0,1)");
  DistortionProfile prof;
  const auto xs = linspace(J.lo, J.hi, 200);
  std::vector<double> acc(xs.size(), 0.0), pts(xs);
  prof.iterates.push_back(0);
  prof.ratios.push_back(1.0);
  for (int m = 1; m <= m_max; ++m) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      acc[i] += std::log(pair.f0_deriv(pts[i]));
      pts[i] = pair.f0_value(pts[i]);
    }
    const auto [mn, mx] = std::minmax_element(acc.begin(), acc.end());
    prof.iterates.push_back(m);
    prof.ratios.push_back(std::exp(*mx - *mn));
    prof.tempered_rates.push_back((*mx - *mn) / static_cast<double>(m));
  }
  return prof;
}

}  // namespace porcupine
