#pragma once

#include <cmath>

#include "porcupine/core.hpp"
#include "porcupine/fiber_maps.hpp"

namespace porcupine {

// Exact interval image under f_[word]: monotone endpoint transport, endpoints
// swapped once per orientation-reversing letter.
inline Interval interval_image(const FiberMapPair& pair, const Word& w, Interval J) {
  double lo = J.lo, hi = J.hi;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i]) {
      const double nlo = pair.f1_value(hi), nhi = pair.f1_value(lo);
      lo = nlo;
      hi = nhi;
    } else {
      lo = pair.f0_value(lo);
      hi = pair.f0_value(hi);
    }
  }
  return Interval(lo, hi);
}

// The admissible band [f0^{-2}(b0), b0] hosting the successor construction.
inline Interval admissible_band(const FiberMapPair& pair) {
  const double f2 = invert(pair, MapKind::f0, invert(pair, MapKind::f0, pair.b0));
  return Interval(f2, pair.b0);
}

// The fundamental domain [f0^{-2}(b0), f0^{-1}(b0)] every chain must cover.
inline Interval lower_fundamental_domain(const FiberMapPair& pair) {
  const double f1v = invert(pair, MapKind::f0, pair.b0);
  const double f2v = invert(pair, MapKind::f0, f1v);
  return Interval(f2v, f1v);
}

// One expanding step: the word 0^{n(J)} 1 0^{m(J)} together with derivative
// bounds over J and the resulting image.
struct SuccessorStep {
  Word word;
  int n = 0;
  int m = 0;
  Interval source;
  Interval image;
  double min_deriv = 0.0;
  double max_deriv = 0.0;
};

struct SuccessorChain {
  std::vector<SuccessorStep> steps;
  Interval final_interval;
  int length() const { return static_cast<int>(steps.size()); }
};

namespace detail {

inline void require_band_interval(const FiberMapPair& pair, const Interval& J) {
  const Interval band = admissible_band(pair);
  if (!J.nontrivial()) throw std::invalid_argument("interval must be non-trivial");
  if (!band.contains(J, kBandTol))
    throw std::invalid_argument("interval must lie in [f0^{-2}(b0), b0]");
}

}  // namespace detail

inline SuccessorStep expanding_step(const FiberMapPair& pair, Interval J) {
  detail::require_band_interval(pair, J);
  SuccessorStep step;
  step.source = J;

  // n(J) = min{n >= 1 : f0^n(J) in [a1, 1)}
  Interval cur(pair.f0_value(J.lo), pair.f0_value(J.hi));
  int n = 1;
  const int n_guard = 4 * pair.N + 64;
  while (!(cur.lo >= pair.a1 - kBandTol && cur.hi < 1.0)) {
    cur = Interval(pair.f0_value(cur.lo), pair.f0_value(cur.hi));
    if (++n > n_guard) throw ConstructionError("expanding step: n-search did not terminate");
  }
  step.n = n;

  // jump into the expanding region
  cur = Interval(pair.f1_value(cur.hi), pair.f1_value(cur.lo));

  // m(J) = min{m >= 0 : f0^m(J') meets I0}; the family guarantees m >= 1.
  const Interval I0 = pair.fundamental_I0();
  int m = 0;
  while (!cur.intersects(I0, kBandTol)) {
    cur = Interval(pair.f0_value(cur.lo), pair.f0_value(cur.hi));
    if (++m > n_guard) throw ConstructionError("expanding step: m-search did not terminate");
  }
  if (m < 1)
    throw ConstructionError("expanding step: m(J)=0 signals malformed fundamental domains");
  step.m = m;

  step.word.append_run(0, static_cast<std::size_t>(n));
  step.word.push_back(1);
  step.word.append_run(0, static_cast<std::size_t>(m));
  step.image = cur;

  double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0;
  for (double x : linspace(J.lo, J.hi, 100)) {
    const double d = std::exp(compose_log_deriv(pair, step.word, x));
    dmin = std::min(dmin, d);
    dmax = std::max(dmax, d);
  }
  step.min_deriv = dmin;
  step.max_deriv = dmax;
  return step;
}

// Iterates expanding steps until the image escapes the band; the final
// interval then contains the lower fundamental domain.
inline SuccessorChain successor_chain(const FiberMapPair& pair, Interval J) {
  detail::require_band_interval(pair, J);
  SuccessorChain chain;
  const Interval band = admissible_band(pair);
  Interval cur = J;
  for (int guard = 0; guard < 256; ++guard) {
    SuccessorStep step = expanding_step(pair, cur);
    cur = step.image;
    chain.steps.push_back(std::move(step));
    if (!band.contains(cur, kBandTol)) break;
  }
  chain.final_interval = cur;
  if (!cur.contains(lower_fundamental_domain(pair), kBandTol))
    throw ConstructionError("successor chain did not cover the fundamental domain");
  return chain;
}

inline Word chain_word(const SuccessorChain& chain) {
  Word w;
  for (const auto& s : chain.steps) w.append(s.word);
  return w;
}

struct SweepResult {
  Word word;
  Interval image;  // image of the swept interval, contains the fundamental domain
};

// Sweeping property: a word driving any closed H in (0,1) onto a cover of the
// lower fundamental domain.
inline SweepResult sweep(const FiberMapPair& pair, Interval H) {
  if (!H.nontrivial() || H.lo <= 0.0 || H.hi >= 1.0)
    throw std::invalid_argument("sweep needs a non-trivial closed interval inside (0,1)");
  const Interval band = admissible_band(pair);
  Word word;

  // least m with f_[0^m 1](H) inside (0, f0^{-2}(b0))
  Interval cur = H;
  int m = 0;
  const int guard = 100000;
  while (true) {
    const Interval jumped(pair.f1_value(cur.hi), pair.f1_value(cur.lo));
    if (jumped.hi < band.lo && jumped.lo > 0.0) {
      cur = jumped;
      break;
    }
    cur = Interval(pair.f0_value(cur.lo), pair.f0_value(cur.hi));
    if (++m > guard) throw ConstructionError("sweep: mixing push did not terminate");
  }
  word.append_run(0, static_cast<std::size_t>(m));
  word.push_back(1);

  // least k with the pushed interval meeting the open band interior
  int k = 0;
  while (!(cur.hi > band.lo + kBandTol && cur.lo < band.hi - kBandTol)) {
    cur = Interval(pair.f0_value(cur.lo), pair.f0_value(cur.hi));
    if (++k > guard) throw ConstructionError("sweep: return push did not terminate");
  }
  word.append_run(0, static_cast<std::size_t>(k));

  const Interval J = cur.clamped(band);
  SuccessorChain chain = successor_chain(pair, J);
  word.append(chain_word(chain));

  SweepResult out;
  out.word = std::move(word);
  out.image = interval_image(pair, out.word, H);
  if (!out.image.contains(lower_fundamental_domain(pair), kBandTol))
    throw ConstructionError("sweep postcondition failed: fundamental domain not covered");
  return out;
}

namespace detail {

// Bisection on f_[w](x) - x over an interval whose endpoint values have
// opposite signs; the covering f_[w](J) >= J guarantees the bracket.
inline double bracketed_fixed_point(const FiberMapPair& pair, const Word& w, Interval J) {
  double lo = J.lo, hi = J.hi;
  double glo = compose_value(pair, w, lo) - lo;
  double ghi = compose_value(pair, w, hi) - hi;
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if (glo * ghi > 0.0)
    throw ConstructionError("no sign change for the expanding fixed point (invalid pair?)");
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = compose_value(pair, w, mid) - mid;
    if (glo * gm <= 0.0) {
      hi = mid;
      ghi = gm;
    } else {
      lo = mid;
      glo = gm;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

// The unique expanding fixed point of the chain word of J, inside J.
inline PeriodicOrbit expanding_fixed_point(const FiberMapPair& pair, Interval J) {
  SuccessorChain chain = successor_chain(pair, J);
  const Word w = chain_word(chain);
  const double p = detail::bracketed_fixed_point(pair, w, J);
  const double mult = std::exp(compose_log_deriv(pair, w, p));
  PeriodicOrbit orbit = make_orbit(w, p, mult);
  if (std::abs(compose_value(pair, w, p) - p) > kResidualTol)
    throw ConstructionError("expanding fixed point residual above tolerance");
  return orbit;
}

// A repelling periodic point within eps of x, built from a sweep of
// [x-eps, x+eps] followed by a covering return word (f0-pushes, f1 jumps,
// f0-pushes) so that the full word maps the window over itself.
inline PeriodicOrbit periodic_point_near(const FiberMapPair& pair, double x, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("periodic_point_near: eps must be positive");
  Interval H(std::max(x - eps, kBandTol), std::min(x + eps, 1.0 - kBandTol));
  if (!H.nontrivial())
    throw std::invalid_argument("periodic_point_near: window does not meet (0,1)");

  SweepResult swept = sweep(pair, H);
  Word word = swept.word;
  // Track the covered fundamental domain rather than the full image: its
  // bounded width ratio keeps every later intermediate clear of the
  // endpoints, which keeps long-word evaluation noise below the residual
  // contract.
  Interval cur = lower_fundamental_domain(pair);

  // Greedy cover: push deep toward 1, jump with f1 to the expanding side,
  // push up; every jump roughly doubles the reachable width ratio.
  const double deep = std::max(pair.a1, 1.0 - pair.a0 / pair.c1);
  const int max_rounds = 16;
  bool covered = cur.contains(H, 0.0);
  for (int round = 0; round < max_rounds && !covered; ++round) {
    while (cur.lo < deep) {
      cur = Interval(pair.f0_value(cur.lo), pair.f0_value(cur.hi));
      word.push_back(0);
      if (word.size() > 100000) throw ConstructionError("covering word grew without bound");
    }
    cur = Interval(pair.f1_value(cur.hi), pair.f1_value(cur.lo));
    word.push_back(1);
    while (!cur.contains(H, 0.0) && cur.lo <= H.lo) {
      cur = Interval(pair.f0_value(cur.lo), pair.f0_value(cur.hi));
      word.push_back(0);
    }
    covered = cur.contains(H, 0.0);
  }
  if (!covered)
    throw SearchBudgetError("periodic_point_near: covering rounds exhausted", 0.0);

  // The covering gives a fixed point in H; enforce expansion, doubling the
  // word if a contracting root was hit.
  for (int attempt = 0; attempt < 4; ++attempt) {
    const double p = detail::bracketed_fixed_point(pair, word, H);
    const double mult = std::exp(compose_log_deriv(pair, word, p));
    if (mult > 1.0 + kNeutralBand) {
      PeriodicOrbit orbit = make_orbit(word, p, mult);
      if (std::abs(compose_value(pair, word, p) - p) > kResidualTol)
        throw ConstructionError("periodic point residual above tolerance");
      return orbit;
    }
    Word doubled = word;
    doubled.append(word);
    word = std::move(doubled);
  }
  throw SearchBudgetError("periodic_point_near: no expanding fixed point found", 0.0);
}

}  // namespace porcupine
