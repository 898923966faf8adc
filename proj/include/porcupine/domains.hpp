#pragma once

#include <cmath>
#include <string>

#include "porcupine/core.hpp"
#include "porcupine/fiber_maps.hpp"
#include "porcupine/itinerary.hpp"
#include "porcupine/symbolic.hpp"

namespace porcupine {

enum class FiberStatus { trivial, nontrivial, undetermined };

inline const char* to_string(FiberStatus s) {
  switch (s) {
    case FiberStatus::trivial: return "trivial";
    case FiberStatus::nontrivial: return "nontrivial";
    default: return "undetermined";
  }
}

// Certified enclosure data for one admissible domain I_[xi].
struct AdmissibleDomain {
  std::vector<Interval> approximations;  // depth 1, 2, ... (nested)
  std::vector<double> bounds;            // gamma^k * beta^(m-k) per depth
  double upper_bound_width = 1.0;        // bound at the deepest computed depth
  FiberStatus status = FiberStatus::undetermined;
  int decided_depth = -1;
  std::string route;  // which rule settled the status

  Interval deepest() const {
    return approximations.empty() ? Interval(0.0, 1.0) : approximations.back();
  }
};

// I at finite depth: image of [0,1] under f_{xi_{-1}} o ... o f_{xi_{-m}},
// where `left` lists positions -m..-1 left to right.
inline Interval domain_at_depth(const FiberMapPair& pair, const Word& left) {
  Interval I(0.0, 1.0);
  for (std::size_t i = 0; i < left.size(); ++i) {
    if (left[i]) {
      I = Interval(pair.f1_value(I.hi), pair.f1_value(I.lo));
    } else {
      I = Interval(pair.f0_value(I.lo), pair.f0_value(I.hi));
    }
  }
  return I;
}

namespace detail {

// Two-point witness for nontriviality of a periodic-tail domain: the nested
// endpoints converge under the square of the period map; distinct limits
// certify an interval.
inline bool periodic_tail_nontrivial(const FiberMapPair& pair, const Word& period,
                                     Interval seed) {
  Word sq = period;
  sq.append(period);
  double lo = seed.lo, hi = seed.hi;
  for (int it = 0; it < 1 << 16; ++it) {
    const double nlo = compose_value(pair, sq, lo);
    const double nhi = compose_value(pair, sq, hi);
    const bool settled = std::abs(nlo - lo) <= kResidualTol && std::abs(nhi - hi) <= kResidualTol;
    lo = nlo;
    hi = nhi;
    if (settled) break;
  }
  return std::abs(hi - lo) > 100.0 * kResidualTol;
}

}  // namespace detail

// Classifies the fiber over `seq` from its left half. The triple (deepest
// enclosure, contraction bound, status) is the contract; `undetermined` is a
// legitimate outcome.
inline AdmissibleDomain classify_fiber(const FiberMapPair& pair, const SeqSpec& seq,
                                       int max_depth, double width_tol) {
  if (max_depth < 1) throw std::invalid_argument("classify_fiber: max_depth must be >= 1");
  AdmissibleDomain out;

  const double lg = std::log(pair.gamma), lb = std::log(pair.beta);
  std::size_t ones = 0;
  double log_bound = 0.0;
  int trivial_at = -1;
  for (int m = 1; m <= max_depth; ++m) {
    const Word w = seq.left_word(static_cast<std::size_t>(m));
    out.approximations.push_back(domain_at_depth(pair, w));
    ones += w[0];  // the newly added symbol sits at position -m, i.e. the front
    log_bound = static_cast<double>(ones) * lg + static_cast<double>(m - ones) * lb;
    out.bounds.push_back(std::exp(log_bound));
    if (trivial_at < 0 && out.bounds.back() < width_tol) {
      trivial_at = m;
      break;
    }
  }
  out.upper_bound_width = out.bounds.back();

  if (seq.left_tail.kind == TailKind::zeros) {
    // The domain stabilizes at finite depth and is a genuine interval.
    out.status = FiberStatus::nontrivial;
    out.route = "all-zeros-tail";
    out.decided_depth = static_cast<int>(seq.left_core.size());
    return out;
  }
  if (trivial_at > 0) {
    out.status = FiberStatus::trivial;
    out.route = "contraction-bound";
    out.decided_depth = trivial_at;
    return out;
  }
  if (seq.left_tail.kind == TailKind::periodic) {
    // Period map read forwards: positions -L..-1 of a pure periodic tail.
    SeqSpec pure;
    pure.left_tail = seq.left_tail;
    const Word period = pure.left_word(seq.left_tail.period.size());
    bool has_repeller = false;
    const Interval seed = out.deepest();
    for (double r : find_composition_fixed_points(pair, period)) {
      const double mult = std::exp(compose_log_deriv(pair, period, r));
      if (mult > 1.0 + kNeutralBand && seed.contains(r, 1e-6)) has_repeller = true;
    }
    if (has_repeller && detail::periodic_tail_nontrivial(pair, period, Interval(0.0, 1.0))) {
      out.status = FiberStatus::nontrivial;
      out.route = "repelling-fixed-point";
      out.decided_depth = max_depth;
      return out;
    }
  }
  out.status = FiberStatus::undetermined;
  out.route = "undetermined";
  out.decided_depth = -1;
  return out;
}

// Constructive family of distinct sequences whose admissible domains all
// contain J: left words 1 0^{K_l} ... 1 0^{K_1} with strictly increasing K.
inline std::vector<SeqSpec> nontrivial_family(const FiberMapPair& pair, Interval J,
                                              const SeqSpec& xi_plus, int count) {
  if (count < 1) throw std::invalid_argument("nontrivial_family: count must be >= 1");
  if (!(J.lo > 0.0 && J.hi < 1.0 && J.nontrivial()))
    throw std::invalid_argument("nontrivial_family: J must be closed inside (0,1)");

  const FiberMap f0{MapKind::f0, &pair};
  const FiberMap f1{MapKind::f1, &pair};
  auto pull_back_f0 = [&](Interval I) {
    return Interval(invert(f0, I.lo), invert(f0, I.hi));
  };
  auto pull_back_f1 = [&](Interval I) {
    return Interval(invert(f1, I.hi), invert(f1, I.lo));
  };

  // Base blocks: K_l minimal subject to strict increase; the current window
  // J_l is pulled back through f0^{-K} then f1^{-1}.
  const int blocks = 3;
  std::vector<int> K;
  Interval cur = J;
  int prev = -1;
  for (int l = 0; l < blocks; ++l) {
    int k = 0;
    Interval pulled = cur;
    while (k <= prev || !(pulled.hi < pair.c1 - kBandTol)) {
      pulled = pull_back_f0(pulled);
      ++k;
      if (k > 100000) throw ConstructionError("nontrivial_family: pull-back stalled");
    }
    K.push_back(k);
    prev = k;
    cur = pull_back_f1(pulled);
  }

  std::vector<SeqSpec> family;
  for (int v = 0; v < count; ++v) {
    std::vector<int> kv = K;
    kv.back() += v;  // deeper zero runs keep the containment and distinguish members
    Word left;
    for (int l = static_cast<int>(kv.size()) - 1; l >= 0; --l) {
      left.push_back(1);
      left.append_run(0, static_cast<std::size_t>(kv[static_cast<std::size_t>(l)]));
    }
    const Interval dom = domain_at_depth(pair, left);
    if (!dom.contains(J, kBandTol))
      throw ConstructionError("nontrivial_family: containment verification failed");
    SeqSpec s;
    s.left_tail = Tail::zeros_tail();
    s.left_core = left;
    s.right_core = xi_plus.right_core;
    s.right_tail = xi_plus.right_tail;
    family.push_back(std::move(s));
  }
  return family;
}

// Widths of the finite-depth domains at the requested depths (increasing).
inline std::vector<double> width_profile(const FiberMapPair& pair, const SeqSpec& seq,
                                         const std::vector<int>& depths) {
  std::vector<double> widths;
  int prev = 0;
  for (int d : depths) {
    if (d <= prev) throw std::invalid_argument("width_profile: depths must increase");
    prev = d;
    widths.push_back(domain_at_depth(pair, seq.left_word(static_cast<std::size_t>(d))).width());
  }
  return widths;
}

}  // namespace porcupine
