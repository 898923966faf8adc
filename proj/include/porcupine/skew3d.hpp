#pragma once

#include <cmath>
#include <string>

#include "porcupine/core.hpp"
#include "porcupine/domains.hpp"
#include "porcupine/fiber_maps.hpp"
#include "porcupine/symbolic.hpp"

namespace porcupine {

// Affine two-branch horseshoe on the unit square (s = u = 1), Markov over
// the rectangles C0 = {xu <= 1/sigma_u} and C1 = {xu >= 1 - 1/sigma_u}.
struct HorseshoeModel {
  double sigma_s = 1.0 / 3.0;
  double sigma_u = 3.0;
};

inline void validate_model(const HorseshoeModel& m, const FiberMapPair& pair) {
  if (!(m.sigma_u > pair.beta))
    throw ConstructionError("domination fails: sigma_u must exceed beta");
  if (!(m.sigma_s < std::min(pair.lambda, pair.gamma_prime)))
    throw ConstructionError("domination fails: sigma_s must undercut min(lambda, gamma')");
  if (!(m.sigma_s < 0.5 && 1.0 / m.sigma_u < 0.5))
    throw ConstructionError("branch rectangles must be disjoint");
}

struct Point3 {
  double xs = 0.0;
  double xu = 0.0;
  double x = 0.0;
};

struct StepResult {
  Point3 point;
  int rectangle = -1;  // 0/1, or -1 when the base escaped the Markov bands
  bool escaped = false;
};

inline int base_symbol_forward(const HorseshoeModel& m, double xu) {
  if (xu <= 1.0 / m.sigma_u + kBandTol) return 0;
  if (xu >= 1.0 - 1.0 / m.sigma_u - kBandTol) return 1;
  return -1;
}

inline int base_symbol_backward(const HorseshoeModel& m, double xs) {
  if (xs <= m.sigma_s + kBandTol) return 0;
  if (xs >= 1.0 - m.sigma_s - kBandTol) return 1;
  return -1;
}

// One application of F: the affine branch on the base, the matching fiber map
// above it. Orbits leaving the Markov bands terminate with an escape event.
inline StepResult step(const HorseshoeModel& m, const FiberMapPair& pair, const Point3& p) {
  StepResult out;
  const int sym = base_symbol_forward(m, p.xu);
  if (sym < 0) {
    out.escaped = true;
    out.point = p;
    return out;
  }
  out.rectangle = sym;
  if (sym == 0) {
    out.point.xs = m.sigma_s * p.xs;
    out.point.xu = m.sigma_u * p.xu;
    out.point.x = pair.f0_value(p.x);
  } else {
    out.point.xs = 1.0 - m.sigma_s + m.sigma_s * p.xs;
    out.point.xu = m.sigma_u * p.xu - (m.sigma_u - 1.0);
    out.point.x = pair.f1_value(p.x);
  }
  return out;
}

inline Point3 step_base_backward(const HorseshoeModel& m, const Point3& p, int sym) {
  Point3 out = p;
  if (sym == 0) {
    out.xs = p.xs / m.sigma_s;
    out.xu = p.xu / m.sigma_u;
  } else {
    out.xs = (p.xs - (1.0 - m.sigma_s)) / m.sigma_s;
    out.xu = (p.xu + (m.sigma_u - 1.0)) / m.sigma_u;
  }
  return out;
}

namespace detail {

inline double geometric_digit_sum(const Tail& tail, bool leftward, double r,
                                  std::size_t skip_weight) {
  // sum over k >= 0 of tail.symbol(k) * r^(skip_weight + k), closed form
  const std::size_t L = tail.period_length();
  double period_sum = 0.0;
  for (std::size_t j = 0; j < L; ++j)
    period_sum += static_cast<double>(tail.symbol(j, leftward)) * std::pow(r, double(j));
  return std::pow(r, double(skip_weight)) * period_sum / (1.0 - std::pow(r, double(L)));
}

}  // namespace detail

// The base point whose itinerary under the horseshoe is `seq`; exact
// geometric series for eventually periodic sequences.
inline std::pair<double, double> code_point(const HorseshoeModel& m, const SeqSpec& seq) {
  // xs encodes the past: xs = sum_{i>=1} xi_{-i} (1-sigma_s) sigma_s^{i-1}
  double xs = 0.0;
  const std::size_t nl = seq.left_core.size();
  for (std::size_t i = 1; i <= nl; ++i)
    xs += static_cast<double>(seq.bit_at(-static_cast<long>(i))) *
          std::pow(m.sigma_s, double(i - 1));
  xs += detail::geometric_digit_sum(seq.left_tail, true, m.sigma_s, nl);
  xs *= (1.0 - m.sigma_s);

  // xu encodes the future: xu = sum_{i>=0} xi_i (sigma_u - 1) sigma_u^{-(i+1)}
  const double r = 1.0 / m.sigma_u;
  double xu = 0.0;
  const std::size_t nr = seq.right_core.size();
  for (std::size_t i = 0; i < nr; ++i)
    xu += static_cast<double>(seq.bit_at(static_cast<long>(i))) * std::pow(r, double(i));
  xu += detail::geometric_digit_sum(seq.right_tail, false, r, nr);
  xu *= (m.sigma_u - 1.0) * r;
  return {xs, xu};
}

// Reads the itinerary of a base point on the window [lo, hi] (backward
// symbols via the inverse branches).
inline Word base_itinerary(const HorseshoeModel& m, double xs, double xu, long lo, long hi) {
  if (lo > hi) throw std::invalid_argument("base_itinerary: window out of order");
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(hi - lo + 1), 0);
  Point3 fwd{xs, xu, 0.0};
  for (long i = 0; i <= hi; ++i) {
    const int sym = base_symbol_forward(m, fwd.xu);
    if (sym < 0) throw ConstructionError("base_itinerary: point escaped forward");
    if (i >= lo) bits[static_cast<std::size_t>(i - lo)] = static_cast<std::uint8_t>(sym);
    fwd.xs = sym ? 1.0 - m.sigma_s + m.sigma_s * fwd.xs : m.sigma_s * fwd.xs;
    fwd.xu = sym ? m.sigma_u * fwd.xu - (m.sigma_u - 1.0) : m.sigma_u * fwd.xu;
  }
  Point3 bwd{xs, xu, 0.0};
  for (long i = -1; i >= lo; --i) {
    const int sym = base_symbol_backward(m, bwd.xs);
    if (sym < 0) throw ConstructionError("base_itinerary: point escaped backward");
    bwd = step_base_backward(m, bwd, sym);
    if (i <= hi) bits[static_cast<std::size_t>(i - lo)] = static_cast<std::uint8_t>(sym);
  }
  return Word(std::move(bits));
}

// A fiber periodic orbit lifted to the canonically associated 3D saddle.
struct LiftedOrbit {
  Word word;
  PeriodicOrbit fiber;
  double xs = 0.0;
  double xu = 0.0;
  int index = 0;  // 2 iff the fiber multiplier exceeds 1; 0 flags neutral
  bool neutral = false;
  double return_error = 0.0;  // 3D displacement after |word| steps
};

inline LiftedOrbit lift_periodic(const HorseshoeModel& m, const FiberMapPair& pair,
                                 const PeriodicOrbit& orbit) {
  LiftedOrbit lifted;
  lifted.word = orbit.word;
  lifted.fiber = orbit;
  const SeqSpec seq = SeqSpec::two_sided_periodic(orbit.word);
  const auto [xs, xu] = code_point(m, seq);
  lifted.xs = xs;
  lifted.xu = xu;
  if (orbit.stability == Stability::neutral) {
    lifted.neutral = true;
    lifted.index = 0;
  } else {
    lifted.index = orbit.stability == Stability::repelling ? 2 : 1;
  }
  // Verify the closed orbit one step at a time against freshly coded base
  // points; iterating the expanding base map directly would amplify rounding
  // by sigma_u per step and drown long words in noise.
  SeqSpec rotated = seq;
  double x = orbit.fix;
  double worst = 0.0;
  for (std::size_t i = 0; i < orbit.word.size(); ++i) {
    const auto [cxs, cxu] = code_point(m, rotated);
    const StepResult s = step(m, pair, Point3{cxs, cxu, x});
    if (s.escaped) throw ConstructionError("lift_periodic: orbit escaped the cube");
    if (s.rectangle != orbit.word[i])
      throw ConstructionError("lift_periodic: base itinerary mismatch");
    rotated = shift(rotated);
    const auto [nxs, nxu] = code_point(m, rotated);
    x = s.point.x;
    worst = std::max({worst, std::abs(s.point.xs - nxs), std::abs(s.point.xu - nxu)});
  }
  worst = std::max(worst, std::abs(x - orbit.fix));
  lifted.return_error = worst;
  if (lifted.return_error > 1e-9)
    throw ConstructionError("lift_periodic: orbit does not close up");
  return lifted;
}

// The spine over a sequence: the coded base point crossed with the certified
// fiber enclosure.
struct SpineResult {
  double xs = 0.0;
  double xu = 0.0;
  AdmissibleDomain fiber;
};

inline SpineResult spine(const HorseshoeModel& m, const FiberMapPair& pair, const SeqSpec& seq,
                         int max_depth, double width_tol) {
  SpineResult out;
  const auto [xs, xu] = code_point(m, seq);
  out.xs = xs;
  out.xu = xu;
  out.fiber = classify_fiber(pair, seq, max_depth, width_tol);
  return out;
}

// The three finite checks behind the heterodimensional cycle between P and Q.
struct CycleReport {
  bool cycle_condition_exact = false;  // f1(1) = 0
  bool stable_leaf_ok = false;         // fiber orbits over the 0-leaf climb to 1
  bool unstable_leaf_ok = false;       // backward f0 compositions fall to 0
  bool transfer_ok = false;            // the top segment maps into the plane x=0
  bool pass = false;
  double worst_forward_gap = 0.0;
  double worst_backward_gap = 0.0;
  double worst_transfer = 0.0;
};

inline CycleReport verify_cycle(const HorseshoeModel& m, const FiberMapPair& pair,
                                int samples = 20) {
  CycleReport rep;
  rep.cycle_condition_exact = pair.f1_value(1.0) == 0.0;

  rep.stable_leaf_ok = true;
  rep.unstable_leaf_ok = true;
  for (int i = 1; i <= samples; ++i) {
    const double x = static_cast<double>(i) / (samples + 1);
    // forward along the all-zeros itinerary: the full 3D orbit over the
    // stable leaf of the base fixed point must approach (0, 0, 1)
    Point3 p{0.7, 0.0, x};
    double prev = x;
    bool monotone = true;
    for (int k = 0; k < 2000 && 1.0 - p.x > 1e-6; ++k) {
      const StepResult s = step(m, pair, p);
      if (s.escaped || s.rectangle != 0) monotone = false;
      if (s.point.x < prev) monotone = false;
      prev = s.point.x;
      p = s.point;
    }
    rep.worst_forward_gap = std::max(rep.worst_forward_gap, 1.0 - p.x);
    if (!monotone || 1.0 - p.x > 1e-6) rep.stable_leaf_ok = false;

    double y = x;
    for (int k = 0; k < 4000 && y > 1e-6; ++k) y = invert(pair, MapKind::f0, y);
    rep.worst_backward_gap = std::max(rep.worst_backward_gap, y);
    if (y > 1e-6) rep.unstable_leaf_ok = false;
  }

  rep.transfer_ok = true;
  for (int i = 0; i <= samples; ++i) {
    const double xu = (1.0 - 1.0 / m.sigma_u) +
                      (1.0 / m.sigma_u) * static_cast<double>(i) / samples;
    const StepResult s = step(m, pair, Point3{0.0, xu, 1.0});
    rep.worst_transfer = std::max(rep.worst_transfer, std::abs(s.point.x));
    if (s.escaped || s.rectangle != 1 || s.point.x != 0.0) rep.transfer_ok = false;
  }

  rep.pass = rep.cycle_condition_exact && rep.stable_leaf_ok && rep.unstable_leaf_ok &&
             rep.transfer_ok;
  return rep;
}

}  // namespace porcupine
