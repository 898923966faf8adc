#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "porcupine/core.hpp"

namespace porcupine {

// Parameters of the concrete two-map family on [0,1].
//
// f1 is the affine decreasing contraction x -> c1*(1-x).
// f0 is a monotone C^1 interpolant fixing 0 and 1 with f0'(0)=beta and
// f0'(1)=lambda. Its derivative profile is a plateau at beta on [0,u]
// followed by a cubic smoothstep descent to lambda on [u,1]; u is forced by
// the requirement f0(1)=1, namely u=(2-beta-lambda)/(beta-lambda).
struct FiberMapParams {
  double beta = 1.1;
  double lambda = 0.35;
  double c1 = 0.40;
  double a0 = 0.06;  // left endpoint of the fundamental domain I0
  int N = 28;        // iterate count with f0^N(I0) = I1
  double resolution = 1e-4;
};

enum class MapKind { f0, f1 };

class FiberMapPair {
 public:
  double beta = 0, lambda = 0, c1 = 0;
  double u = 0;  // end of the slope-beta segment of f0
  double a0 = 0, b0 = 0, a1 = 0, b1 = 0;
  int N = 0;
  double gamma = 0, gamma_prime = 0;  // max/min |f1'| on [0,1]
  double alpha = 0;                   // min over I0 of lambda*(f0^N)'
  double alpha_bar = 0;               // min |f1'| on [f1^2(a1), a1]
  double kappa = 0;                   // alpha_bar * alpha
  double resolution = 1e-4;

  double f0_value(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    if (x <= u) return beta * x;
    const double s = (x - u) / (1.0 - u);
    const double s3 = s * s * s;
    const double v =
        beta * u + (1.0 - u) * (lambda * s + (beta - lambda) * (s - s3 + 0.5 * s3 * s));
    return std::min(v, 1.0);
  }

  double f0_deriv(double x) const {
    if (x < 0.0) return beta;
    if (x > 1.0) return lambda;
    if (x <= u) return beta;
    const double s = (x - u) / (1.0 - u);
    const double h = 3.0 * s * s - 2.0 * s * s * s;  // smoothstep
    return lambda + (beta - lambda) * (1.0 - h);
  }

  double f1_value(double x) const { return c1 * (1.0 - x); }
  double f1_deriv(double) const { return -c1; }

  double value(MapKind k, double x) const {
    return k == MapKind::f0 ? f0_value(x) : f1_value(x);
  }
  double deriv(MapKind k, double x) const {
    return k == MapKind::f0 ? f0_deriv(x) : f1_deriv(x);
  }

  Interval fundamental_I0() const { return Interval(a0, b0); }
  Interval fundamental_I1() const { return Interval(a1, b1); }
};

// View over one map of the pair, carrying its orientation.
struct FiberMap {
  MapKind kind = MapKind::f0;
  const FiberMapPair* pair = nullptr;

  double value(double x) const { return pair->value(kind, x); }
  double deriv(double x) const { return pair->deriv(kind, x); }
  bool orientation_preserving() const { return kind == MapKind::f0; }
  Interval range() const {
    return kind == MapKind::f0 ? Interval(0.0, 1.0) : Interval(0.0, pair->c1);
  }
};

// The constraint on (beta, lambda) forced by the family's geometry.
inline double standing_inequality_value(double beta, double lambda) {
  return lambda * (1.0 - lambda) / (1.0 - 1.0 / beta);
}
inline bool standing_inequality_holds(double beta, double lambda) {
  return standing_inequality_value(beta, lambda) > 1.0;
}

// Monotone bisection x with map(x)=y, |map(x)-y| <= kRootTol.
inline double invert(const FiberMap& map, double y) {
  const Interval ran = map.range();
  if (y < ran.lo - kRootTol || y > ran.hi + kRootTol)
    throw std::domain_error("invert: value outside the map range");
  y = std::clamp(y, ran.lo, ran.hi);
  if (map.value(0.0) == y) return 0.0;
  if (map.value(1.0) == y) return 1.0;
  double lo = 0.0, hi = 1.0;
  const bool incr = map.orientation_preserving();
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double v = map.value(mid);
    if ((incr && v < y) || (!incr && v > y))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

inline double invert(const FiberMapPair& pair, MapKind k, double y) {
  return invert(FiberMap{k, &pair}, y);
}

// f_[word](x) = f_{w_n} o ... o f_{w_0} (x); the empty word is the identity.
inline double compose_value(const FiberMapPair& pair, const Word& w, double x) {
  for (std::size_t i = 0; i < w.size(); ++i)
    x = pair.value(w[i] ? MapKind::f1 : MapKind::f0, x);
  return x;
}

// Signed chain-rule derivative of f_[word] at x.
inline double compose_deriv(const FiberMapPair& pair, const Word& w, double x) {
  double d = 1.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const MapKind k = w[i] ? MapKind::f1 : MapKind::f0;
    d *= pair.deriv(k, x);
    x = pair.value(k, x);
  }
  return d;
}

// log|f_[word]'(x)| accumulated stepwise; immune to over/underflow on long
// words. Returns the log magnitude; the sign is (-1)^{#1s}.
inline double compose_log_deriv(const FiberMapPair& pair, const Word& w, double x) {
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const MapKind k = w[i] ? MapKind::f1 : MapKind::f0;
    acc += std::log(std::abs(pair.deriv(k, x)));
    x = pair.value(k, x);
  }
  return acc;
}

namespace detail {

inline void refine_root(const FiberMapPair& pair, const Word& w, double lo, double hi,
                        double glo, double ghi, std::vector<double>& out) {
  // bisection on g(x) = f_[w](x) - x over a bracket with opposite signs
  (void)glo;
  (void)ghi;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = compose_value(pair, w, mid) - mid;
    if ((compose_value(pair, w, lo) - lo) * gm <= 0.0)
      hi = mid;
    else
      lo = mid;
  }
  out.push_back(0.5 * (lo + hi));
}

inline void scan_cell(const FiberMapPair& pair, const Word& w, double x0, double x1,
                      double g0, double g1, int depth, std::vector<double>& out) {
  if (g0 * g1 < 0.0) {
    refine_root(pair, w, x0, x1, g0, g1, out);
    return;
  }
  if (depth <= 0) return;
  // Suspicion: both values tiny with no sign change can hide a double crossing.
  const double cell = x1 - x0;
  if (std::min(std::abs(g0), std::abs(g1)) < 4.0 * cell) {
    const int sub = 8;
    double px = x0, pg = g0;
    for (int i = 1; i <= sub; ++i) {
      const double x = x0 + cell * (static_cast<double>(i) / sub);
      const double g = (i == sub) ? g1 : compose_value(pair, w, x) - x;
      if (g == 0.0 && i != sub) out.push_back(x);
      scan_cell(pair, w, px, x, pg, g, depth - 1, out);
      px = x;
      pg = g;
    }
  }
}

}  // namespace detail

// All fixed points of f_[word] on [0,1] by sign-change scan plus bisection.
// The scan density doubles locally where a hidden pair of roots is suspected.
inline std::vector<double> find_composition_fixed_points(const FiberMapPair& pair,
                                                         const Word& w,
                                                         std::size_t base_grid = 2048) {
  if (w.empty()) throw std::invalid_argument("fixed points of the empty word are everything");
  std::vector<double> roots;
  const std::vector<double> xs = linspace(0.0, 1.0, base_grid);
  std::vector<double> gs(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) gs[i] = compose_value(pair, w, xs[i]) - xs[i];
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (gs[i] == 0.0) roots.push_back(xs[i]);
    detail::scan_cell(pair, w, xs[i], xs[i + 1], gs[i], gs[i + 1], 3, roots);
  }
  if (gs.back() == 0.0) roots.push_back(xs.back());
  std::sort(roots.begin(), roots.end());
  std::vector<double> dedup;
  for (double r : roots)
    if (dedup.empty() || r - dedup.back() > 1e-9) dedup.push_back(r);
  return dedup;
}

// One validated condition; `margin` is the worst sampled slack (negative on
// failure), `witness` the sample point attaining it.
struct ConditionCheck {
  std::string name;
  bool pass = false;
  double margin = 0.0;
  double witness = std::numeric_limits<double>::quiet_NaN();
  std::string note;
};

struct ConditionReport {
  std::vector<ConditionCheck> checks;
  bool all_pass = false;  // optional F_B excluded
  double resolution = 0.0;
  double alpha = 0.0, alpha_bar = 0.0, kappa = 0.0;
  int recomputed_N = -1;
  bool fb_holds = false;

  const ConditionCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

inline FiberMapPair build_pair(const FiberMapParams& p) {
  if (!(p.beta > 1.0)) throw std::invalid_argument("beta must exceed 1");
  if (!(p.lambda > 0.0 && p.lambda < 1.0)) throw std::invalid_argument("lambda must lie in (0,1)");
  if (!(p.c1 > 0.0 && p.c1 <= 1.0)) throw std::invalid_argument("c1 must lie in (0,1]");
  if (!(p.a0 > 0.0 && p.a0 < 1.0)) throw std::invalid_argument("a0 must lie in (0,1)");
  if (p.N < 1) throw std::invalid_argument("N must be positive");
  if (!(p.resolution > 0.0)) throw std::invalid_argument("resolution must be positive");

  FiberMapPair pair;
  pair.beta = p.beta;
  pair.lambda = p.lambda;
  pair.c1 = p.c1;
  pair.N = p.N;
  pair.resolution = p.resolution;

  const double u = (2.0 - p.beta - p.lambda) / (p.beta - p.lambda);
  if (!(u >= 0.0 && u < 1.0))
    throw ConstructionError("no monotone slope profile interpolates these endpoint slopes");
  pair.u = u;

  // Monotonicity of the interpolant: the derivative profile is positive by
  // construction; reject profiles that leave [lambda, beta] anywhere.
  for (double x : linspace(0.0, 1.0, 1000)) {
    const double d = pair.f0_deriv(x);
    if (!(d > 0.0) || d > p.beta + 1e-12 || d < p.lambda - 1e-12)
      throw ConstructionError("interpolant derivative escapes [lambda, beta]");
  }

  pair.a0 = p.a0;
  pair.b0 = pair.f0_value(p.a0);
  double a1 = p.a0;
  for (int k = 0; k < p.N; ++k) a1 = pair.f0_value(a1);
  pair.a1 = a1;
  pair.b1 = pair.f0_value(a1);
  if (!(pair.b1 < 1.0 && pair.a0 < pair.b0 && pair.b0 <= pair.a1))
    throw ConstructionError("fundamental domains out of order for these (a0, N)");

  pair.gamma = p.c1;        // affine f1: |f1'| is constant
  pair.gamma_prime = p.c1;
  pair.alpha_bar = p.c1;    // min |f1'| on [f1^2(a1), a1]

  // alpha = min over I0 of lambda*(f0^N)' on the validation grid.
  double min_dN = std::numeric_limits<double>::infinity();
  const std::size_t n_samples =
      std::max<std::size_t>(8, static_cast<std::size_t>((pair.b0 - pair.a0) / p.resolution));
  for (double x : linspace(pair.a0, pair.b0, n_samples)) {
    double d = 1.0, y = x;
    for (int k = 0; k < p.N; ++k) {
      d *= pair.f0_deriv(y);
      y = pair.f0_value(y);
    }
    min_dN = std::min(min_dN, d);
  }
  pair.alpha = p.lambda * min_dN;
  pair.kappa = pair.alpha_bar * pair.alpha;
  return pair;
}

// Grid-checks every standing condition of the family. Failures are reported,
// never thrown.
inline ConditionReport validate(const FiberMapPair& pair, double resolution = 0.0) {
  ConditionReport rep;
  const double res = resolution > 0.0 ? resolution : pair.resolution;
  rep.resolution = res;
  const auto grid01 = linspace(0.0, 1.0, std::max<std::size_t>(16, (std::size_t)(1.0 / res)));

  auto add = [&rep](ConditionCheck c) { rep.checks.push_back(std::move(c)); };

  {  // (F0.i): increasing, fixed points exactly {0,1}, endpoint slopes, global bounds
    ConditionCheck c;
    c.name = "F0.i";
    bool ok = pair.f0_value(0.0) == 0.0 && pair.f0_value(1.0) == 1.0;
    double margin = std::min(pair.beta - 1.0, std::min(pair.lambda, 1.0 - pair.lambda));
    double witness = 0.0;
    for (double x : grid01) {
      const double d = pair.f0_deriv(x);
      if (d <= 0.0) ok = false;
      if (d < pair.lambda - 1e-12 || d > pair.beta + 1e-12) {
        ok = false;
        witness = x;
      }
      if (x > 0.0 && x < 1.0) {
        const double gap = pair.f0_value(x) - x;  // no interior fixed point
        if (gap < margin) {
          margin = gap;
          witness = x;
        }
      }
    }
    if (pair.f0_deriv(0.0) != pair.beta || pair.f0_deriv(1.0) != pair.lambda) ok = false;
    c.pass = ok && margin > 0.0;
    c.margin = margin;
    c.witness = witness;
    c.note = "f0 increasing, fixes exactly {0,1}, f0'(0)=beta, f0'(1)=lambda";
    add(c);
  }

  // Recompute the fundamental-domain data.
  int n_connect = -1;
  {
    double y = pair.a0;
    for (int k = 1; k <= 4 * pair.N + 64; ++k) {
      y = pair.f0_value(y);
      if (std::abs(y - pair.a1) <= kConnectTol) {
        n_connect = k;
        break;
      }
    }
  }
  rep.recomputed_N = n_connect;

  {  // (F0.ii): domains, connection, expansion on [0,b0], contraction on [a1,1], alpha
    ConditionCheck c;
    c.name = "F0.ii";
    bool ok = true;
    ok &= std::abs(pair.b0 - pair.f0_value(pair.a0)) <= kConnectTol;
    ok &= std::abs(pair.b1 - pair.f0_value(pair.a1)) <= kConnectTol;
    ok &= n_connect == pair.N;
    ok &= pair.a0 < pair.b0 && pair.b0 <= pair.a1 && pair.a1 < pair.b1 && pair.b1 < 1.0 &&
          pair.a0 > 0.0;
    double margin = std::numeric_limits<double>::infinity();
    double witness = pair.a0;
    const std::size_t nlo = std::max<std::size_t>(16, (std::size_t)(pair.b0 / res));
    for (double x : linspace(0.0, pair.b0, nlo)) {
      const double m = pair.f0_deriv(x) - 1.0;  // expanding left of b0
      if (m < margin) {
        margin = m;
        witness = x;
      }
    }
    const std::size_t nhi = std::max<std::size_t>(16, (std::size_t)((1.0 - pair.a1) / res));
    for (double x : linspace(pair.a1, 1.0, nhi)) {
      if (x == 1.0) continue;  // slope lambda<1 attained at the endpoint
      const double m = 1.0 - pair.f0_deriv(x);  // contracting right of a1
      if (m < margin) {
        margin = m;
        witness = x;
      }
    }
    // lambda*(f0^N)' > alpha > 1 on I0
    double alpha = std::numeric_limits<double>::infinity();
    double awitness = pair.a0;
    const std::size_t ni =
        std::max<std::size_t>(8, (std::size_t)((pair.b0 - pair.a0) / res));
    for (double x : linspace(pair.a0, pair.b0, ni)) {
      double d = 1.0, y = x;
      for (int k = 0; k < pair.N; ++k) {
        d *= pair.f0_deriv(y);
        y = pair.f0_value(y);
      }
      const double v = pair.lambda * d;
      if (v < alpha) {
        alpha = v;
        awitness = x;
      }
    }
    rep.alpha = alpha;
    margin = std::min(margin, alpha - 1.0);
    if (alpha - 1.0 <= 0.0) witness = awitness;
    c.pass = ok && margin > 0.0;
    c.margin = margin;
    c.witness = witness;
    c.note = "f0^N(I0)=I1, lambda*(f0^N)'>1 on I0, expanding on [0,b0], contracting on [a1,1]";
    add(c);
  }

  {  // (F1.i): decreasing contraction
    ConditionCheck c;
    c.name = "F1.i";
    double gmax = 0.0, gmin = std::numeric_limits<double>::infinity();
    bool decreasing = true;
    for (double x : grid01) {
      const double d = pair.f1_deriv(x);
      if (d >= 0.0) decreasing = false;
      gmax = std::max(gmax, std::abs(d));
      gmin = std::min(gmin, std::abs(d));
    }
    c.margin = std::min(1.0 - gmax, gmin);
    c.pass = decreasing && c.margin > 0.0;
    c.witness = 1.0;
    c.note = "f1 decreasing with 0 < gamma' <= gamma < 1";
    add(c);
  }

  rep.alpha_bar = 0.0;
  {  // (F1.ii): |f1'| >= alpha_bar > 1/alpha near the return window
    ConditionCheck c;
    c.name = "F1.ii";
    const double w1 = pair.f1_value(pair.f1_value(pair.a1));
    const double wlo = std::min(w1, pair.a1), whi = std::max(w1, pair.a1);
    double abar = std::numeric_limits<double>::infinity();
    for (double x : linspace(wlo, whi, 64)) abar = std::min(abar, std::abs(pair.f1_deriv(x)));
    rep.alpha_bar = abar;
    c.margin = rep.alpha > 0.0 ? abar - 1.0 / rep.alpha : -1.0;
    c.pass = c.margin > 0.0;
    c.witness = pair.a1;
    c.note = "min|f1'| on [f1^2(a1), a1] exceeds 1/alpha";
    add(c);
  }
  rep.kappa = rep.alpha_bar * rep.alpha;

  {  // (F01)(a): cycle condition f1(1)=0, exact
    ConditionCheck c;
    c.name = "F01.a";
    const double v = pair.f1_value(1.0);
    c.pass = v == 0.0;
    c.margin = -std::abs(v);
    c.witness = 1.0;
    c.note = "f1(1)=0 exactly";
    add(c);
  }

  {  // (F01)(b): f1([a1,1]) inside [0, a0)
    ConditionCheck c;
    c.name = "F01.b";
    c.margin = pair.a0 - pair.f1_value(pair.a1);
    c.pass = c.margin > 0.0;
    c.witness = pair.a1;
    c.note = "f1(a1) < a0";
    add(c);
  }

  {  // (F01)(c): [0, f0^{-2}(b0)) inside the range of f1
    ConditionCheck c;
    c.name = "F01.c";
    const double f2b0 = invert(pair, MapKind::f0, invert(pair, MapKind::f0, pair.b0));
    c.margin = pair.c1 - f2b0;
    c.pass = c.margin >= 0.0;
    c.witness = f2b0;
    c.note = "c1 >= f0^{-2}(b0)";
    add(c);
  }

  {  // standing inequality lambda(1-lambda)/(1-1/beta) > 1
    ConditionCheck c;
    c.name = "standing";
    c.margin = standing_inequality_value(pair.beta, pair.lambda) - 1.0;
    c.pass = c.margin > 0.0;
    c.witness = pair.lambda;
    c.note = "lambda(1-lambda)/(1-1/beta) > 1";
    add(c);
  }

  {  // optional (F_B): f0 contracting on [c1, 1]; informational only
    ConditionCheck c;
    c.name = "F_B";
    double margin = std::numeric_limits<double>::infinity();
    double witness = pair.c1;
    for (double x : linspace(pair.c1, 1.0, 256)) {
      if (x == 1.0) continue;
      const double m = 1.0 - pair.f0_deriv(x);
      if (m < margin) {
        margin = m;
        witness = x;
      }
    }
    c.margin = margin;
    c.pass = margin > 0.0;
    c.witness = witness;
    c.note = "optional: f0' in (0,1) on [f1(0), 1]";
    rep.fb_holds = c.pass;
    add(c);
  }

  rep.all_pass = true;
  for (const auto& c : rep.checks)
    if (c.name != "F_B" && !c.pass) rep.all_pass = false;
  return rep;
}

}  // namespace porcupine
