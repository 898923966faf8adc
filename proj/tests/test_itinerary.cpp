#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "porcupine/itinerary.hpp"
#include "test_common.hpp"

using namespace porcupine;
using porcupine::testing::canonical_pair;

namespace {

Interval random_band_interval(std::mt19937& gen, const FiberMapPair& pair) {
  const Interval band = admissible_band(pair);
  std::uniform_real_distribution<double> unif(band.lo, band.hi);
  for (;;) {
    double a = unif(gen), b = unif(gen);
    if (a > b) std::swap(a, b);
    if (b - a > 1e-6) return Interval(a, b);
  }
}

// Independent oracle for the two min-searches: pointwise orbit grids instead
// of endpoint transport.
struct StepOracle {
  int n = 0, m = 0;
};

StepOracle simulate_step(const FiberMapPair& pair, Interval J) {
  StepOracle out;
  const auto grid = linspace(J.lo, J.hi, 33);
  std::vector<double> pts(grid);
  for (int n = 1;; ++n) {
    for (auto& x : pts) x = pair.f0_value(x);
    const auto [mn, mx] = std::minmax_element(pts.begin(), pts.end());
    if (*mn >= pair.a1 - kBandTol && *mx < 1.0) {
      out.n = n;
      break;
    }
    REQUIRE(n < 500);
  }
  for (auto& x : pts) x = pair.f1_value(x);
  const Interval I0 = pair.fundamental_I0();
  for (int m = 0;; ++m) {
    const auto [mn, mx] = std::minmax_element(pts.begin(), pts.end());
    if (*mx >= I0.lo - kBandTol && *mn <= I0.hi + kBandTol) {
      out.m = m;
      break;
    }
    for (auto& x : pts) x = pair.f0_value(x);
    REQUIRE(m < 500);
  }
  return out;
}

}  // namespace

TEST_CASE("interval images") {
  const FiberMapPair& pair = canonical_pair();
  const Interval J(0.2, 0.3);
  const Interval same = interval_image(pair, Word{}, J);
  CHECK(same.lo == J.lo);
  CHECK(same.hi == J.hi);

  const Interval flipped = interval_image(pair, Word::from_string("1"), Interval(0.0, 1.0));
  CHECK(flipped.lo == 0.0);
  CHECK(flipped.hi == pair.c1);

  const Interval full = interval_image(pair, Word::from_string("0"), Interval(0.0, 1.0));
  CHECK(full.lo == 0.0);
  CHECK(full.hi == 1.0);
}

TEST_CASE("interval image agrees with pointwise composition") {
  const FiberMapPair& pair = canonical_pair();
  std::mt19937 gen(21u);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_int_distribution<int> bit(0, 1);
  for (int trial = 0; trial < 50; ++trial) {
    Word w;
    for (int i = 0; i < 12; ++i) w.push_back(static_cast<std::uint8_t>(bit(gen)));
    double a = unif(gen), b = unif(gen);
    if (a > b) std::swap(a, b);
    const Interval img = interval_image(pair, w, Interval(a, b));
    const double fa = compose_value(pair, w, a), fb = compose_value(pair, w, b);
    CHECK(img.lo == std::min(fa, fb));
    CHECK(img.hi == std::max(fa, fb));
    const double mid = compose_value(pair, w, 0.5 * (a + b));
    CHECK(img.contains(mid, 1e-14));
  }
}

TEST_CASE("expanding step on the fundamental domain") {
  const FiberMapPair& pair = canonical_pair();
  const SuccessorStep step = expanding_step(pair, pair.fundamental_I0());
  CHECK((step.n == pair.N || step.n == pair.N + 1));
  CHECK(step.m >= 1);
  CHECK(step.min_deriv >= pair.kappa);
  const StepOracle oracle = simulate_step(pair, pair.fundamental_I0());
  CHECK(step.n == oracle.n);
  CHECK(step.m == oracle.m);
}

TEST_CASE("expanding step matches the search oracle on the upper domain") {
  const FiberMapPair& pair = canonical_pair();
  const Interval J(invert(pair, MapKind::f0, pair.b0), pair.b0);  // = I0
  const SuccessorStep step = expanding_step(pair, J);
  const StepOracle oracle = simulate_step(pair, J);
  CHECK(step.n == oracle.n);
  CHECK(step.m == oracle.m);
  const Interval img = interval_image(pair, step.word, J);
  CHECK(img.lo == step.image.lo);
  CHECK(img.hi == step.image.hi);
}

TEST_CASE("expanding step rejects intervals outside the band") {
  const FiberMapPair& pair = canonical_pair();
  CHECK_THROWS_AS(expanding_step(pair, Interval(0.2, 0.3)), std::invalid_argument);
  CHECK_THROWS_AS(expanding_step(pair, Interval(0.058, 0.058)), std::invalid_argument);
}

TEST_CASE("successor steps expand uniformly and n, m stay bounded") {
  const FiberMapPair& pair = canonical_pair();
  std::mt19937 gen(22u);
  for (int trial = 0; trial < 100; ++trial) {
    const Interval J = random_band_interval(gen, pair);
    const SuccessorStep step = expanding_step(pair, J);
    CHECK(step.min_deriv >= pair.kappa);
    CHECK((step.n == pair.N || step.n == pair.N + 1));
    CHECK(step.m >= 1);
    CHECK(step.m <= 20);
  }
}

TEST_CASE("successor chains cover the fundamental domain") {
  const FiberMapPair& pair = canonical_pair();
  const Interval dhat = lower_fundamental_domain(pair);
  const Interval band = admissible_band(pair);

  SECTION("the whole band is a one-step chain") {
    const SuccessorChain chain = successor_chain(pair, band);
    CHECK(chain.length() == 1);
    CHECK(chain.final_interval.contains(dhat, kBandTol));
  }

  SECTION("growth and the length bound on random intervals") {
    std::mt19937 gen(23u);
    for (int trial = 0; trial < 100; ++trial) {
      const Interval J = random_band_interval(gen, pair);
      const SuccessorChain chain = successor_chain(pair, J);
      CHECK(chain.final_interval.contains(dhat, kBandTol));
      double prev = J.width();
      for (const auto& step : chain.steps) {
        CHECK(step.image.width() >= pair.kappa * prev);
        prev = step.image.width();
      }
      const int bound =
          static_cast<int>(std::ceil(std::log(band.width() / J.width()) / std::log(pair.kappa))) +
          1;
      CHECK(chain.length() <= bound);
    }
  }

  SECTION("tiny intervals still terminate within the log bound") {
    const Interval J(0.058, 0.058 + 1e-6);
    const SuccessorChain chain = successor_chain(pair, J);
    CHECK(chain.final_interval.contains(dhat, kBandTol));
    const int bound =
        static_cast<int>(std::ceil(std::log(band.width() / 1e-6) / std::log(pair.kappa))) + 1;
    CHECK(chain.length() <= bound);
  }
}

TEST_CASE("sweep covers the fundamental domain from random starts") {
  const FiberMapPair& pair = canonical_pair();
  const Interval dhat = lower_fundamental_domain(pair);
  std::mt19937 gen(24u);
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  for (int trial = 0; trial < 50; ++trial) {
    double a = unif(gen), b = unif(gen);
    if (a > b) std::swap(a, b);
    if (b - a < 1e-4) continue;
    const SweepResult sw = sweep(pair, Interval(a, b));
    const Interval img = interval_image(pair, sw.word, Interval(a, b));
    CHECK(img.contains(dhat, kBandTol));
  }
}

TEST_CASE("sweep handles intervals already inside the band") {
  const FiberMapPair& pair = canonical_pair();
  const Interval H(0.056, 0.064);
  const SweepResult sw = sweep(pair, H);
  CHECK(interval_image(pair, sw.word, H).contains(lower_fundamental_domain(pair), kBandTol));
}

TEST_CASE("sweep rejects degenerate input") {
  const FiberMapPair& pair = canonical_pair();
  CHECK_THROWS_AS(sweep(pair, Interval(0.5, 0.5)), std::invalid_argument);
  CHECK_THROWS_AS(sweep(pair, Interval(0.0, 0.5)), std::invalid_argument);
}

TEST_CASE("expanding fixed point of the fundamental domain") {
  const FiberMapPair& pair = canonical_pair();
  const PeriodicOrbit q = expanding_fixed_point(pair, pair.fundamental_I0());
  CHECK(pair.fundamental_I0().contains(q.fix));
  CHECK(q.multiplier > 1.0);
  CHECK(q.stability == Stability::repelling);
  CHECK(std::abs(compose_value(pair, q.word, q.fix) - q.fix) <= kResidualTol);

  // one-step chain at I0: word 0^N 1 0^m
  CHECK(q.word.one_count() == 1);
  CHECK(static_cast<int>(q.word.size()) >= pair.N + 2);
}

TEST_CASE("periodic points near arbitrary targets") {
  const FiberMapPair& pair = canonical_pair();
  SECTION("mid interval") {
    const PeriodicOrbit o = periodic_point_near(pair, 0.5, 0.05);
    CHECK(std::abs(o.fix - 0.5) <= 0.05);
    CHECK(o.multiplier > 1.0);
    CHECK(std::abs(compose_value(pair, o.word, o.fix) - o.fix) <= kResidualTol);
  }
  SECTION("near the expanding fixed point with a wide window") {
    const PeriodicOrbit q = expanding_fixed_point(pair, pair.fundamental_I0());
    const PeriodicOrbit o = periodic_point_near(pair, q.fix, 0.05);
    CHECK(std::abs(o.fix - q.fix) <= 0.05);
    CHECK(o.multiplier > 1.0);
  }
  SECTION("zero radius is an error") {
    CHECK_THROWS_AS(periodic_point_near(pair, 0.5, 0.0), std::invalid_argument);
  }
}
