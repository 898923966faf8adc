#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "porcupine/itinerary.hpp"
#include "porcupine/skew3d.hpp"
#include "porcupine/spectrum.hpp"
#include "test_common.hpp"

using namespace porcupine;
using porcupine::testing::canonical_pair;

namespace {

const HorseshoeModel& model() {
  static const HorseshoeModel m = [] {
    HorseshoeModel m;
    validate_model(m, canonical_pair());
    return m;
  }();
  return m;
}

SeqSpec random_eventually_periodic(std::mt19937& gen) {
  auto word = [&](int max_len, int min_len) {
    Word w;
    const int L = min_len + static_cast<int>(gen() % static_cast<unsigned>(max_len));
    for (int i = 0; i < L; ++i) w.push_back(static_cast<std::uint8_t>(gen() & 1u));
    return w;
  };
  SeqSpec s;
  s.left_tail = Tail::periodic_tail(word(5, 1));
  s.left_core = word(6, 0);
  s.right_core = word(6, 0);
  s.right_tail = Tail::periodic_tail(word(5, 1));
  return s;
}

}  // namespace

TEST_CASE("fixed points of the skew product") {
  const FiberMapPair& pair = canonical_pair();
  SECTION("Q = (theta, 0) is fixed") {
    const StepResult s = step(model(), pair, Point3{0.0, 0.0, 0.0});
    CHECK_FALSE(s.escaped);
    CHECK(s.point.xs == 0.0);
    CHECK(s.point.xu == 0.0);
    CHECK(s.point.x == 0.0);
  }
  SECTION("P = (theta, 1) is fixed") {
    const StepResult s = step(model(), pair, Point3{0.0, 0.0, 1.0});
    CHECK_FALSE(s.escaped);
    CHECK(s.point.x == 1.0);
  }
  SECTION("the top of the second rectangle lands on the zero plane") {
    const StepResult s = step(model(), pair, Point3{0.3, 0.9, 1.0});
    CHECK_FALSE(s.escaped);
    CHECK(s.rectangle == 1);
    CHECK(s.point.x == 0.0);
  }
  SECTION("the middle band escapes") {
    const StepResult s = step(model(), pair, Point3{0.3, 0.5, 0.5});
    CHECK(s.escaped);
  }
}

TEST_CASE("coding of the fixed sequences") {
  SECTION("the zero sequence codes the origin") {
    const auto [xs, xu] = code_point(model(), SeqSpec::zero_seq());
    CHECK(xs == 0.0);
    CHECK(xu == 0.0);
  }
  SECTION("the ones sequence codes the opposite corner") {
    SeqSpec ones;
    ones.left_tail = Tail::ones_tail();
    ones.right_tail = Tail::ones_tail();
    const auto [xs, xu] = code_point(model(), ones);
    CHECK(xs == Catch::Approx(1.0).margin(1e-14));
    CHECK(xu == Catch::Approx(1.0).margin(1e-14));
  }
}

TEST_CASE("coding round-trips through the base itinerary") {
  std::mt19937 gen(51u);
  for (int trial = 0; trial < 100; ++trial) {
    const SeqSpec s = random_eventually_periodic(gen);
    const auto [xs, xu] = code_point(model(), s);
    const Word read = base_itinerary(model(), xs, xu, -20, 19);
    CHECK(read == truncate(s, -20, 19));
  }
}

TEST_CASE("lifting periodic fiber orbits") {
  const FiberMapPair& pair = canonical_pair();
  SECTION("word 0 at the repeller lifts to Q with index 2") {
    const auto orbits = fixed_points(pair, Word::from_string("0"));
    const LiftedOrbit Q = lift_periodic(model(), pair, orbits[0]);
    CHECK(Q.xs == 0.0);
    CHECK(Q.xu == 0.0);
    CHECK(Q.index == 2);
  }
  SECTION("word 0 at the attractor lifts to P with index 1") {
    const auto orbits = fixed_points(pair, Word::from_string("0"));
    const LiftedOrbit P = lift_periodic(model(), pair, orbits[1]);
    CHECK(P.index == 1);
    CHECK(P.fiber.fix == 1.0);
  }
  SECTION("word 1 lifts to the index-1 saddle over the ones corner") {
    const auto orbits = fixed_points(pair, Word::from_string("1"));
    const LiftedOrbit Phat = lift_periodic(model(), pair, orbits[0]);
    CHECK(Phat.index == 1);
    CHECK(Phat.xs == Catch::Approx(1.0).margin(1e-12));
    CHECK(Phat.xu == Catch::Approx(1.0).margin(1e-12));
  }
  SECTION("a longer orbit closes up in all three coordinates") {
    const PeriodicOrbit q = expanding_fixed_point(pair, pair.fundamental_I0());
    const LiftedOrbit lifted = lift_periodic(model(), pair, q);
    CHECK(lifted.index == 2);
    CHECK(lifted.return_error <= 1e-9);
  }
}

TEST_CASE("spines") {
  const FiberMapPair& pair = canonical_pair();
  SECTION("the zero sequence carries the full segment") {
    const SpineResult sp = spine(model(), pair, SeqSpec::zero_seq(), 32, 1e-8);
    CHECK(sp.xs == 0.0);
    CHECK(sp.xu == 0.0);
    CHECK(sp.fiber.status == FiberStatus::nontrivial);
    CHECK(sp.fiber.deepest().lo == 0.0);
    CHECK(sp.fiber.deepest().hi == 1.0);
  }
  SECTION("all-ones past gives a point spine") {
    SeqSpec s;
    s.left_tail = Tail::ones_tail();
    const SpineResult sp = spine(model(), pair, s, 64, 1e-8);
    CHECK(sp.fiber.status == FiberStatus::trivial);
  }
  SECTION("zeros past with a single one is an interval spine") {
    SeqSpec s;
    s.left_core = Word::from_string("1");
    const SpineResult sp = spine(model(), pair, s, 32, 1e-8);
    CHECK(sp.fiber.status == FiberStatus::nontrivial);
    CHECK(sp.fiber.deepest().hi == pair.c1);
  }
}

TEST_CASE("spine equivariance under one step") {
  const FiberMapPair& pair = canonical_pair();
  std::mt19937 gen(52u);
  for (int trial = 0; trial < 40; ++trial) {
    const SeqSpec s = random_eventually_periodic(gen);
    const SeqSpec t = shift(s);
    const Interval Im = domain_at_depth(pair, s.left_word(20));
    const Interval In = domain_at_depth(pair, t.left_word(21));
    const Word one_step(std::vector<std::uint8_t>{s.bit_at(0)});
    const Interval pushed = interval_image(pair, one_step, Im);
    CHECK(pushed.lo == In.lo);
    CHECK(pushed.hi == In.hi);
    // base points transport under the corresponding branch
    const auto [xs, xu] = code_point(model(), s);
    const auto [ys, yu] = code_point(model(), t);
    const StepResult st = step(model(), pair, Point3{xs, xu, 0.5});
    CHECK(st.rectangle == s.bit_at(0));
    CHECK(st.point.xs == Catch::Approx(ys).margin(1e-12));
    CHECK(st.point.xu == Catch::Approx(yu).margin(1e-12));
  }
}

TEST_CASE("heterodimensional cycle checks") {
  const CycleReport rep = verify_cycle(model(), canonical_pair());
  CHECK(rep.cycle_condition_exact);
  CHECK(rep.stable_leaf_ok);
  CHECK(rep.unstable_leaf_ok);
  CHECK(rep.transfer_ok);
  CHECK(rep.pass);
  CHECK(rep.worst_transfer == 0.0);
}

TEST_CASE("domination constraints are enforced") {
  HorseshoeModel bad;
  bad.sigma_u = 1.05;  // weaker than beta
  CHECK_THROWS_AS(validate_model(bad, canonical_pair()), ConstructionError);
  bad = HorseshoeModel{};
  bad.sigma_s = 0.49;  // weaker than the fiber contraction
  CHECK_THROWS_AS(validate_model(bad, canonical_pair()), ConstructionError);
}

TEST_CASE("index-2 orbits from the covering construction are net-dense") {
  const FiberMapPair& pair = canonical_pair();
  for (int cell = 1; cell <= 19; ++cell) {
    const double center = 0.05 * cell;
    const PeriodicOrbit o = periodic_point_near(pair, center, 0.025);
    const LiftedOrbit lifted = lift_periodic(model(), pair, o);
    CHECK(lifted.index == 2);
    CHECK(std::abs(o.fix - center) <= 0.025);
  }
}
