#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "buyerdyn/errors.hpp"
#include "buyerdyn/experiments.hpp"

using namespace buyerdyn;

namespace {

SimulationParams params_for(double alpha, FeedbackRule rule, std::size_t horizon) {
  return SimulationParams{.family = ContagionFamily::quadratic(), .alpha = Loyalty(alpha), .rule = rule,
                          .horizon = horizon, .record_stride = 1};
}

const std::vector<double> kEps = {0.1, 0.02, 0.004};

}  // namespace

TEST_CASE("local stability under the linear rule without loyalty") {
  const std::vector<double> a0 = {0.5, 0.9};
  const auto report = local_stability_experiment(params_for(0.0, FeedbackRule::linear(), 2000), a0, kEps);
  CHECK(report.verdict);
  REQUIRE(report.passing_scale.has_value());
  CHECK(*report.passing_scale == 0.1);
}

TEST_CASE("local stability under the linear rule with loyalty") {
  const std::vector<double> a0 = {0.5, 0.9};
  const auto report = local_stability_experiment(params_for(0.9, FeedbackRule::linear(), 2000), a0, kEps);
  CHECK(report.verdict);
  REQUIRE(report.passing_scale.has_value());
  CHECK(*report.passing_scale == 0.02);
  CHECK(report.trials.size() == 3 * 16);
  for (const auto& t : report.trials) {
    if (t.scale == 0.1) continue;
    CHECK(t.passed);
    CHECK(t.sup_max_a < 1.0);
    CHECK(t.final_max_p < 1e-8);
    for (double p : t.initial.p()) CHECK(p < t.scale);
  }
}

TEST_CASE("local stability fails for the ratio rule") {
  const std::vector<double> a0 = {0.473, 0.324};
  const auto report = local_stability_experiment(params_for(0.0, FeedbackRule::ratio(), 2000), a0, kEps);
  CHECK_FALSE(report.verdict);
  CHECK_FALSE(report.passing_scale.has_value());
  for (const auto& t : report.trials) CHECK(t.sup_max_a > 1.0);
}

TEST_CASE("a zero clientele start is stationary and passes") {
  const auto trial = run_local_trial(params_for(0.5, FeedbackRule::linear(), 500),
                                     MarketState({0.0, 0.0}, {0.5, 0.9}), 0.0);
  CHECK(trial.passed);
  CHECK(trial.trailing_increment == 0.0);
}

TEST_CASE("local stability input checks") {
  const std::vector<double> bad = {0.5, 1.0};
  CHECK_THROWS_AS(local_stability_experiment(params_for(0.0, FeedbackRule::linear(), 10), bad, kEps),
                  std::invalid_argument);
}

TEST_CASE("local stability is reproducible") {
  const std::vector<double> a0 = {0.5, 0.9};
  const std::vector<double> eps = {0.02};
  const auto params = params_for(0.3, FeedbackRule::linear(), 300);
  const auto r1 = local_stability_experiment(params, a0, eps);
  const auto r2 = local_stability_experiment(params, a0, eps);
  REQUIRE(r1.trials.size() == r2.trials.size());
  for (std::size_t k = 0; k < r1.trials.size(); ++k) {
    CHECK(r1.trials[k].initial == r2.trials[k].initial);
    CHECK(r1.trials[k].sup_max_a == r2.trials[k].sup_max_a);
  }
}

TEST_CASE("instability of the collapse under the ratio rule") {
  const std::vector<double> a0 = {0.473, 0.324};
  const std::vector<double> shape = {0.546, 0.616};
  const std::vector<double> deltas = {1e-2, 1e-3, 1e-4};
  const auto report = instability_experiment(ContagionFamily::quadratic(), Loyalty(0.0), a0, shape, deltas, 5000);
  CHECK(report.verdict);
  CHECK(report.all_crossed);
  CHECK(report.linearized_delta_independent);
  for (const auto& t : report.trials) {
    REQUIRE(t.first_crossing.has_value());
    REQUIRE(t.linearized_first_crossing.has_value());
    CHECK(*t.first_crossing == 43);
    CHECK(*t.linearized_first_crossing == 43);
  }

  const auto loyal = instability_experiment(ContagionFamily::quadratic(), Loyalty(0.9), a0, shape, deltas, 5000);
  CHECK(loyal.all_crossed);

  const std::vector<double> flat = {0.5, 0.5};
  CHECK_THROWS_AS(instability_experiment(ContagionFamily::quadratic(), Loyalty(0.0), a0, flat, deltas, 100),
                  std::invalid_argument);
}

TEST_CASE("coordinates") {
  CHECK(Coordinate::parse("p2").index == 1);
  CHECK(Coordinate::parse("a1").block == Coordinate::Block::A);
  CHECK(Coordinate::parse("a12").label() == "a12");
  for (const char* bad : {"", "p", "q1", "p0", "p1x", "a-1"}) {
    CHECK_THROWS_AS(Coordinate::parse(bad), std::invalid_argument);
  }
  const MarketState s({0.1, 0.2}, {1.0, 2.0});
  CHECK(with_coordinate(s, Coordinate::parse("a2"), 3.0).a()[1] == 3.0);
  CHECK_THROWS_AS(with_coordinate(s, Coordinate::parse("p3"), 0.5), std::invalid_argument);
  CHECK_THROWS_AS(with_coordinate(s, Coordinate::parse("p1"), 1.5), DomainError);
}

TEST_CASE("basin bisection on the initial clientele of seller 2") {
  const auto params = params_for(0.9, FeedbackRule::linear(), 5000);
  const MarketState base({0.981, 0.8}, {2.02, 2.0});
  const auto r = basin_bisection(params, base, Coordinate::parse("p2"), 0.57, 0.6, 1e-4);
  CHECK(r.lower_kind == FixedPointKind::AllZero);
  CHECK(r.upper_kind == FixedPointKind::AllOne);
  CHECK(r.boundary_width <= 1e-4);
  CHECK(r.lower < r.upper);
  CHECK(r.boundary_estimate == doctest::Approx(0.59212).epsilon(1e-4));
  CHECK(r.transcript.size() == 11);
  CHECK(r.transcript[0].value == 0.57);
  CHECK(r.transcript[1].value == 0.6);
}

TEST_CASE("basin bisection preconditions") {
  const auto params = params_for(0.9, FeedbackRule::linear(), 5000);
  const MarketState base({0.981, 0.8}, {2.02, 2.0});
  CHECK_THROWS_AS(basin_bisection(params, base, Coordinate::parse("p2"), 0.6, 0.6, 1e-4), std::invalid_argument);
  CHECK_THROWS_AS(basin_bisection(params, base, Coordinate::parse("p2"), 0.6, 0.57, 1e-4), std::invalid_argument);
  // both ends collapse
  CHECK_THROWS_AS(basin_bisection(params, base, Coordinate::parse("a2"), 0.57, 0.6, 1e-4), std::invalid_argument);
  // a bracket already narrower than tol returns as given
  const auto r = basin_bisection(params, base, Coordinate::parse("p2"), 0.59, 0.595, 0.1);
  CHECK(r.lower == 0.59);
  CHECK(r.upper == 0.595);
  CHECK(r.transcript.size() == 2);
}
