#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "buyerdyn/contagion.hpp"
#include "buyerdyn/errors.hpp"
#include "buyerdyn/numerics.hpp"
#include "oracles.hpp"

using namespace buyerdyn;

namespace {
const ContagionFamily kQuad = ContagionFamily::quadratic(0.9);
}

TEST_CASE("quadratic family hand values") {
  CHECK(kQuad(0.5, 0.5) == doctest::Approx(0.3625).epsilon(1e-15));
  CHECK(kQuad(2.0, 0.5) == doctest::Approx(0.6375).epsilon(1e-15));
  CHECK(kQuad(2.0, 0.3) == doctest::Approx(0.4295).epsilon(1e-15));
  CHECK(kQuad(1.0, 0.37) == 0.37);
  CHECK(kQuad(0.3, 0.0) == 0.0);
  CHECK(kQuad(3.0, 1.0) == 1.0);
}

TEST_CASE("quadratic family agrees with the long double oracle") {
  Rng rng(7);
  for (int k = 0; k < 2000; ++k) {
    const double a = std::exp(rng.uniform(-3.0, 3.0));
    const double x = rng.uniform();
    const double ref = static_cast<double>(oracle::quad(a, x));
    CHECK(std::abs(kQuad(a, x) - ref) <= 4e-16);
  }
}

TEST_CASE("blended map") {
  CHECK(eval_blended(kQuad, Loyalty(0.0), 0.5, 0.5) == doctest::Approx(0.3625).epsilon(1e-15));
  CHECK(eval_blended(kQuad, Loyalty(0.9), 2.0, 0.5) == doctest::Approx(0.51375).epsilon(1e-15));
  CHECK(eval_blended(kQuad, Loyalty(0.5), 1.0, 0.2) == 0.2);
  // 0 is fixed for a <= 1, 1 is fixed for a >= 1
  for (double a : {0.1, 0.7, 1.0}) CHECK(eval_blended(kQuad, Loyalty(0.9), a, 0.0) == 0.0);
  for (double a : {1.0, 1.3, 9.0}) CHECK(eval_blended(kQuad, Loyalty(0.9), a, 1.0) == 1.0);
  CHECK(kQuad(0.5, 1.0) == doctest::Approx(0.95));
  CHECK(kQuad(2.0, 0.0) == doctest::Approx(0.05));
}

TEST_CASE("loyalty range") {
  CHECK_NOTHROW(Loyalty(0.0));
  CHECK_NOTHROW(Loyalty(0.999));
  CHECK_THROWS_AS(Loyalty(1.0), DomainError);
  CHECK_THROWS_AS(Loyalty(-0.1), DomainError);
  CHECK_THROWS_AS(Loyalty(std::numeric_limits<double>::quiet_NaN()), DomainError);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(kQuad(0.0, 0.5), DomainError);
  CHECK_THROWS_AS(kQuad(-1.0, 0.5), DomainError);
  CHECK_THROWS_AS(kQuad(1.0, 1.5), DomainError);
  CHECK_THROWS_AS(kQuad(1.0, -0.1), DomainError);
  CHECK_THROWS_AS(ContagionFamily::quadratic(1.0), DomainError);
}

TEST_CASE("inverse of the blended map") {
  CHECK(invert_blended(kQuad, Loyalty(0.9), 2.0, 0.51375) == doctest::Approx(0.5).epsilon(1e-12));
  Rng rng(11);
  for (int k = 0; k < 500; ++k) {
    const double alpha = rng.uniform(0.0, 0.95);
    const double a = std::exp(rng.uniform(-2.0, 2.0));
    const double x = rng.uniform();
    const double y = eval_blended(kQuad, Loyalty(alpha), a, x);
    CHECK(std::abs(invert_blended(kQuad, Loyalty(alpha), a, y) - x) < 1e-12);
  }
  CHECK(invert_blended(kQuad, Loyalty(0.0), 1.0, 0.37) == doctest::Approx(0.37).epsilon(1e-13));
  CHECK(invert_blended(kQuad, Loyalty(0.5), 3.0, 1.0) == 1.0);
  // for a > 1 the image of [0,1] starts above 0
  CHECK_THROWS_AS(invert_blended(kQuad, Loyalty(0.0), 2.0, 0.01), DomainError);
  CHECK(invert_blended(kQuad, Loyalty(0.5), 0.3, 0.0) == 0.0);
  CHECK_THROWS_AS(invert_blended(kQuad, Loyalty(0.5), 1.0, 1.2), DomainError);
}

TEST_CASE("bar transform") {
  const ContagionFamily bar = bar_transform(kQuad);
  CHECK(bar(0.5, 0.5) == doctest::Approx(0.3625).epsilon(1e-15));
  CHECK(bar(2.0, 0.3) == doctest::Approx(0.4295).epsilon(1e-15));
  Rng rng(3);
  for (int k = 0; k < 500; ++k) {
    const double a = std::exp(rng.uniform(-2.0, 2.0));
    const double x = rng.uniform();
    CHECK(std::abs(bar(a, x) - kQuad(a, x)) < 1e-15);
  }
  CHECK(bar.kind() == FamilyKind::Reflected);
  CHECK(bar_transform(bar)(0.4, 0.25) == doctest::Approx(kQuad(0.4, 0.25)).epsilon(1e-15));
}

TEST_CASE("family validation") {
  const FamilyValidationReport ok = validate_family(kQuad, 256);
  CHECK(ok.ok());
  CHECK(ok.slope_errors_at_endpoints < 1e-4);
  CHECK_THROWS_AS(validate_family(kQuad, 8), DomainError);

  // x^(1/a) fixes the endpoints and is monotone but has the wrong endpoint slopes
  const auto power = ContagionFamily::user("power", [](double a, double x) { return std::pow(x, 1.0 / a); });
  CHECK_FALSE(validate_family(power, 32).ok());

  // identity planted at a = 2
  const auto tampered = ContagionFamily::user("tampered", [](double a, double x) { return a == 2.0 ? x : kQuad(a, x); });
  bool saw_planted = false;
  for (const auto& v : validate_family(tampered, 32).violations) {
    saw_planted = saw_planted || (v.assumption == "f_a(p)>p for a>1" && v.a == 2.0);
  }
  CHECK(saw_planted);

  // decreasing in a
  const auto flipped = ContagionFamily::user("flipped", [](double a, double x) { return kQuad(1.0 / a, x); });
  const FamilyValidationReport bad = validate_family(flipped, 32);
  REQUIRE_FALSE(bad.ok());
  bool saw_sign = false;
  for (const auto& v : bad.violations) saw_sign = saw_sign || v.magnitude > 0.0;
  CHECK(saw_sign);
}

TEST_CASE("escaping the unit interval is a consistency error") {
  const auto broken = ContagionFamily::user("broken", [](double, double x) { return x + 0.5; });
  CHECK_THROWS_AS(broken(2.0, 0.9), ConsistencyError);
}
