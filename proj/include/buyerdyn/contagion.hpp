#pragma once

// Contagion map families f_a : [0,1] -> [0,1] and the loyalty blend
//   f_{alpha,a}(x) = alpha * x + (1 - alpha) * f_a(x).

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace buyerdyn {

// Fraction of buyers returning to yesterday's seller. Always in [0,1).
class Loyalty {
 public:
  Loyalty() = default;
  explicit Loyalty(double alpha);

  double value() const noexcept { return alpha_; }

 private:
  double alpha_ = 0.0;
};

enum class FamilyKind { Quadratic, UserTable, Reflected };

class ContagionFamily {
 public:
  using Rule = std::function<double(double a, double x)>;

  // a*x + c(1-a)x^2 for a <= 1 and 1 - (1-x)/a - c(1-1/a)(1-x)^2 for a >= 1.
  static ContagionFamily quadratic(double curvature = 0.9);

  // Arbitrary user-supplied rule. Domain checks and endpoint clamping still
  // apply, but the family assumptions are only checked by validate_family.
  static ContagionFamily user(std::string name, Rule rule);

  FamilyKind kind() const noexcept;
  std::string name() const;

  // Curvature of a Quadratic family; 0 for others.
  double curvature() const noexcept;

  // f_a(x). Throws DomainError for a <= 0 or x outside [0,1]; results within
  // four machine epsilons outside [0,1] are clamped, larger excursions raise
  // ConsistencyError.
  double operator()(double a, double x) const;

  // x -> 1 - f_{1/a}(1 - x).
  ContagionFamily reflected() const;

  struct Impl;

 private:
  explicit ContagionFamily(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

double eval_contagion(const ContagionFamily& family, double a, double x);
double eval_blended(const ContagionFamily& family, Loyalty alpha, double a, double x);

inline constexpr double kInverseTolerance = 1e-13;

// Unique x in [0,1] with eval_blended(x) = y, by bisection to `tolerance`.
// Throws DomainError when y lies outside the image of [0,1].
double invert_blended(const ContagionFamily& family, Loyalty alpha, double a, double y,
                      double tolerance = kInverseTolerance);

ContagionFamily bar_transform(const ContagionFamily& family);

struct FamilyViolation {
  std::string assumption;
  double a;
  double x;
  double magnitude;
};

struct FamilyValidationReport {
  int grid_size = 0;
  std::vector<FamilyViolation> violations;
  double slope_errors_at_endpoints = 0.0;

  bool ok() const noexcept { return violations.empty(); }
};

// Samples a log-spaced on [1/8, 8] and x uniformly on [0,1] and checks the
// sign, monotonicity, endpoint and endpoint-slope assumptions.
FamilyValidationReport validate_family(const ContagionFamily& family, int grid_size);

}  // namespace buyerdyn
