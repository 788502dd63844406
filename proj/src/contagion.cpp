#include "buyerdyn/contagion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "buyerdyn/errors.hpp"

namespace buyerdyn {

namespace {

constexpr double kClampSlack = 4.0 * std::numeric_limits<double>::epsilon();

void check_args(double a, double x) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    std::ostringstream os;
    os << "attractiveness must be positive and finite, got " << a;
    throw DomainError(os.str());
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    std::ostringstream os;
    os << "clientele fraction must lie in [0,1], got " << x;
    throw DomainError(os.str());
  }
}

double clamp_unit(double r, const std::string& who) {
  if (r >= 0.0 && r <= 1.0) return r;
  if (r < 0.0 && r >= -kClampSlack) return 0.0;
  if (r > 1.0 && r <= 1.0 + kClampSlack) return 1.0;
  std::ostringstream os;
  os.precision(17);
  os << who << " left [0,1]: " << r;
  throw ConsistencyError(os.str());
}

}  // namespace

Loyalty::Loyalty(double alpha) : alpha_(alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    std::ostringstream os;
    os << "loyalty alpha must lie in [0,1), got " << alpha;
    throw DomainError(os.str());
  }
}

struct ContagionFamily::Impl {
  virtual ~Impl() = default;
  virtual FamilyKind kind() const = 0;
  virtual std::string name() const = 0;
  virtual double curvature() const { return 0.0; }
  virtual double raw(double a, double x) const = 0;
};

namespace {

struct QuadraticImpl final : ContagionFamily::Impl {
  double c;
  explicit QuadraticImpl(double curvature) : c(curvature) {}
  FamilyKind kind() const override { return FamilyKind::Quadratic; }
  std::string name() const override {
    std::ostringstream os;
    os << "quadratic(c=" << c << ")";
    return os.str();
  }
  double curvature() const override { return c; }
  double raw(double a, double x) const override {
    if (a <= 1.0) return a * x + c * (1.0 - a) * x * x;
    const double inv = 1.0 / a;
    const double y = 1.0 - x;
    return 1.0 - inv * y - c * (1.0 - inv) * y * y;
  }
};

struct UserImpl final : ContagionFamily::Impl {
  std::string label;
  ContagionFamily::Rule rule;
  UserImpl(std::string l, ContagionFamily::Rule r) : label(std::move(l)), rule(std::move(r)) {}
  FamilyKind kind() const override { return FamilyKind::UserTable; }
  std::string name() const override { return label; }
  double raw(double a, double x) const override { return rule(a, x); }
};

struct ReflectedImpl final : ContagionFamily::Impl {
  ContagionFamily inner;
  explicit ReflectedImpl(ContagionFamily f) : inner(std::move(f)) {}
  FamilyKind kind() const override { return FamilyKind::Reflected; }
  std::string name() const override { return "bar(" + inner.name() + ")"; }
  double raw(double a, double x) const override { return 1.0 - inner(1.0 / a, 1.0 - x); }
};

}  // namespace

ContagionFamily ContagionFamily::quadratic(double curvature) {
  if (!(curvature > 0.0 && curvature < 1.0)) {
    std::ostringstream os;
    os << "quadratic curvature must lie in (0,1), got " << curvature;
    throw DomainError(os.str());
  }
  return ContagionFamily(std::make_shared<QuadraticImpl>(curvature));
}

ContagionFamily ContagionFamily::user(std::string name, Rule rule) {
  return ContagionFamily(std::make_shared<UserImpl>(std::move(name), std::move(rule)));
}

FamilyKind ContagionFamily::kind() const noexcept { return impl_->kind(); }
std::string ContagionFamily::name() const { return impl_->name(); }
double ContagionFamily::curvature() const noexcept { return impl_->curvature(); }

double ContagionFamily::operator()(double a, double x) const {
  check_args(a, x);
  return clamp_unit(impl_->raw(a, x), impl_->name());
}

ContagionFamily ContagionFamily::reflected() const {
  return ContagionFamily(std::make_shared<ReflectedImpl>(*this));
}

double eval_contagion(const ContagionFamily& family, double a, double x) { return family(a, x); }

double eval_blended(const ContagionFamily& family, Loyalty alpha, double a, double x) {
  // x + (1-alpha)(f - x) keeps every fixed point of f_a exactly fixed.
  const double fx = family(a, x);
  return clamp_unit(x + (1.0 - alpha.value()) * (fx - x), "blended map");
}

double invert_blended(const ContagionFamily& family, Loyalty alpha, double a, double y,
                      double tolerance) {
  check_args(a, y);
  const auto f = [&](double x) { return eval_blended(family, alpha, a, x); };
  const double at_lo = f(0.0);
  const double at_hi = f(1.0);
  if (y <= at_lo) {
    if (at_lo - y <= kClampSlack) return 0.0;
    std::ostringstream os;
    os.precision(17);
    os << "value " << y << " below the image [" << at_lo << ", " << at_hi << "]";
    throw DomainError(os.str());
  }
  if (y >= at_hi) {
    if (y - at_hi <= kClampSlack) return 1.0;
    std::ostringstream os;
    os.precision(17);
    os << "value " << y << " above the image [" << at_lo << ", " << at_hi << "]";
    throw DomainError(os.str());
  }

  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 60 && hi - lo > tolerance; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double v = f(mid);
    if (v == y) return mid;
    if (v < y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

ContagionFamily bar_transform(const ContagionFamily& family) { return family.reflected(); }

FamilyValidationReport validate_family(const ContagionFamily& family, int grid_size) {
  if (grid_size < 16) throw DomainError("validate_family: grid_size must be >= 16");

  FamilyValidationReport report;
  report.grid_size = grid_size;
  auto& out = report.violations;

  std::vector<double> as;
  as.reserve(grid_size + 3);
  const double span = std::log(8.0);
  for (int k = 0; k < grid_size; ++k) {
    as.push_back(std::exp(-span + 2.0 * span * k / (grid_size - 1)));
  }
  for (double anchor : {0.5, 1.0, 2.0}) {
    auto near = std::find_if(as.begin(), as.end(), [&](double v) { return std::abs(v - anchor) < 1e-9; });
    if (near != as.end()) {
      *near = anchor;
    } else {
      as.push_back(anchor);
    }
  }
  std::sort(as.begin(), as.end());

  std::vector<double> xs(grid_size);
  for (int j = 0; j < grid_size; ++j) xs[j] = static_cast<double>(j) / (grid_size - 1);

  const auto eval = [&](double a, double x, double& v) {
    try {
      v = family(a, x);
      return true;
    } catch (const ConsistencyError&) {
      out.push_back({"f_a maps [0,1] into [0,1]", a, x, 1.0});
      return false;
    }
  };

  constexpr double kExact = 1e-12;
  std::vector<double> prev_row;
  for (double a : as) {
    std::vector<double> row(xs.size(), 0.0);
    bool row_ok = true;
    for (std::size_t j = 0; j < xs.size(); ++j) row_ok = eval(a, xs[j], row[j]) && row_ok;
    if (!row_ok) {
      prev_row.clear();
      continue;
    }

    for (std::size_t j = 0; j < xs.size(); ++j) {
      const double x = xs[j];
      const double v = row[j];
      if (a > 1.0 && x < 1.0 && !(v > x)) out.push_back({"f_a(p)>p for a>1", a, x, x - v});
      if (a < 1.0 && x > 0.0 && !(v < x)) out.push_back({"f_a(p)<p for a<1", a, x, v - x});
      if (a == 1.0 && std::abs(v - x) > kExact) out.push_back({"f_1=Id", a, x, std::abs(v - x)});
      if (j > 0 && !(v > row[j - 1])) {
        out.push_back({"f_a strictly increasing", a, x, row[j - 1] - v});
      }
      if (!prev_row.empty() && x > 0.0 && x < 1.0 && !(v > prev_row[j])) {
        out.push_back({"a -> f_a(x) strictly increasing", a, x, prev_row[j] - v});
      }
    }
    if (a > 1.0 && std::abs(row.back() - 1.0) > kExact) {
      out.push_back({"f_a(1)=1 for a>1", a, 1.0, std::abs(row.back() - 1.0)});
    }
    if (a < 1.0 && std::abs(row.front()) > kExact) {
      out.push_back({"f_a(0)=0 for a<1", a, 0.0, std::abs(row.front())});
    }

    constexpr double h = 1e-6;
    constexpr double kSlopeTol = 1e-4;
    if (a < 1.0) {
      const double slope = (family(a, h) - family(a, 0.0)) / h;
      const double err = std::abs(slope - a);
      report.slope_errors_at_endpoints = std::max(report.slope_errors_at_endpoints, err);
      if (err > kSlopeTol) out.push_back({"f'_a(0)=a", a, 0.0, err});
    } else if (a > 1.0) {
      const double slope = (family(a, 1.0) - family(a, 1.0 - h)) / h;
      const double err = std::abs(slope - 1.0 / a);
      report.slope_errors_at_endpoints = std::max(report.slope_errors_at_endpoints, err);
      if (err > kSlopeTol) out.push_back({"f'_a(1)=1/a", a, 1.0, err});
    }
    prev_row = std::move(row);
  }
  return report;
}

}  // namespace buyerdyn
