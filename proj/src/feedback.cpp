#include "buyerdyn/feedback.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "buyerdyn/errors.hpp"
#include "buyerdyn/numerics.hpp"

namespace buyerdyn {

struct FeedbackRule::Impl {
  virtual ~Impl() = default;
  virtual RuleKind kind() const = 0;
  virtual std::string name() const = 0;
  virtual bool own_domain(double p, double q) const = 0;
  virtual double raw(double p, double q) const = 0;
  virtual std::optional<FeedbackRule> inner() const { return std::nullopt; }
};

namespace {

bool in_unit_square(double p, double q) { return p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0; }

struct LinearImpl final : FeedbackRule::Impl {
  RuleKind kind() const override { return RuleKind::Linear; }
  std::string name() const override { return "linear"; }
  bool own_domain(double, double) const override { return true; }
  double raw(double p, double q) const override { return 1.0 + (q - p); }
};

struct RatioImpl final : FeedbackRule::Impl {
  RuleKind kind() const override { return RuleKind::Ratio; }
  std::string name() const override { return "ratio"; }
  bool own_domain(double p, double) const override { return p > 0.0; }
  double raw(double p, double q) const override { return q / p; }
};

struct SymmetrizedImpl final : FeedbackRule::Impl {
  FeedbackRule base;
  explicit SymmetrizedImpl(FeedbackRule b) : base(std::move(b)) {}
  RuleKind kind() const override { return RuleKind::Symmetrized; }
  std::string name() const override { return "symmetrized(" + base.name() + ")"; }
  bool own_domain(double p, double q) const override { return base.in_domain(1.0 - p, 1.0 - q); }
  double raw(double p, double q) const override { return 1.0 / base(1.0 - p, 1.0 - q); }
  std::optional<FeedbackRule> inner() const override { return base; }
};

struct UserImpl final : FeedbackRule::Impl {
  std::string label;
  FeedbackRule::Rule rule;
  FeedbackRule::Domain domain;
  UserImpl(std::string l, FeedbackRule::Rule r, FeedbackRule::Domain d)
      : label(std::move(l)), rule(std::move(r)), domain(std::move(d)) {}
  RuleKind kind() const override { return RuleKind::UserTable; }
  std::string name() const override { return label; }
  bool own_domain(double p, double q) const override { return !domain || domain(p, q); }
  double raw(double p, double q) const override { return rule(p, q); }
};

}  // namespace

FeedbackRule FeedbackRule::linear() { return FeedbackRule(std::make_shared<LinearImpl>()); }
FeedbackRule FeedbackRule::ratio() { return FeedbackRule(std::make_shared<RatioImpl>()); }

FeedbackRule FeedbackRule::symmetrized(FeedbackRule inner) {
  return FeedbackRule(std::make_shared<SymmetrizedImpl>(std::move(inner)));
}

FeedbackRule FeedbackRule::user(std::string name, Rule rule, Domain domain) {
  return FeedbackRule(std::make_shared<UserImpl>(std::move(name), std::move(rule), std::move(domain)));
}

RuleKind FeedbackRule::kind() const noexcept { return impl_->kind(); }
std::string FeedbackRule::name() const { return impl_->name(); }
std::optional<FeedbackRule> FeedbackRule::inner() const { return impl_->inner(); }

bool FeedbackRule::in_domain(double p, double q) const {
  return in_unit_square(p, q) && impl_->own_domain(p, q);
}

double FeedbackRule::operator()(double p, double q) const {
  if (!in_domain(p, q)) {
    std::ostringstream os;
    os.precision(17);
    os << name() << ": (p, q) = (" << p << ", " << q << ") outside the rule's domain";
    throw DomainError(os.str());
  }
  const double v = impl_->raw(p, q);
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os.precision(17);
    os << name() << ": non-finite value at (p, q) = (" << p << ", " << q << ")";
    throw DomainError(os.str());
  }
  return v;
}

double eval_feedback(const FeedbackRule& rule, double p, double q) { return rule(p, q); }

FeedbackRule symmetry_transform(const FeedbackRule& rule) { return rule.symmetrized(); }

std::vector<GridPoint> check_sign_condition(const FeedbackRule& rule, int grid_size) {
  if (grid_size < 16) throw DomainError("check_sign_condition: grid_size must be >= 16");
  std::vector<GridPoint> witnesses;
  const double step = 1.0 / (grid_size - 1);
  for (int i = 0; i < grid_size; ++i) {
    const double p = i * step;
    for (int j = 0; j < grid_size; ++j) {
      if (i == j) continue;
      const double q = j * step;
      if (!rule.in_domain(p, q)) continue;
      double g;
      try {
        g = rule(p, q);
      } catch (const DomainError&) {
        continue;
      }
      if (!((g - 1.0) * (q - p) > 0.0)) witnesses.push_back({p, q});
    }
  }
  return witnesses;
}

ReactivityBound estimate_reactivity_bound(const FeedbackRule& rule, int grid_size) {
  if (grid_size < 64) throw DomainError("estimate_reactivity_bound: grid_size must be >= 64");
  constexpr int kLevels = 8;

  ReactivityBound out;
  double running = 0.0;
  std::vector<double> pts(grid_size);
  for (int level = 1; level <= kLevels; ++level) {
    // Log-spaced points in [lo, 1/2): lo * r^j with r^n = 1/(2 lo).
    const double lo = 0.5 * std::pow(10.0, -level);
    const double log_ratio = std::log(0.5 / lo) / grid_size;
    for (int j = 0; j < grid_size; ++j) pts[j] = lo * std::exp(log_ratio * j);

    for (double p : pts) {
      for (double q : pts) {
        if (!rule.in_domain(p, q)) continue;
        double g;
        try {
          g = rule(p, q);
        } catch (const DomainError&) {
          continue;
        }
        running = std::max(running, std::abs(g - 1.0) / std::max(p, q));
      }
    }
    out.level_sups.push_back(running);
  }

  out.K = running;
  out.bounded = true;
  for (std::size_t k = 2; k < out.level_sups.size(); ++k) {
    if (out.level_sups[k] > 10.0 * out.level_sups[k - 2]) {
      out.bounded = false;
      break;
    }
  }
  return out;
}

double concavity_excess(const FeedbackRule& rule, std::span<const double> p) {
  const double q = mean(p);
  std::vector<double> dev(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) dev[i] = rule(p[i], q) - 1.0;
  return mean(dev);
}

double check_concavity(const FeedbackRule& rule, int N, int sample_count, std::uint64_t seed) {
  if (N < 2) throw DomainError("check_concavity: N must be >= 2");
  if (sample_count < 1000) throw DomainError("check_concavity: sample_count must be >= 1000");
  Rng rng(seed);
  std::vector<double> p(N);
  double margin = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < sample_count; ++s) {
    for (double& x : p) x = rng.open_uniform();
    try {
      margin = std::max(margin, concavity_excess(rule, p));
    } catch (const DomainError&) {
    }
  }
  return margin;
}

bool check_positivity(const FeedbackRule& rule, int N, int sample_count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> p(N);
  for (int s = 0; s < sample_count; ++s) {
    for (double& x : p) x = rng.uniform();
    const double q = mean(p);
    for (double x : p) {
      if (!rule.in_domain(x, q)) continue;
      try {
        if (!(rule(x, q) > 0.0)) return false;
      } catch (const DomainError&) {
        return false;
      }
    }
  }
  return true;
}

ConditionReport verify_conditions(const FeedbackRule& rule, const ConditionOptions& options) {
  ConditionReport r;
  r.rule = rule.name();
  r.ineqg_violations = check_sign_condition(rule, options.sign_grid);
  r.reactivity = estimate_reactivity_bound(rule, options.reactivity_grid);
  r.concavity_margin = check_concavity(rule, options.N, options.samples, options.seed);
  r.positivity_ok = check_positivity(rule, options.N, options.samples, options.seed);
  return r;
}

}  // namespace buyerdyn
