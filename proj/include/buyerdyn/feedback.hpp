#pragma once

// Attractiveness update rules g(p, q): a seller with clientele p in a market
// of mean clientele q multiplies its attractiveness by g(p, q).

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace buyerdyn {

enum class RuleKind { Linear, Ratio, Symmetrized, UserTable };

class FeedbackRule {
 public:
  using Rule = std::function<double(double p, double q)>;
  using Domain = std::function<bool(double p, double q)>;

  // 1 + q - p
  static FeedbackRule linear();
  // q / p, defined for p > 0 only
  static FeedbackRule ratio();
  // 1 / inner(1 - p, 1 - q)
  static FeedbackRule symmetrized(FeedbackRule inner);
  // Defaults to the full square [0,1]^2 when no domain predicate is given.
  static FeedbackRule user(std::string name, Rule rule, Domain domain = {});

  RuleKind kind() const noexcept;
  std::string name() const;

  // Inner rule of a Symmetrized rule.
  std::optional<FeedbackRule> inner() const;

  // True if (p, q) lies in [0,1]^2 and in the rule's own domain.
  bool in_domain(double p, double q) const;

  // Throws DomainError outside the domain.
  double operator()(double p, double q) const;

  FeedbackRule symmetrized() const { return symmetrized(*this); }

  struct Impl;

 private:
  explicit FeedbackRule(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

double eval_feedback(const FeedbackRule& rule, double p, double q);
FeedbackRule symmetry_transform(const FeedbackRule& rule);

struct GridPoint {
  double p;
  double q;
};

// Off-diagonal grid points where (g(p,q) - 1)(q - p) <= 0.
std::vector<GridPoint> check_sign_condition(const FeedbackRule& rule, int grid_size);

struct ReactivityBound {
  bool bounded = false;
  double K = 0.0;  // running sup at the finest level, also set when unbounded
  std::vector<double> level_sups;
};

// Estimate of the least K with |g(p,q) - 1| <= K max{p,q} on (0,1/2)^2.
ReactivityBound estimate_reactivity_bound(const FeedbackRule& rule, int grid_size);

// mean_i g(p_i, mean(p)) - 1 for one clientele vector.
double concavity_excess(const FeedbackRule& rule, std::span<const double> p);

inline constexpr std::uint64_t kDefaultSeed = 20240611;

// Max of concavity_excess over `sample_count` vectors drawn uniformly from
// (0,1)^N. A value <= 1e-12 certifies the mean-of-g condition on the sample.
double check_concavity(const FeedbackRule& rule, int N, int sample_count,
                       std::uint64_t seed = kDefaultSeed);

// g(p_i, mean(p)) > 0 over sampled vectors in [0,1]^N restricted to the domain.
bool check_positivity(const FeedbackRule& rule, int N, int sample_count,
                      std::uint64_t seed = kDefaultSeed);

struct ConditionOptions {
  int sign_grid = 128;
  int reactivity_grid = 256;
  int N = 2;
  int samples = 10000;
  std::uint64_t seed = kDefaultSeed;
};

struct ConditionReport {
  std::string rule;
  std::vector<GridPoint> ineqg_violations;
  ReactivityBound reactivity;
  double concavity_margin = 0.0;
  bool positivity_ok = false;
};

ConditionReport verify_conditions(const FeedbackRule& rule, const ConditionOptions& options = {});

}  // namespace buyerdyn
