#pragma once

// Market state (p, a) in [0,1]^N x (0,inf)^N and the forward map
//   a_i' = a_i g(p_i, mean(p)),   p_i' = f_{alpha, a_i'}(p_i).

#include <cstddef>
#include <span>
#include <vector>

#include "buyerdyn/contagion.hpp"
#include "buyerdyn/feedback.hpp"

namespace buyerdyn {

class MarketState {
 public:
  // Throws DomainError unless sizes match, N >= 1, p in [0,1]^N, a > 0.
  MarketState(std::vector<double> p, std::vector<double> a);

  static MarketState homogeneous(std::size_t n, double p, double a);

  std::size_t size() const noexcept { return p_.size(); }
  const std::vector<double>& p() const noexcept { return p_; }
  const std::vector<double>& a() const noexcept { return a_; }

  bool is_homogeneous() const noexcept;

  friend bool operator==(const MarketState&, const MarketState&) = default;

 private:
  std::vector<double> p_;
  std::vector<double> a_;
};

// Largest coordinate-wise |difference| over both p and a.
double max_abs_diff(const MarketState& x, const MarketState& y);

struct SimulationParams {
  ContagionFamily family = ContagionFamily::quadratic();
  Loyalty alpha{};
  FeedbackRule rule = FeedbackRule::linear();
  std::size_t horizon = 1;
  std::size_t record_stride = 1;
};

MarketState step(const SimulationParams& params, const MarketState& state);

// Predecessor of `state` under step. Root-finding tolerance defaults to
// kInverseTolerance, which yields round trips within 1e-9.
MarketState step_inverse(const SimulationParams& params, const MarketState& state,
                         double tolerance = kInverseTolerance);

struct OrbitTrace {
  std::vector<std::size_t> times;
  std::vector<MarketState> states;
  std::vector<double> pi;  // product of the a-coordinates of states[k]
  // Per seller, the times t at which a_i^t - 1 takes a strict sign opposite
  // to its last strict sign. Tracked at every step, not just recorded ones.
  std::vector<std::vector<std::size_t>> unity_crossings;

  std::size_t size() const noexcept { return states.size(); }
  const MarketState& back() const { return states.back(); }
};

// Sign changes of a_i - 1 fed one step at a time. A value of exactly 1 is a
// boundary event and is attributed to the next strict sign change.
class UnityCrossingTracker {
 public:
  explicit UnityCrossingTracker(std::span<const double> a0);
  void observe(std::size_t t, std::span<const double> a);
  const std::vector<std::vector<std::size_t>>& times() const noexcept { return times_; }

 private:
  std::vector<int> last_sign_;
  std::vector<std::vector<std::size_t>> times_;
};

// Applies step `params.horizon` times recording every record_stride steps and
// the final state. DomainErrors are rethrown as DynamicsError carrying t.
OrbitTrace iterate_orbit(const SimulationParams& params, const MarketState& initial);

double synchronized_step(const ContagionFamily& family, Loyalty alpha, double a, double p);

// Linearization at p = 0 with alpha = 0 and g(p,q) = q/p:
//   a_i' = a_i * sum(p) / (N p_i),   p_i' = a_i' p_i.
class LinearizedState {
 public:
  LinearizedState(std::vector<double> p, std::vector<double> a);

  std::size_t size() const noexcept { return p_.size(); }
  const std::vector<double>& p() const noexcept { return p_; }
  const std::vector<double>& a() const noexcept { return a_; }

  // p_i / p_1 and a_i / a_1 for i >= 2 (0-based index 1..N-1).
  std::vector<double> rho() const;
  std::vector<double> gamma() const;

 private:
  std::vector<double> p_;
  std::vector<double> a_;
};

LinearizedState linearized_step(const LinearizedState& state);

// perm[i] is the source index of output coordinate i: (pi x)_i = x_{perm[i]}.
MarketState apply_permutation(const MarketState& state, std::span<const std::size_t> perm);

// (p, a) -> (1 - p, 1 / a).
MarketState apply_inversion(const MarketState& state);

// Parameters of the conjugate system: bar f and S g, same alpha.
SimulationParams conjugate_params(const SimulationParams& params);

double product_of(std::span<const double> a);

}  // namespace buyerdyn
