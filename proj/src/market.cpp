#include "buyerdyn/market.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "buyerdyn/errors.hpp"
#include "buyerdyn/numerics.hpp"

namespace buyerdyn {

MarketState::MarketState(std::vector<double> p, std::vector<double> a)
    : p_(std::move(p)), a_(std::move(a)) {
  if (p_.empty()) throw DomainError("market state needs at least one seller");
  if (p_.size() != a_.size()) {
    std::ostringstream os;
    os << "p has " << p_.size() << " coordinates but a has " << a_.size();
    throw DomainError(os.str());
  }
  for (std::size_t i = 0; i < p_.size(); ++i) {
    if (!(p_[i] >= 0.0 && p_[i] <= 1.0)) {
      std::ostringstream os;
      os.precision(17);
      os << "p_" << i + 1 << " = " << p_[i] << " outside [0,1]";
      throw DomainError(os.str());
    }
    if (!(a_[i] > 0.0) || !std::isfinite(a_[i])) {
      std::ostringstream os;
      os.precision(17);
      os << "a_" << i + 1 << " = " << a_[i] << " is not a positive finite number";
      throw DomainError(os.str());
    }
  }
}

MarketState MarketState::homogeneous(std::size_t n, double p, double a) {
  return MarketState(std::vector<double>(n, p), std::vector<double>(n, a));
}

bool MarketState::is_homogeneous() const noexcept {
  return std::all_of(p_.begin(), p_.end(), [&](double x) { return x == p_.front(); }) &&
         std::all_of(a_.begin(), a_.end(), [&](double x) { return x == a_.front(); });
}

double max_abs_diff(const MarketState& x, const MarketState& y) {
  if (x.size() != y.size()) throw std::invalid_argument("max_abs_diff: size mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    d = std::max({d, std::abs(x.p()[i] - y.p()[i]), std::abs(x.a()[i] - y.a()[i])});
  }
  return d;
}

MarketState step(const SimulationParams& params, const MarketState& state) {
  const auto& p = state.p();
  const auto& a = state.a();
  const std::size_t n = state.size();
  const double q = mean(p);

  std::vector<double> a_next(n);
  std::vector<double> p_next(n);
  for (std::size_t i = 0; i < n; ++i) {
    a_next[i] = a[i] * params.rule(p[i], q);
    if (!(a_next[i] > 0.0) || !std::isfinite(a_next[i])) {
      std::ostringstream os;
      os.precision(17);
      os << "attractiveness a_" << i + 1 << " became " << a_next[i];
      throw DomainError(os.str());
    }
    // The new attractiveness drives today's contagion.
    p_next[i] = eval_blended(params.family, params.alpha, a_next[i], p[i]);
  }
  return MarketState(std::move(p_next), std::move(a_next));
}

MarketState step_inverse(const SimulationParams& params, const MarketState& state, double tolerance) {
  const auto& p_next = state.p();
  const auto& a_next = state.a();
  const std::size_t n = state.size();

  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = invert_blended(params.family, params.alpha, a_next[i], p_next[i], tolerance);
  }
  const double q = mean(p);
  std::vector<double> a(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double g = params.rule(p[i], q);
    if (!(g > 0.0)) {
      std::ostringstream os;
      os << "feedback vanished at seller " << i + 1 << "; predecessor undefined";
      throw DomainError(os.str());
    }
    a[i] = a_next[i] / g;
  }
  return MarketState(std::move(p), std::move(a));
}

double product_of(std::span<const double> a) {
  double prod = 1.0;
  for (double x : a) prod *= x;
  return prod;
}

namespace {

int unity_sign(double a) { return a > 1.0 ? 1 : (a < 1.0 ? -1 : 0); }

}  // namespace

UnityCrossingTracker::UnityCrossingTracker(std::span<const double> a0) : times_(a0.size()) {
  for (double a : a0) last_sign_.push_back(unity_sign(a));
}

void UnityCrossingTracker::observe(std::size_t t, std::span<const double> a) {
  if (a.size() != last_sign_.size()) throw std::invalid_argument("UnityCrossingTracker: size mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int s = unity_sign(a[i]);
    if (s == 0) continue;
    if (last_sign_[i] != 0 && s != last_sign_[i]) times_[i].push_back(t);
    last_sign_[i] = s;
  }
}

OrbitTrace iterate_orbit(const SimulationParams& params, const MarketState& initial) {
  if (params.record_stride == 0) throw std::invalid_argument("record_stride must be >= 1");

  OrbitTrace trace;
  const auto record = [&](std::size_t t, const MarketState& s) {
    trace.times.push_back(t);
    trace.pi.push_back(product_of(s.a()));
    trace.states.push_back(s);
  };

  UnityCrossingTracker crossings(initial.a());
  record(0, initial);
  MarketState current = initial;
  for (std::size_t t = 1; t <= params.horizon; ++t) {
    try {
      current = step(params, current);
    } catch (const DomainError& e) {
      throw DynamicsError(t - 1, e.what());
    } catch (const ConsistencyError& e) {
      throw DynamicsError(t - 1, e.what());
    }
    crossings.observe(t, current.a());
    if (t % params.record_stride == 0 || t == params.horizon) record(t, current);
  }
  trace.unity_crossings = crossings.times();
  return trace;
}

double synchronized_step(const ContagionFamily& family, Loyalty alpha, double a, double p) {
  return eval_blended(family, alpha, a, p);
}

LinearizedState::LinearizedState(std::vector<double> p, std::vector<double> a)
    : p_(std::move(p)), a_(std::move(a)) {
  if (p_.empty() || p_.size() != a_.size()) {
    throw DomainError("linearized state needs matching nonempty p and a");
  }
  for (std::size_t i = 0; i < p_.size(); ++i) {
    if (!(p_[i] > 0.0) || !std::isfinite(p_[i])) {
      throw DomainError("linearized state needs every p_i positive and finite");
    }
    if (!(a_[i] > 0.0) || !std::isfinite(a_[i])) {
      throw DomainError("linearized state needs every a_i positive and finite");
    }
  }
}

std::vector<double> LinearizedState::rho() const {
  std::vector<double> r;
  for (std::size_t i = 1; i < p_.size(); ++i) r.push_back(p_[i] / p_[0]);
  return r;
}

std::vector<double> LinearizedState::gamma() const {
  std::vector<double> r;
  for (std::size_t i = 1; i < a_.size(); ++i) r.push_back(a_[i] / a_[0]);
  return r;
}

LinearizedState linearized_step(const LinearizedState& state) {
  const auto& p = state.p();
  const auto& a = state.a();
  const std::size_t n = state.size();
  const double total = pairwise_sum(p);
  std::vector<double> a_next(n);
  std::vector<double> p_next(n);
  for (std::size_t i = 0; i < n; ++i) {
    a_next[i] = a[i] * total / (static_cast<double>(n) * p[i]);
    p_next[i] = a_next[i] * p[i];
  }
  return LinearizedState(std::move(p_next), std::move(a_next));
}

MarketState apply_permutation(const MarketState& state, std::span<const std::size_t> perm) {
  const std::size_t n = state.size();
  if (perm.size() != n) throw std::invalid_argument("permutation length differs from N");
  std::vector<bool> seen(n, false);
  for (std::size_t k : perm) {
    if (k >= n || seen[k]) throw std::invalid_argument("malformed permutation");
    seen[k] = true;
  }
  std::vector<double> p(n);
  std::vector<double> a(n);
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = state.p()[perm[i]];
    a[i] = state.a()[perm[i]];
  }
  return MarketState(std::move(p), std::move(a));
}

MarketState apply_inversion(const MarketState& state) {
  std::vector<double> p(state.size());
  std::vector<double> a(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) {
    p[i] = 1.0 - state.p()[i];
    a[i] = 1.0 / state.a()[i];
  }
  return MarketState(std::move(p), std::move(a));
}

SimulationParams conjugate_params(const SimulationParams& params) {
  SimulationParams out = params;
  out.family = bar_transform(params.family);
  out.rule = symmetry_transform(params.rule);
  return out;
}

}  // namespace buyerdyn
