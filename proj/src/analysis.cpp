#include "buyerdyn/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "buyerdyn/errors.hpp"

namespace buyerdyn {

std::string to_string(FixedPointKind kind) {
  switch (kind) {
    case FixedPointKind::AllZero: return "AllZero";
    case FixedPointKind::AllOne: return "AllOne";
    case FixedPointKind::NeutralA: return "NeutralA";
    case FixedPointKind::Ghost: return "Ghost";
    case FixedPointKind::NotFixed: return "NotFixed";
  }
  return "?";
}

std::string to_string(ConvergenceStatus status) {
  switch (status) {
    case ConvergenceStatus::Converged: return "Converged";
    case ConvergenceStatus::Undecided: return "Undecided";
    case ConvergenceStatus::AttractivenessNearUnity: return "AttractivenessNearUnity";
  }
  return "?";
}

std::string ConvergenceVerdict::label() const {
  if (status == ConvergenceStatus::Converged) return "Converged(" + to_string(kind) + ")";
  return to_string(status);
}

FixedPointKind classify_fixed_point(const SimulationParams& params, const MarketState& state,
                                    double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("classify_fixed_point: tol must be positive");
  const auto& p = state.p();
  const auto& a = state.a();
  const auto all = [](const std::vector<double>& v, auto pred) {
    return std::all_of(v.begin(), v.end(), pred);
  };

  const bool p_zero = all(p, [&](double x) { return x <= tol; });
  if (p_zero && std::any_of(a.begin(), a.end(), [&](double x) { return x < tol; })) {
    return FixedPointKind::Ghost;
  }

  bool stationary = false;
  try {
    stationary = max_abs_diff(step(params, state), state) <= tol;
  } catch (const DomainError&) {
  }
  if (!stationary) return FixedPointKind::NotFixed;

  if (p_zero && all(a, [&](double x) { return x <= 1.0 + tol; })) return FixedPointKind::AllZero;
  if (all(p, [&](double x) { return x >= 1.0 - tol; }) &&
      all(a, [&](double x) { return x >= 1.0 - tol; })) {
    return FixedPointKind::AllOne;
  }
  const auto [pmin, pmax] = std::minmax_element(p.begin(), p.end());
  if (*pmax - *pmin <= tol && all(a, [&](double x) { return std::abs(x - 1.0) <= tol; })) {
    return FixedPointKind::NeutralA;
  }
  return FixedPointKind::NotFixed;
}

ConvergenceVerdict detect_convergence(const SimulationParams& params, const OrbitTrace& trace,
                                      const ConvergenceOptions& options) {
  if (options.window == 0 || trace.size() <= options.window) {
    throw std::invalid_argument("detect_convergence: trace must be longer than the window");
  }
  const std::size_t n = trace.size();

  double disp = 0.0;
  for (std::size_t k = n - 1 - options.window; k + 1 < n; ++k) {
    disp = std::max(disp, max_abs_diff(trace.states[k + 1], trace.states[k]));
  }
  double unity = std::numeric_limits<double>::infinity();
  for (std::size_t k = n / 2; k < n; ++k) {
    for (double x : trace.states[k].a()) unity = std::min(unity, std::abs(x - 1.0));
  }

  ConvergenceVerdict v{.limit = trace.back(),
                       .evidence = {disp, unity, trace.times.back()}};
  const FixedPointKind kind = classify_fixed_point(params, trace.back(), options.classify_tol);
  if (disp < options.eps_conv && kind != FixedPointKind::NotFixed) {
    v.status = ConvergenceStatus::Converged;
    v.kind = kind;
  } else if (unity < options.eps_unity) {
    v.status = ConvergenceStatus::AttractivenessNearUnity;
  } else {
    v.status = ConvergenceStatus::Undecided;
  }
  return v;
}

ConvergenceVerdict classify_orbit(const SimulationParams& params, const MarketState& initial,
                                  const ConvergenceOptions& options) {
  SimulationParams p = params;
  p.record_stride = 1;
  return detect_convergence(p, iterate_orbit(p, initial), options);
}

ProductAudit audit_product_monotonicity(const OrbitTrace& trace) {
  if (trace.size() == 0) throw std::invalid_argument("audit_product_monotonicity: empty trace");
  ProductAudit audit;
  if (trace.size() == 1) return audit;
  double max_ratio = -std::numeric_limits<double>::infinity();
  double min_ratio = std::numeric_limits<double>::infinity();
  audit.ratios.reserve(trace.size() - 1);
  for (std::size_t k = 0; k + 1 < trace.size(); ++k) {
    const double r = trace.pi[k + 1] / trace.pi[k];
    audit.ratios.push_back(r);
    max_ratio = std::max(max_ratio, r);
    min_ratio = std::min(min_ratio, r);
  }
  audit.max_increase = max_ratio - 1.0;
  audit.min_ratio = min_ratio;
  return audit;
}

std::vector<std::size_t> count_unity_crossings(const OrbitTrace& trace) {
  std::vector<std::size_t> counts;
  counts.reserve(trace.unity_crossings.size());
  for (const auto& c : trace.unity_crossings) counts.push_back(c.size());
  return counts;
}

BoundednessAudit boundedness_audit(const OrbitTrace& trace) {
  if (trace.size() == 0) throw std::invalid_argument("boundedness_audit: empty trace");
  BoundednessAudit audit;
  const std::size_t half = (trace.size() + 1) / 2;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const auto& a = trace.states[k].a();
    const double m = *std::max_element(a.begin(), a.end());
    if (m > audit.sup) {
      audit.sup = m;
      audit.sup_time = trace.times[k];
    }
    if (k < half) audit.first_half_sup = std::max(audit.first_half_sup, m);
  }
  audit.trailing_growth = std::max(0.0, audit.sup - audit.first_half_sup);
  return audit;
}

}  // namespace buyerdyn
