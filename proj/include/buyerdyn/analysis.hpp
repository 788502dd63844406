#pragma once

// Orbit post-processing: fixed-point taxonomy, horizon-relative convergence
// verdicts, and audits of the attractiveness product and its bounds.

#include <cstddef>
#include <string>
#include <vector>

#include "buyerdyn/market.hpp"

namespace buyerdyn {

enum class FixedPointKind { AllZero, AllOne, NeutralA, Ghost, NotFixed };

std::string to_string(FixedPointKind kind);

// Checks that step(state) stays within `tol` of state and that the state
// matches one of the stationary families: p = 0 with a <= 1, p = 1 with
// a >= 1, or homogeneous p with a = 1. p = 0 with some a_i < tol is a ghost.
FixedPointKind classify_fixed_point(const SimulationParams& params, const MarketState& state,
                                    double tol);

enum class ConvergenceStatus { Converged, Undecided, AttractivenessNearUnity };

std::string to_string(ConvergenceStatus status);

struct ConvergenceOptions {
  double eps_conv = 1e-10;
  double eps_unity = 1e-3;
  std::size_t window = 100;
  double classify_tol = 1e-6;
};

struct ConvergenceEvidence {
  double max_displacement = 0.0;    // over the trailing window
  double min_unity_distance = 0.0;  // min_i |a_i - 1| over the trailing half
  std::size_t horizon = 0;
};

struct ConvergenceVerdict {
  ConvergenceStatus status = ConvergenceStatus::Undecided;
  FixedPointKind kind = FixedPointKind::NotFixed;  // meaningful when Converged
  MarketState limit;
  ConvergenceEvidence evidence;

  bool converged_to(FixedPointKind k) const {
    return status == ConvergenceStatus::Converged && kind == k;
  }
  std::string label() const;
};

// Requires trace.size() > options.window (throws std::invalid_argument).
ConvergenceVerdict detect_convergence(const SimulationParams& params, const OrbitTrace& trace,
                                      const ConvergenceOptions& options = {});

// Runs the orbit at stride 1 for params.horizon steps and classifies it.
ConvergenceVerdict classify_orbit(const SimulationParams& params, const MarketState& initial,
                                  const ConvergenceOptions& options = {});

struct ProductAudit {
  std::vector<double> ratios;  // pi[k+1] / pi[k]
  double max_increase = 0.0;   // max(ratio) - 1
  double min_ratio = 1.0;
};

ProductAudit audit_product_monotonicity(const OrbitTrace& trace);

std::vector<std::size_t> count_unity_crossings(const OrbitTrace& trace);

struct BoundednessAudit {
  double sup = 0.0;  // sup over recorded t of max_i a_i^t
  std::size_t sup_time = 0;
  double first_half_sup = 0.0;
  double trailing_growth = 0.0;  // max(0, sup - first_half_sup)
};

BoundednessAudit boundedness_audit(const OrbitTrace& trace);

}  // namespace buyerdyn
