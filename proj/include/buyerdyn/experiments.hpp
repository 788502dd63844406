#pragma once

// Experiment protocols: local stability near p = 0, the Ratio-rule
// instability near p = 0 against its linearization, and basin-boundary
// bisection along one initial coordinate.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "buyerdyn/analysis.hpp"
#include "buyerdyn/market.hpp"

namespace buyerdyn {

enum class Protocol { LocalStability, Instability };

struct TrialRecord {
  double scale = 0.0;  // epsilon (local stability) or delta (instability)
  MarketState initial;
  bool passed = false;
  double sup_max_a = 0.0;
  double final_max_p = 0.0;
  double trailing_increment = 0.0;
  std::optional<std::size_t> first_crossing;             // first t with max_i a_i^t > 1
  std::optional<std::size_t> linearized_first_crossing;  // same for the linearized system
};

struct StabilityExperimentReport {
  Protocol protocol = Protocol::LocalStability;
  std::uint64_t seed = 0;
  std::size_t horizon = 0;
  std::vector<TrialRecord> trials;
  // LocalStability: largest epsilon whose samples all pass.
  std::optional<double> passing_scale;
  // Instability: every delta crossed, and the linearized crossing time is the
  // same integer for every delta.
  bool all_crossed = false;
  bool linearized_delta_independent = false;
  bool verdict = false;
};

struct LocalStabilityOptions {
  std::size_t samples_per_scale = 16;
  std::uint64_t seed = 20240611;
  double eps_conv = 1e-10;
  std::size_t window = 100;
  double final_p_tol = 1e-8;
};

// One orbit of the local stability protocol from `initial`: passes when
// sup_t max_i a_i^t < 1, the trailing-window sum of |a^{t+1} - a^t| is below
// eps_conv * window, and the final max_i p_i is below final_p_tol.
TrialRecord run_local_trial(const SimulationParams& params, const MarketState& initial,
                            double scale, const LocalStabilityOptions& options = {});

// Samples p^0 in (0, eps)^N for each eps in eps_grid. Requires every a0_i < 1.
StabilityExperimentReport local_stability_experiment(const SimulationParams& params,
                                                     std::span<const double> a0,
                                                     std::span<const double> eps_grid,
                                                     const LocalStabilityOptions& options = {});

// Ratio-rule orbits from (delta * p_shape, a0) against the linearized system.
// Requires a0 in (0,1)^N and a non-homogeneous p_shape in (0,1)^N.
StabilityExperimentReport instability_experiment(const ContagionFamily& family, Loyalty alpha,
                                                 std::span<const double> a0,
                                                 std::span<const double> p_shape,
                                                 std::span<const double> delta_grid,
                                                 std::size_t horizon);

// First t in [1, horizon] at which the linearized orbit has max_i a_i^t > 1.
std::optional<std::size_t> linearized_first_crossing(const LinearizedState& initial,
                                                     std::size_t horizon);

struct Coordinate {
  enum class Block { P, A } block = Block::P;
  std::size_t index = 0;  // 0-based seller index

  // "p2" / "a1" style, 1-based.
  static Coordinate parse(const std::string& text);
  std::string label() const;
};

MarketState with_coordinate(const MarketState& state, Coordinate c, double value);

struct BisectionStep {
  double value;
  std::string verdict;
  FixedPointKind side;
  bool heuristic;
};

struct BasinScanResult {
  Coordinate varied;
  double lower = 0.0;
  double upper = 0.0;
  FixedPointKind lower_kind = FixedPointKind::NotFixed;
  FixedPointKind upper_kind = FixedPointKind::NotFixed;
  double boundary_estimate = 0.0;
  double boundary_width = 0.0;
  bool heuristic_used = false;
  std::vector<BisectionStep> transcript;
};

// Bisects `varied` on [lo, hi] until the bracket is at most tol wide. The
// orbits at lo and hi must converge to different ends (AllZero vs AllOne);
// otherwise std::invalid_argument. Undecided midpoints are assigned to the
// side their trailing mean clientele is nearer to and flagged.
BasinScanResult basin_bisection(const SimulationParams& params, const MarketState& base,
                                Coordinate varied, double lo, double hi, double tol,
                                const ConvergenceOptions& options = {});

}  // namespace buyerdyn
