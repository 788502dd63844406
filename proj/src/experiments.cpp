#include "buyerdyn/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "buyerdyn/errors.hpp"
#include "buyerdyn/numerics.hpp"
#include "parallel.hpp"

namespace buyerdyn {

namespace {

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

void require_unit_open(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!(x > 0.0 && x < 1.0)) {
      std::ostringstream os;
      os << what << " must lie in (0,1)^N, got coordinate " << x;
      throw std::invalid_argument(os.str());
    }
  }
}

}  // namespace

TrialRecord run_local_trial(const SimulationParams& params, const MarketState& initial,
                            double scale, const LocalStabilityOptions& options) {
  TrialRecord rec{.scale = scale, .initial = initial};
  rec.sup_max_a = max_of(initial.a());

  // Ring of the last `window` increments sum_i |a_i^{t+1} - a_i^t|.
  std::vector<double> increments(options.window, 0.0);
  MarketState x = initial;
  for (std::size_t t = 1; t <= params.horizon; ++t) {
    MarketState next = [&] {
      try {
        return step(params, x);
      } catch (const DomainError& e) {
        throw DynamicsError(t - 1, e.what());
      }
    }();
    double inc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) inc += std::abs(next.a()[i] - x.a()[i]);
    increments[t % options.window] = inc;
    rec.sup_max_a = std::max(rec.sup_max_a, max_of(next.a()));
    if (!rec.first_crossing && max_of(next.a()) > 1.0) rec.first_crossing = t;
    x = std::move(next);
  }
  rec.final_max_p = max_of(x.p());
  rec.trailing_increment = std::accumulate(increments.begin(), increments.end(), 0.0);
  rec.passed = rec.sup_max_a < 1.0 &&
               rec.trailing_increment < options.eps_conv * static_cast<double>(options.window) &&
               rec.final_max_p < options.final_p_tol;
  return rec;
}

StabilityExperimentReport local_stability_experiment(const SimulationParams& params,
                                                     std::span<const double> a0,
                                                     std::span<const double> eps_grid,
                                                     const LocalStabilityOptions& options) {
  if (a0.empty()) throw std::invalid_argument("local_stability_experiment: empty a0");
  for (double x : a0) {
    if (!(x > 0.0 && x < 1.0)) {
      throw std::invalid_argument("local_stability_experiment: every a0_i must lie in (0,1)");
    }
  }
  if (options.window == 0) throw std::invalid_argument("local_stability_experiment: window must be >= 1");

  // Initial conditions are drawn sequentially so the set of trials depends on
  // the seed only.
  Rng rng(options.seed);
  std::vector<MarketState> initials;
  std::vector<double> scales;
  for (double eps : eps_grid) {
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("epsilon must lie in (0,1]");
    for (std::size_t s = 0; s < options.samples_per_scale; ++s) {
      std::vector<double> p(a0.size());
      for (double& v : p) v = eps * rng.open_uniform();
      initials.emplace_back(std::move(p), std::vector<double>(a0.begin(), a0.end()));
      scales.push_back(eps);
    }
  }

  StabilityExperimentReport report;
  report.protocol = Protocol::LocalStability;
  report.seed = options.seed;
  report.horizon = params.horizon;
  report.trials = detail::parallel_map(initials.size(), [&](std::size_t k) {
    return run_local_trial(params, initials[k], scales[k], options);
  });

  for (double eps : eps_grid) {
    const bool all_pass = std::all_of(report.trials.begin(), report.trials.end(), [&](const TrialRecord& r) {
      return r.scale != eps || r.passed;
    });
    if (all_pass && (!report.passing_scale || eps > *report.passing_scale)) report.passing_scale = eps;
  }
  report.verdict = report.passing_scale.has_value();
  return report;
}

std::optional<std::size_t> linearized_first_crossing(const LinearizedState& initial,
                                                     std::size_t horizon) {
  LinearizedState x = initial;
  for (std::size_t t = 1; t <= horizon; ++t) {
    x = linearized_step(x);
    if (max_of(x.a()) > 1.0) return t;
  }
  return std::nullopt;
}

StabilityExperimentReport instability_experiment(const ContagionFamily& family, Loyalty alpha,
                                                 std::span<const double> a0,
                                                 std::span<const double> p_shape,
                                                 std::span<const double> delta_grid,
                                                 std::size_t horizon) {
  if (a0.empty() || a0.size() != p_shape.size()) {
    throw std::invalid_argument("instability_experiment: a0 and p_shape need equal nonzero length");
  }
  require_unit_open(a0, "a0");
  require_unit_open(p_shape, "p_shape");
  if (std::all_of(p_shape.begin(), p_shape.end(), [&](double x) { return x == p_shape[0]; })) {
    throw std::invalid_argument("instability_experiment: p_shape must not be homogeneous");
  }

  SimulationParams params{.family = family, .alpha = alpha, .rule = FeedbackRule::ratio(),
                          .horizon = horizon, .record_stride = 1};
  const std::vector<double> a(a0.begin(), a0.end());

  StabilityExperimentReport report;
  report.protocol = Protocol::Instability;
  report.horizon = horizon;
  report.trials = detail::parallel_map(delta_grid.size(), [&](std::size_t k) {
    const double delta = delta_grid[k];
    std::vector<double> p(p_shape.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = delta * p_shape[i];

    TrialRecord rec{.scale = delta, .initial = MarketState(p, a)};
    rec.sup_max_a = max_of(a);
    MarketState x = rec.initial;
    for (std::size_t t = 1; t <= horizon; ++t) {
      try {
        x = step(params, x);
      } catch (const DomainError& e) {
        throw DynamicsError(t - 1, e.what());
      }
      const double m = max_of(x.a());
      rec.sup_max_a = std::max(rec.sup_max_a, m);
      if (m > 1.0) {
        rec.first_crossing = t;
        break;
      }
    }
    rec.final_max_p = max_of(x.p());
    rec.linearized_first_crossing = linearized_first_crossing(LinearizedState(p, a), horizon);
    rec.passed = rec.first_crossing.has_value();
    return rec;
  });

  report.all_crossed = std::all_of(report.trials.begin(), report.trials.end(),
                                   [](const TrialRecord& r) { return r.passed; });
  report.linearized_delta_independent =
      !report.trials.empty() && report.trials.front().linearized_first_crossing.has_value() &&
      std::all_of(report.trials.begin(), report.trials.end(), [&](const TrialRecord& r) {
        return r.linearized_first_crossing == report.trials.front().linearized_first_crossing;
      });
  report.verdict = report.all_crossed && report.linearized_delta_independent;
  return report;
}

Coordinate Coordinate::parse(const std::string& text) {
  const std::string digits = text.size() > 1 ? text.substr(1) : "";
  if ((text.empty() || (text[0] != 'p' && text[0] != 'a')) || digits.empty() || digits.size() > 9 ||
      digits.find_first_not_of("0123456789") != std::string::npos || std::stoul(digits) == 0) {
    throw std::invalid_argument("coordinate must look like p<i> or a<i>, got '" + text + "'");
  }
  return Coordinate{text[0] == 'p' ? Block::P : Block::A, std::stoul(digits) - 1};
}

std::string Coordinate::label() const {
  return (block == Block::P ? "p" : "a") + std::to_string(index + 1);
}

MarketState with_coordinate(const MarketState& state, Coordinate c, double value) {
  if (c.index >= state.size()) {
    throw std::invalid_argument("coordinate " + c.label() + " out of range for N=" +
                                std::to_string(state.size()));
  }
  std::vector<double> p = state.p();
  std::vector<double> a = state.a();
  (c.block == Coordinate::Block::P ? p : a)[c.index] = value;
  return MarketState(std::move(p), std::move(a));
}

namespace {

struct Side {
  FixedPointKind kind;
  std::string verdict;
  bool heuristic;
};

Side classify_side(const SimulationParams& params, const MarketState& initial,
                   const ConvergenceOptions& options) {
  SimulationParams p = params;
  p.record_stride = 1;
  const OrbitTrace trace = iterate_orbit(p, initial);
  const ConvergenceVerdict v = detect_convergence(p, trace, options);
  if (v.converged_to(FixedPointKind::AllZero) || v.converged_to(FixedPointKind::AllOne)) {
    return {v.kind, v.label(), false};
  }
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t k = trace.size() - options.window; k < trace.size(); ++k) {
    for (double x : trace.states[k].p()) {
      sum += x;
      ++count;
    }
  }
  const double trailing_mean = sum / static_cast<double>(count);
  return {trailing_mean < 0.5 ? FixedPointKind::AllZero : FixedPointKind::AllOne, v.label(), true};
}

}  // namespace

BasinScanResult basin_bisection(const SimulationParams& params, const MarketState& base,
                                Coordinate varied, double lo, double hi, double tol,
                                const ConvergenceOptions& options) {
  if (!(lo < hi)) {
    throw std::invalid_argument(lo == hi ? "basin_bisection: degenerate bracket (lo == hi)"
                                         : "basin_bisection: inverted bracket (lo > hi)");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("basin_bisection: tol must be positive");

  BasinScanResult result;
  result.varied = varied;

  const Side at_lo = classify_side(params, with_coordinate(base, varied, lo), options);
  const Side at_hi = classify_side(params, with_coordinate(base, varied, hi), options);
  result.transcript.push_back({lo, at_lo.verdict, at_lo.kind, at_lo.heuristic});
  result.transcript.push_back({hi, at_hi.verdict, at_hi.kind, at_hi.heuristic});
  if (at_lo.heuristic || at_hi.heuristic || at_lo.kind == at_hi.kind) {
    throw std::invalid_argument("basin_bisection: endpoint verdicts must be distinct convergences (" +
                                at_lo.verdict + " at " + varied.label() + "=lo, " + at_hi.verdict +
                                " at hi)");
  }

  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const Side s = classify_side(params, with_coordinate(base, varied, mid), options);
    result.transcript.push_back({mid, s.verdict, s.kind, s.heuristic});
    result.heuristic_used = result.heuristic_used || s.heuristic;
    if (s.kind == at_lo.kind) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  result.lower = lo;
  result.upper = hi;
  result.lower_kind = at_lo.kind;
  result.upper_kind = at_hi.kind;
  result.boundary_estimate = 0.5 * (lo + hi);
  result.boundary_width = hi - lo;
  return result;
}

}  // namespace buyerdyn
