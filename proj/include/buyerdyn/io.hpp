#pragma once

// Run configuration files and time-series export.
//
// Configuration is line based: `key = value`, blank lines and `#` comments
// ignored, vectors comma separated. Recognized keys:
//
//   N              number of sellers (required)
//   alpha          loyalty in [0,1) (required)
//   family         quadratic (required)
//   curvature      quadratic curvature in (0,1), default 0.9
//   rule           linear | ratio | symmetrized(<rule>) | symmetrized (required)
//   inner_rule     inner rule when rule = symmetrized
//   p, a           initial clientele and attractiveness vectors (required)
//   horizon        number of steps (required)
//   record_stride  default 1
//   eps_conv       default 1e-10
//   eps_unity      default 1e-3
//   window         default 100
//   seed           default 20240611

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "buyerdyn/analysis.hpp"
#include "buyerdyn/market.hpp"

namespace buyerdyn {

struct RunConfig {
  std::size_t N = 0;
  double alpha = 0.0;
  std::string family = "quadratic";
  double curvature = 0.9;
  std::string rule = "linear";  // canonical spec, e.g. "symmetrized(ratio)"
  std::vector<double> p;
  std::vector<double> a;
  std::size_t horizon = 0;
  std::size_t record_stride = 1;
  double eps_conv = 1e-10;
  double eps_unity = 1e-3;
  std::size_t window = 100;
  std::uint64_t seed = 20240611;

  SimulationParams params() const;
  MarketState initial_state() const;
  ConvergenceOptions convergence() const;
};

// Throws ConfigError naming the offending key.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Serializes a config back to the key-value format (parse_config round trips).
std::string format_config(const RunConfig& config);

// "linear", "ratio", "symmetrized(<spec>)". Throws ConfigError.
FeedbackRule parse_rule(const std::string& spec);

// Shortest decimal with 17 significant digits ("%.17g").
std::string format_double(double x);

// Header t,p_1..p_N,a_1..a_N,pi then one row per recorded time.
void write_csv(std::ostream& out, const OrbitTrace& trace);
std::string to_csv(const OrbitTrace& trace);

struct ExportTable {
  std::size_t N = 0;
  std::vector<std::size_t> times;
  std::vector<MarketState> states;
  std::vector<double> pi;
};

// Inverse of write_csv. Throws ConfigError on malformed input.
ExportTable read_csv(std::istream& in);

}  // namespace buyerdyn
