#include "buyerdyn/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "buyerdyn/errors.hpp"

namespace buyerdyn {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError(key, "expected a number, got an empty value");
  char* end = nullptr;
  // Underflow to a subnormal is fine; overflow shows up as a non-finite value.
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || !std::isfinite(v)) {
    throw ConfigError(key, "expected a finite number, got '" + t + "'");
  }
  return v;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos) {
    throw ConfigError(key, "expected a non-negative integer, got '" + t + "'");
  }
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
  if (errno == ERANGE) throw ConfigError(key, "integer out of range: '" + t + "'");
  return v;
}

std::vector<double> parse_vector(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
  if (out.empty()) throw ConfigError(key, "expected a comma-separated list of numbers");
  return out;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "N",       "alpha", "family",        "curvature", "rule",      "inner_rule", "p",
      "a",       "horizon", "record_stride", "eps_conv",  "eps_unity", "window",     "seed"};
  return keys;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += format_double(v[i]);
  }
  return s;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

FeedbackRule parse_rule(const std::string& spec) {
  const std::string s = trim(spec);
  if (s == "linear") return FeedbackRule::linear();
  if (s == "ratio") return FeedbackRule::ratio();
  const std::string prefix = "symmetrized(";
  if (s.rfind(prefix, 0) == 0 && s.back() == ')') {
    return FeedbackRule::symmetrized(parse_rule(s.substr(prefix.size(), s.size() - prefix.size() - 1)));
  }
  throw ConfigError("rule", "unknown rule '" + s + "' (linear, ratio, symmetrized(<rule>))");
}

RunConfig parse_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("", "line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (!known_keys().count(key)) throw ConfigError(key, "unknown key");
    if (kv.count(key)) throw ConfigError(key, "given more than once");
    kv[key] = trim(line.substr(eq + 1));
  }

  for (const char* required : {"N", "alpha", "family", "rule", "p", "a", "horizon"}) {
    if (!kv.count(required)) throw ConfigError(required, "missing required key");
  }

  RunConfig c;
  c.N = parse_unsigned("N", kv["N"]);
  if (c.N < 1) throw ConfigError("N", "need at least one seller");

  c.alpha = parse_double("alpha", kv["alpha"]);
  try {
    Loyalty check(c.alpha);
  } catch (const DomainError&) {
    throw ConfigError("alpha", "loyalty must satisfy 0 <= alpha < 1, got " + kv["alpha"]);
  }

  c.family = kv["family"];
  if (c.family != "quadratic") throw ConfigError("family", "unknown family '" + c.family + "'");
  if (kv.count("curvature")) c.curvature = parse_double("curvature", kv["curvature"]);
  if (!(c.curvature > 0.0 && c.curvature < 1.0)) throw ConfigError("curvature", "must lie in (0,1)");

  std::string rule = kv["rule"];
  if (rule == "symmetrized") {
    if (!kv.count("inner_rule")) throw ConfigError("inner_rule", "required when rule = symmetrized");
    rule = "symmetrized(" + kv["inner_rule"] + ")";
  } else if (kv.count("inner_rule")) {
    throw ConfigError("inner_rule", "only allowed with rule = symmetrized");
  }
  c.rule = parse_rule(rule).name();

  c.p = parse_vector("p", kv["p"]);
  c.a = parse_vector("a", kv["a"]);
  if (c.p.size() != c.N) {
    throw ConfigError("p", "has " + std::to_string(c.p.size()) + " entries but N = " + std::to_string(c.N));
  }
  if (c.a.size() != c.N) {
    throw ConfigError("a", "has " + std::to_string(c.a.size()) + " entries but N = " + std::to_string(c.N));
  }
  for (double x : c.p) {
    if (!(x >= 0.0 && x <= 1.0)) throw ConfigError("p", "entries must lie in [0,1]");
  }
  for (double x : c.a) {
    if (!(x > 0.0)) throw ConfigError("a", "entries must be positive");
  }

  c.horizon = parse_unsigned("horizon", kv["horizon"]);
  if (kv.count("record_stride")) c.record_stride = parse_unsigned("record_stride", kv["record_stride"]);
  if (c.record_stride < 1) throw ConfigError("record_stride", "must be >= 1");
  if (kv.count("eps_conv")) c.eps_conv = parse_double("eps_conv", kv["eps_conv"]);
  if (!(c.eps_conv > 0.0)) throw ConfigError("eps_conv", "must be positive");
  if (kv.count("eps_unity")) c.eps_unity = parse_double("eps_unity", kv["eps_unity"]);
  if (!(c.eps_unity > 0.0)) throw ConfigError("eps_unity", "must be positive");
  if (kv.count("window")) c.window = parse_unsigned("window", kv["window"]);
  if (c.window < 1) throw ConfigError("window", "must be >= 1");
  if (kv.count("seed")) c.seed = parse_unsigned("seed", kv["seed"]);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string format_config(const RunConfig& c) {
  std::ostringstream os;
  os << "N = " << c.N << "\n"
     << "alpha = " << format_double(c.alpha) << "\n"
     << "family = " << c.family << "\n"
     << "curvature = " << format_double(c.curvature) << "\n"
     << "rule = " << c.rule << "\n"
     << "p = " << join(c.p) << "\n"
     << "a = " << join(c.a) << "\n"
     << "horizon = " << c.horizon << "\n"
     << "record_stride = " << c.record_stride << "\n"
     << "eps_conv = " << format_double(c.eps_conv) << "\n"
     << "eps_unity = " << format_double(c.eps_unity) << "\n"
     << "window = " << c.window << "\n"
     << "seed = " << c.seed << "\n";
  return os.str();
}

SimulationParams RunConfig::params() const {
  return SimulationParams{.family = ContagionFamily::quadratic(curvature),
                          .alpha = Loyalty(alpha),
                          .rule = parse_rule(rule),
                          .horizon = horizon,
                          .record_stride = record_stride};
}

MarketState RunConfig::initial_state() const { return MarketState(p, a); }

ConvergenceOptions RunConfig::convergence() const {
  ConvergenceOptions o;
  o.eps_conv = eps_conv;
  o.eps_unity = eps_unity;
  o.window = window;
  return o;
}

void write_csv(std::ostream& out, const OrbitTrace& trace) {
  if (trace.size() == 0) return;
  const std::size_t n = trace.states.front().size();
  out << "t";
  for (std::size_t i = 1; i <= n; ++i) out << ",p_" << i;
  for (std::size_t i = 1; i <= n; ++i) out << ",a_" << i;
  out << ",pi\n";
  for (std::size_t k = 0; k < trace.size(); ++k) {
    out << trace.times[k];
    for (double x : trace.states[k].p()) out << ',' << format_double(x);
    for (double x : trace.states[k].a()) out << ',' << format_double(x);
    out << ',' << format_double(trace.pi[k]) << '\n';
  }
}

std::string to_csv(const OrbitTrace& trace) {
  std::ostringstream os;
  write_csv(os, trace);
  return os.str();
}

ExportTable read_csv(std::istream& in) {
  ExportTable table;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("csv", "missing header");
  std::vector<std::string> header;
  {
    std::stringstream ss(trim(line));
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  if (header.size() < 4 || header.front() != "t" || header.back() != "pi" || header.size() % 2 != 0) {
    throw ConfigError("csv", "malformed header '" + line + "'");
  }
  table.N = (header.size() - 2) / 2;
  for (std::size_t i = 0; i < table.N; ++i) {
    if (header[1 + i] != "p_" + std::to_string(i + 1) ||
        header[1 + table.N + i] != "a_" + std::to_string(i + 1)) {
      throw ConfigError("csv", "malformed header '" + line + "'");
    }
  }

  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(trim(line));
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != header.size()) throw ConfigError("csv", "row has wrong column count");
    table.times.push_back(parse_unsigned("t", cells[0]));
    std::vector<double> p(table.N);
    std::vector<double> a(table.N);
    for (std::size_t i = 0; i < table.N; ++i) {
      p[i] = parse_double("p", cells[1 + i]);
      a[i] = parse_double("a", cells[1 + table.N + i]);
    }
    table.states.emplace_back(std::move(p), std::move(a));
    table.pi.push_back(parse_double("pi", cells.back()));
  }
  return table;
}

}  // namespace buyerdyn
