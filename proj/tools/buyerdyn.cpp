// buyerdyn: command-line front end.
//
//   buyerdyn simulate --config run.cfg [--out prefix]
//   buyerdyn verify-conditions --rule linear [--grid 128] [--samples 10000] [--seed S] [--out file]
//   buyerdyn figure fig2 --out dir
//   buyerdyn basin-scan --config run.cfg --vary p2 --lo 0.5 --hi 0.7 [--tol 1e-6] [--out file]
//
// Errors are reported on stderr as a single line "error: <KIND>: <message>".

#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "buyerdyn/commands.hpp"
#include "buyerdyn/errors.hpp"

using namespace buyerdyn;

namespace {

int fail(const char* kind, const std::string& message, int code) {
  std::string line = message;
  for (char& c : line) {
    if (c == '\n') c = ' ';
  }
  std::cerr << "error: " << kind << ": " << line << "\n";
  return code;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-time buyer/seller attractiveness dynamics"};
  app.require_subcommand(1);

  std::string config_path;
  std::string sim_prefix;
  std::string fig_dir;
  std::string out;

  auto* sim = app.add_subcommand("simulate", "Iterate one orbit and write <prefix>.csv and <prefix>.summary");
  sim->add_option("--config", config_path, "key = value run configuration")->required();
  sim->add_option("--out", sim_prefix, "output prefix")->default_val("run");

  std::string rule_spec;
  ConditionOptions cond;
  auto* verify = app.add_subcommand("verify-conditions", "Check the standing assumptions on a feedback rule");
  verify->add_option("--rule", rule_spec, "linear | ratio | symmetrized(<rule>)")->required();
  verify->add_option("--grid", cond.sign_grid, "sign-condition grid size")->check(CLI::Range(16, 1 << 16));
  verify->add_option("--samples", cond.samples, "concavity samples")->check(CLI::Range(1000, 1 << 24));
  verify->add_option("--N", cond.N, "market size for the concavity check")->check(CLI::Range(2, 1 << 10));
  verify->add_option("--seed", cond.seed, "random seed");
  verify->add_option("--out", out, "write the JSON report here instead of stdout");

  std::string figure_id;
  auto* fig = app.add_subcommand("figure", "Reproduce a reference figure run");
  fig->add_option("id", figure_id, "fig2 | fig3 | fig4a | fig4b")->required();
  fig->add_option("--out", fig_dir, "output directory")->default_val("figures");

  std::string vary;
  double lo = 0.0;
  double hi = 0.0;
  double tol = 1e-6;
  auto* basin = app.add_subcommand("basin-scan", "Bisect one initial coordinate for a basin boundary");
  basin->add_option("--config", config_path, "base configuration")->required();
  basin->add_option("--vary", vary, "coordinate such as p2 or a1")->required();
  basin->add_option("--lo", lo, "lower end of the bracket")->required();
  basin->add_option("--hi", hi, "upper end of the bracket")->required();
  basin->add_option("--tol", tol, "bracket width at which to stop");
  basin->add_option("--out", out, "write the JSON report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("USAGE", e.what(), kExitUsage);
  }

  try {
    if (*sim) {
      const SimulationOutput r = run_simulate(load_config(config_path), sim_prefix);
      std::cout << (r.verdict ? r.verdict->label() : "insufficient horizon") << "\n";
      return kExitOk;
    }
    if (*verify) {
      const FeedbackRule rule = parse_rule(rule_spec);
      emit(condition_report_json(verify_conditions(rule, cond), cond), out);
      return kExitOk;
    }
    if (*fig) {
      const FigureResult r = run_figure(figure_id, fig_dir);
      for (const auto& c : r.checks) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << (c.informational ? "(info) " : "") << c.name;
        if (!c.detail.empty()) std::cout << "  [" << c.detail << "]";
        std::cout << "\n";
      }
      return r.passed() ? kExitOk : kExitAssertion;
    }
    if (*basin) {
      const RunConfig cfg = load_config(config_path);
      emit(basin_scan_json(cfg, basin_scan(cfg, Coordinate::parse(vary), lo, hi, tol)), out);
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    return fail("CONFIG", e.what(), kExitUsage);
  } catch (const DynamicsError& e) {
    return fail("DYNAMICS", e.what(), kExitDomain);
  } catch (const DomainError& e) {
    return fail("DOMAIN", e.what(), kExitDomain);
  } catch (const std::invalid_argument& e) {
    return fail("USAGE", e.what(), kExitUsage);
  } catch (const std::exception& e) {
    return fail("INTERNAL", e.what(), kExitAssertion);
  }
  return kExitOk;
}
