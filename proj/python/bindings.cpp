#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "buyerdyn/commands.hpp"
#include "buyerdyn/errors.hpp"

namespace py = pybind11;
using namespace buyerdyn;

namespace {

FeedbackRule rule_from(const std::string& spec) { return parse_rule(spec); }

SimulationParams make_params(double alpha, const std::string& rule, std::size_t horizon, double curvature,
                             std::size_t record_stride) {
  return SimulationParams{.family = ContagionFamily::quadratic(curvature),
                          .alpha = Loyalty(alpha),
                          .rule = rule_from(rule),
                          .horizon = horizon,
                          .record_stride = record_stride};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Buyer/seller attractiveness dynamics: orbits, audits and experiments.";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DynamicsError>(m, "DynamicsError", PyExc_RuntimeError);
  py::register_exception<ConsistencyError>(m, "ConsistencyError", PyExc_ArithmeticError);

  py::class_<MarketState>(m, "MarketState")
      .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("p"), py::arg("a"))
      .def_property_readonly("p", &MarketState::p)
      .def_property_readonly("a", &MarketState::a)
      .def("__len__", &MarketState::size)
      .def("__eq__", [](const MarketState& x, const MarketState& y) { return x == y; })
      .def("__repr__", [](const MarketState& s) {
        return "MarketState(p=" + py::repr(py::cast(s.p())).cast<std::string>() +
               ", a=" + py::repr(py::cast(s.a())).cast<std::string>() + ")";
      });

  py::enum_<FixedPointKind>(m, "FixedPointKind")
      .value("AllZero", FixedPointKind::AllZero)
      .value("AllOne", FixedPointKind::AllOne)
      .value("NeutralA", FixedPointKind::NeutralA)
      .value("Ghost", FixedPointKind::Ghost)
      .value("NotFixed", FixedPointKind::NotFixed);

  m.def("eval_contagion",
        [](double a, double x, double curvature) { return eval_contagion(ContagionFamily::quadratic(curvature), a, x); },
        py::arg("a"), py::arg("x"), py::arg("curvature") = 0.9);
  m.def("eval_blended",
        [](double alpha, double a, double x, double curvature) {
          return eval_blended(ContagionFamily::quadratic(curvature), Loyalty(alpha), a, x);
        },
        py::arg("alpha"), py::arg("a"), py::arg("x"), py::arg("curvature") = 0.9);
  m.def("eval_feedback", [](const std::string& rule, double p, double q) { return eval_feedback(rule_from(rule), p, q); },
        py::arg("rule"), py::arg("p"), py::arg("q"));

  m.def("step",
        [](const MarketState& s, double alpha, const std::string& rule, double curvature) {
          return step(make_params(alpha, rule, 1, curvature, 1), s);
        },
        py::arg("state"), py::arg("alpha"), py::arg("rule") = "linear", py::arg("curvature") = 0.9);
  m.def("step_inverse",
        [](const MarketState& s, double alpha, const std::string& rule, double curvature) {
          return step_inverse(make_params(alpha, rule, 1, curvature, 1), s);
        },
        py::arg("state"), py::arg("alpha"), py::arg("rule") = "linear", py::arg("curvature") = 0.9);

  m.def("iterate_orbit",
        [](const MarketState& s, double alpha, const std::string& rule, std::size_t horizon, double curvature,
           std::size_t record_stride) {
          const OrbitTrace tr = iterate_orbit(make_params(alpha, rule, horizon, curvature, record_stride), s);
          py::dict d;
          d["times"] = tr.times;
          d["states"] = tr.states;
          d["pi"] = tr.pi;
          d["unity_crossings"] = tr.unity_crossings;
          return d;
        },
        py::arg("state"), py::arg("alpha"), py::arg("rule") = "linear", py::arg("horizon") = 1000,
        py::arg("curvature") = 0.9, py::arg("record_stride") = 1);

  m.def("classify_fixed_point",
        [](const MarketState& s, double alpha, const std::string& rule, double tol) {
          return classify_fixed_point(make_params(alpha, rule, 1, 0.9, 1), s, tol);
        },
        py::arg("state"), py::arg("alpha"), py::arg("rule") = "linear", py::arg("tol") = 1e-6);

  m.def("classify_orbit",
        [](const MarketState& s, double alpha, const std::string& rule, std::size_t horizon) {
          return classify_orbit(make_params(alpha, rule, horizon, 0.9, 1), s).label();
        },
        py::arg("state"), py::arg("alpha"), py::arg("rule") = "linear", py::arg("horizon") = 1000);

  m.def("simulate",
        [](const std::string& config_text) {
          const SimulationOutput out = simulate(parse_config(config_text));
          return py::make_tuple(out.csv, out.summary);
        },
        py::arg("config_text"), "Run a key = value configuration; returns (csv, summary_json).");

  m.def("verify_conditions",
        [](const std::string& rule, int grid, int samples, std::uint64_t seed) {
          ConditionOptions o;
          o.sign_grid = grid;
          o.samples = samples;
          o.seed = seed;
          return condition_report_json(verify_conditions(rule_from(rule), o), o);
        },
        py::arg("rule"), py::arg("grid") = 128, py::arg("samples") = 10000, py::arg("seed") = kDefaultSeed);

  m.def("figure",
        [](const std::string& id) {
          const FigureResult r = figure(id);
          return py::make_tuple(r.passed(), r.summary);
        },
        py::arg("id"));
  m.def("figure_ids", &figure_ids);

  m.def("basin_scan",
        [](const std::string& config_text, const std::string& vary, double lo, double hi, double tol) {
          const RunConfig c = parse_config(config_text);
          return basin_scan_json(c, basin_scan(c, Coordinate::parse(vary), lo, hi, tol));
        },
        py::arg("config_text"), py::arg("vary"), py::arg("lo"), py::arg("hi"), py::arg("tol") = 1e-6);
}
