#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>
#include <string>

#include <json.hpp>

#include "buyerdyn/commands.hpp"
#include "buyerdyn/errors.hpp"
#include "buyerdyn/io.hpp"

using namespace buyerdyn;

namespace {

const std::string kMinimal = R"(# two sellers
N = 2
alpha = 0.9
family = quadratic
rule = linear
p = 0.981, 0.8
a = 2.02, 2
horizon = 1000
)";

std::string config_error_key(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<none>";
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
  text.replace(text.find(from), from.size(), to);
  return text;
}

}  // namespace

TEST_CASE("minimal config and defaults") {
  const RunConfig c = parse_config(kMinimal);
  CHECK(c.N == 2);
  CHECK(c.alpha == 0.9);
  CHECK(c.curvature == 0.9);
  CHECK(c.rule == "linear");
  CHECK(c.horizon == 1000);
  CHECK(c.record_stride == 1);
  CHECK(c.eps_conv == 1e-10);
  CHECK(c.eps_unity == 1e-3);
  CHECK(c.window == 100);
  CHECK(c.p == std::vector<double>{0.981, 0.8});
}

TEST_CASE("config errors name the key") {
  CHECK(config_error_key(replace(kMinimal, "alpha = 0.9", "alpha = 1")) == "alpha");
  CHECK(config_error_key(replace(kMinimal, "p = 0.981, 0.8", "p = 0.1, 0.2, 0.3")) == "p");
  CHECK(config_error_key(replace(kMinimal, "a = 2.02, 2", "a = 2.02, 0")) == "a");
  CHECK(config_error_key(replace(kMinimal, "rule = linear", "rule = cubic")) == "rule");
  CHECK(config_error_key(replace(kMinimal, "family = quadratic", "family = logistic")) == "family");
  CHECK(config_error_key(replace(kMinimal, "horizon = 1000", "horizon = -3")) == "horizon");
  CHECK(config_error_key(replace(kMinimal, "horizon = 1000", "")) == "horizon");
  CHECK(config_error_key(kMinimal + "colour = red\n") == "colour");
  CHECK(config_error_key(kMinimal + "N = 2\n") == "N");
  CHECK(config_error_key(kMinimal + "inner_rule = ratio\n") == "inner_rule");
  CHECK(config_error_key(kMinimal + "curvature = 1\n") == "curvature");
  CHECK(config_error_key(kMinimal + "alpha\n") == "");
}

TEST_CASE("symmetrized rule in configs") {
  const RunConfig c = parse_config(replace(kMinimal, "rule = linear", "rule = symmetrized\ninner_rule = ratio"));
  CHECK(c.rule == "symmetrized(ratio)");
  CHECK(parse_config(replace(kMinimal, "rule = linear", "rule = symmetrized(linear)")).rule == "symmetrized(linear)");
  CHECK(config_error_key(replace(kMinimal, "rule = linear", "rule = symmetrized")) == "inner_rule");
  CHECK(parse_rule("symmetrized(symmetrized(ratio))").kind() == RuleKind::Symmetrized);
}

TEST_CASE("config round trip") {
  RunConfig c = parse_config(kMinimal);
  c.p = {0.1 + 0.2, 1.0 / 3.0};
  c.eps_unity = 2.5e-4;
  const RunConfig back = parse_config(format_config(c));
  CHECK(back.p == c.p);
  CHECK(back.a == c.a);
  CHECK(back.eps_unity == c.eps_unity);
  CHECK(format_config(back) == format_config(c));
}

TEST_CASE("CSV export round trip") {
  RunConfig c = parse_config(kMinimal);
  c.horizon = 120;
  c.record_stride = 7;
  const SimulationOutput out = simulate(c);
  std::istringstream in(out.csv);
  const ExportTable table = read_csv(in);
  CHECK(table.N == 2);
  CHECK(table.times == out.trace.times);
  REQUIRE(table.states.size() == out.trace.states.size());
  for (std::size_t k = 0; k < table.states.size(); ++k) {
    CHECK(table.states[k] == out.trace.states[k]);
    CHECK(table.pi[k] == out.trace.pi[k]);
  }
  CHECK(out.csv.rfind("t,p_1,p_2,a_1,a_2,pi\n", 0) == 0);

  std::istringstream bad("t,p_1,a_1\n");
  CHECK_THROWS_AS(read_csv(bad), ConfigError);
}

TEST_CASE("horizon zero gives one row") {
  const SimulationOutput out = simulate(parse_config(replace(kMinimal, "horizon = 1000", "horizon = 0")));
  CHECK(out.trace.size() == 1);
  CHECK_FALSE(out.verdict.has_value());
  const auto summary = nlohmann::json::parse(out.summary);
  CHECK(summary["verdict"].is_null());
}

TEST_CASE("simulation summaries") {
  const auto fig2 = nlohmann::json::parse(simulate(figure2_config()).summary);
  CHECK(fig2["verdict"]["label"] == "Converged(AllOne)");
  CHECK(fig2["unity_crossings"]["counts"] == nlohmann::json::array({2, 0}));
  CHECK(fig2["product_audit"]["non_increasing"] == true);
  const auto fig3 = nlohmann::json::parse(simulate(figure3_config()).summary);
  CHECK(fig3["verdict"]["label"] == "Converged(AllOne)");
  CHECK(fig3["product_audit"]["non_decreasing"] == true);
}

TEST_CASE("simulation bytes are deterministic") {
  const RunConfig c = figure3_config();
  const SimulationOutput a = simulate(c);
  const SimulationOutput b = simulate(c);
  CHECK(a.csv == b.csv);
  CHECK(a.summary == b.summary);
}

TEST_CASE("domain failures surface with a time index") {
  RunConfig c = parse_config(replace(kMinimal, "rule = linear", "rule = ratio"));
  c.p = {0.0, 0.5};
  CHECK_THROWS_AS(simulate(c), DynamicsError);
}

TEST_CASE("figures") {
  for (const auto& id : figure_ids()) {
    const FigureResult r = figure(id);
    CHECK_MESSAGE(r.passed(), id);
    CHECK_FALSE(r.summary.empty());
  }
  CHECK_FALSE(figure("fig4b").normative);
  CHECK(figure4b_config().N == 3);
  CHECK_THROWS_AS(figure("fig9"), std::invalid_argument);
}

TEST_CASE("condition report JSON") {
  const ConditionOptions opts;
  const auto lin = nlohmann::json::parse(condition_report_json(verify_conditions(FeedbackRule::linear(), opts), opts));
  CHECK(lin["reactivity"]["bounded"] == true);
  CHECK(lin["sign_condition"]["witness_count"] == 0);
  const auto rat = nlohmann::json::parse(condition_report_json(verify_conditions(FeedbackRule::ratio(), opts), opts));
  CHECK(rat["reactivity"]["K"] == "unbounded");
}
