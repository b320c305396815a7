#include <gtest/gtest.h>

#include "ergo/experiments.hpp"

using namespace ergo;

namespace {

std::string field_of(const json& config) {
  try {
    run_experiments(config, {});
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST(Experiments, FormatDoubleRoundTrips) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(-2.5e-7), "-2.5e-07");
}

TEST(Experiments, TableRender) {
  Table t{{"a", "b"}, {{"1", "2"}, {"3", "4"}}};
  EXPECT_EQ(t.render(','), "a,b\n1,2\n3,4\n");
  EXPECT_EQ(t.render('\t'), "a\tb\n1\t2\n3\t4\n");
}

TEST(Experiments, SmokePasses) {
  const auto r = run_experiments(json::parse(R"({"experiments": [{"name": "E0-smoke"}]})"), {});
  ASSERT_EQ(r.reports.size(), 1u);
  EXPECT_TRUE(r.passed);
  EXPECT_TRUE(r.summary.contains("timestamp"));
  EXPECT_FALSE(r.reports[0].summary.contains("timestamp"));
}

TEST(Experiments, ZeroFamilyGivesZeroConstant) {
  const auto r = run_experiments(
      json::parse(R"({"experiments": [{"name": "E1-constant", "families": ["zero"], "K": [4], "trials": 3}]})"), {});
  EXPECT_EQ(r.reports[0].summary["c_hat"].get<double>(), 0.0);
}

TEST(Experiments, ConfigErrorsNameTheField) {
  EXPECT_EQ(field_of(json::parse("{}")), "experiments");
  EXPECT_EQ(field_of(json::parse(R"({"experiments": [{"name": "E7"}]})")), "experiments[0].name");
  EXPECT_EQ(field_of(json::parse(R"({"experiments": [{"name": "E0-smoke"}, {"name": "E0-smoke"}]})")),
            "experiments[1].name");
  EXPECT_EQ(field_of(json::parse(R"({"experiments": [{"name": "E1-constant", "families": ["gaussian", "cauchy"]}]})")),
            "experiments[0].families[1]");
  EXPECT_EQ(field_of(json::parse(R"({"experiments": [{"name": "E4-metastability", "eps": [0.25, 1.5]}]})")),
            "experiments[0].eps[1]");
  EXPECT_EQ(field_of(json::parse(R"({"experiments": [{"name": "E4-metastability", "horizon": 100}]})")),
            "experiments[0].horizon");
  EXPECT_EQ(field_of(json::parse(R"({"experiments": [{"name": "E3-weak-type", "c_hat": "E2"}]})")),
            "experiments[0].c_hat");
  EXPECT_EQ(field_of(json::parse(R"({"experiments": [{"name": "E6-density", "block": {"beta": 4, "gamma": 5}}]})")),
            "experiments[0].block");
}

TEST(Experiments, UnknownSelectionIsAConfigError) {
  const auto config = json::parse(R"({"experiments": [{"name": "E0-smoke"}]})");
  EXPECT_THROW(run_experiments(config, RunOptions{std::nullopt, {"E2-transference"}}), ConfigError);
}

TEST(Experiments, SeedOverrideChangesSamples) {
  const auto config = json::parse(R"({"seed": 1, "experiments": [{"name": "E2-transference", "systems": 5}]})");
  const auto a = run_experiments(config, {});
  const auto b = run_experiments(config, RunOptions{2, {}});
  const auto c = run_experiments(config, RunOptions{1, {}});
  EXPECT_NE(a.reports[0].csv.render(','), b.reports[0].csv.render(','));
  EXPECT_EQ(a.reports[0].csv.render(','), c.reports[0].csv.render(','));
}
