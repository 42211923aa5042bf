#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "restaurant/restaurant.hpp"

namespace restaurant {
namespace {

TEST(ConfigJson, RoundTripsEveryPreset) {
  for (const auto& name : scenarios::names()) {
    const auto c = scenarios::by_name(name);
    const auto back = config_from_json(config_to_json(c));
    EXPECT_EQ(config_to_json(back), config_to_json(c)) << name;
  }
}

TEST(ConfigJson, RoundTripsValidatedConfig) {
  const auto c = validate_config(scenarios::paper_3tables());
  EXPECT_EQ(config_to_json(validate_config(config_from_json(config_to_json(c)))), config_to_json(c));
}

TEST(ConfigJson, AbsentAndNullKeysKeepDefaults) {
  const auto c = config_from_json(json::parse(R"({"n_tables": 2, "time_max": null})"));
  EXPECT_EQ(c.n_tables, 2u);
  EXPECT_FALSE(c.time_max.has_value());
  EXPECT_EQ(c.sat_max, RestaurantConfig{}.sat_max);
}

TEST(ConfigJson, RejectsUnknownKeys) {
  EXPECT_THROW(config_from_json(json::parse(R"({"n_table": 2})")), ConfigError);
  EXPECT_THROW(config_from_json(json::parse(R"({"reward": {"bonus": 1}})")), ConfigError);
  EXPECT_THROW(config_from_json(json::parse("[1, 2]")), ConfigError);
}

TEST(ConfigJson, RejectsBadTypes) {
  EXPECT_THROW(config_from_json(json::parse(R"({"sat_max": "five"})")), ConfigError);
  EXPECT_THROW(config_from_json(json::parse(R"({"robot_start": [1]})")), ConfigError);
  EXPECT_THROW(config_from_json(json::parse(R"({"table_positions": [[1, 2.5]]})")), ConfigError);
}

TEST(ConfigJson, MissingFileNamesThePath) {
  try {
    load_json_file("/nonexistent/dir/cfg.json");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/cfg.json"), std::string::npos);
  }
}

TEST(ConfigJson, MalformedFileIsConfigError) {
  const std::string path = ::testing::TempDir() + "malformed.json";
  std::ofstream(path) << "{ not json";
  EXPECT_THROW(load_json_file(path), ConfigError);
  std::remove(path.c_str());
}

TEST(Override, SetsTopLevelAndNestedKeys) {
  json doc = config_to_json(scenarios::paper_3tables());
  apply_override(doc, "horizon=0");
  apply_override(doc, "reward.penalty_bases=[2,1.8,1.4]");
  apply_override(doc, "robot_start=[0,0]");
  const auto c = config_from_json(doc);
  EXPECT_EQ(c.horizon, 0);
  EXPECT_EQ(c.reward.penalty_bases, (std::vector<double>{2, 1.8, 1.4}));
  EXPECT_EQ(*c.robot_start, GridPos(0, 0));
}

TEST(Override, BadAssignments) {
  json doc = config_to_json(scenarios::small());
  EXPECT_THROW(apply_override(doc, "horizon"), ConfigError);
  EXPECT_THROW(apply_override(doc, "=3"), ConfigError);
  apply_override(doc, "no_such_key=1");
  EXPECT_THROW(config_from_json(doc), ConfigError);
  json doc2 = config_to_json(scenarios::small());
  apply_override(doc2, "sat_max=lots");  // falls back to a string, then fails the type check
  EXPECT_THROW(config_from_json(doc2), ConfigError);
}

TEST(PolicyParsing, NamesAndParameters) {
  EXPECT_EQ(parse_policy("random").kind, PolicyKind::Random);
  EXPECT_EQ(parse_policy("fcfs").kind, PolicyKind::FCFS);
  EXPECT_EQ(parse_policy("greedy").kind, PolicyKind::Greedy);
  const auto m = parse_policy("mcts:budget=200,c=3.5,depth=6,rollout=fcfs");
  EXPECT_EQ(m.kind, PolicyKind::MCTS);
  EXPECT_EQ(m.mcts.budget, 200);
  EXPECT_DOUBLE_EQ(m.mcts.exploration, 3.5);
  EXPECT_EQ(m.mcts.max_depth, 6);
  EXPECT_EQ(m.mcts.rollout, RolloutKind::FCFS);
  EXPECT_EQ(parse_policy("expectimax:depth=4").depth, 4);
}

TEST(PolicyParsing, RoundTripsThroughToString) {
  for (const char* text : {"random", "greedy", "mcts:budget=10,c=2,depth=3,rollout=random", "expectimax:depth=2"}) {
    EXPECT_EQ(to_string(parse_policy(text)), text);
  }
}

TEST(PolicyParsing, Errors) {
  EXPECT_THROW(parse_policy("oracle"), ConfigError);
  EXPECT_THROW(parse_policy("mcts:budget=0"), ConfigError);
  EXPECT_THROW(parse_policy("mcts:budget=x"), ConfigError);
  EXPECT_THROW(parse_policy("mcts:width=3"), ConfigError);
  EXPECT_THROW(parse_policy("greedy:depth=2"), ConfigError);
  EXPECT_THROW(parse_policy("mcts:rollout=smart"), ConfigError);
  EXPECT_THROW(parse_policy("expectimax:depth"), ConfigError);
}

TEST(TraceJsonl, HeaderStepsAndSummary) {
  const auto cfg = validate_config(scenarios::small());
  const auto trace = run_episode(parse_policy("fcfs"), cfg, 1);
  std::ostringstream os;
  write_trace_jsonl(os, trace);
  std::istringstream in(os.str());
  std::string line;
  std::vector<json> lines;
  while (std::getline(in, line)) lines.push_back(json::parse(line));
  ASSERT_EQ(lines.size(), trace.steps.size() + 2);
  EXPECT_EQ(lines.front()["record"], "header");
  EXPECT_EQ(lines.front()["schema_version"], kTraceSchemaVersion);
  EXPECT_EQ(config_from_json(lines.front()["config"]).sat_max, cfg.sat_max);
  EXPECT_EQ(lines[1]["record"], "step");
  EXPECT_EQ(lines.back()["record"], "summary");
  EXPECT_EQ(lines.back()["discounted_return"].get<double>(), trace.discounted_return);
}

TEST(MetricsCsv, RowMatchesHeaderWidth) {
  const auto cfg = validate_config(scenarios::two_tables());
  const auto m = evaluate(parse_policy("greedy"), cfg, 3, 0);
  const auto row = metrics_csv_row("greedy", 0, m);
  const auto header = metrics_csv_header();
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), std::count(header.begin(), header.end(), ','));
  EXPECT_EQ(row.rfind("1,greedy,3,0,", 0), 0u);
}

}  // namespace
}  // namespace restaurant
