#include <gtest/gtest.h>

#include <set>

#include "restaurant/restaurant.hpp"

namespace restaurant {
namespace {

TEST(ValidateConfig, DerivesTimeMaxFromTableCount) {
  EXPECT_EQ(validate_config(scenarios::paper_3tables()).tmax(), 15);

  RestaurantConfig one;
  one.n_tables = 1;
  EXPECT_EQ(validate_config(one).tmax(), 5);
}

TEST(ValidateConfig, KeepsExplicitTimeMax) {
  EXPECT_EQ(validate_config(scenarios::small()).tmax(), 4);
}

TEST(ValidateConfig, RejectsUnnormalizedPrior) {
  RestaurantConfig c;
  c.satisfaction_prior = {0.5, 0.5, 0, 0, 0, 0.1};
  EXPECT_THROW(validate_config(c), ConfigError);
}

TEST(ValidateConfig, RejectsBadGeometry) {
  RestaurantConfig c = scenarios::paper_3tables();
  c.table_positions[1] = c.table_positions[0];
  EXPECT_THROW(validate_config(c), ConfigError);

  c = scenarios::paper_3tables();
  c.table_positions[2] = {11, 0};
  EXPECT_THROW(validate_config(c), ConfigError);

  c = scenarios::paper_3tables();
  c.robot_start = GridPos{-1, 3};
  EXPECT_THROW(validate_config(c), ConfigError);

  c = scenarios::paper_3tables();
  c.n_tables = 0;
  EXPECT_THROW(validate_config(c), ConfigError);

  c = scenarios::paper_3tables();
  c.n_tables = 2;  // three positions listed
  EXPECT_THROW(validate_config(c), ConfigError);
}

TEST(ValidateConfig, RejectsBadRewardParams) {
  RestaurantConfig c;
  c.reward.penalty_bases = {2.0, 1.0, 1.4};
  EXPECT_THROW(validate_config(c), ConfigError);
  c = {};
  c.reward.time_cap = -1;
  EXPECT_THROW(validate_config(c), ConfigError);
}

TEST(ValidateConfig, DefaultLayoutIsInsideGridAndDistinct) {
  RestaurantConfig c;
  c.n_tables = 6;
  const auto v = validate_config(c);
  std::set<GridPos> seen(v.table_positions.begin(), v.table_positions.end());
  EXPECT_EQ(seen.size(), 6u);
  EXPECT_EQ(seen.count(v.start()), 0u);
  EXPECT_EQ(v.tmax(), 30);
}

TEST(InitialJointState, DefaultIsVerySatisfiedWantMenu) {
  const auto cfg = validate_config(scenarios::paper_3tables());
  Rng rng(1);
  const auto js = initial_joint_state(cfg, rng);
  ASSERT_EQ(js.tables.size(), 3u);
  EXPECT_EQ(js.robot.position, cfg.start());
  EXPECT_EQ(js.clock, 0);
  for (const auto& t : js.tables) {
    EXPECT_EQ(t.satisfaction, 5);
    EXPECT_EQ(t.current_request, request::want_menu);
    EXPECT_EQ(t.hand_raise, 1);
    EXPECT_EQ(t.food + t.water + t.cooking_status, 0);
    EXPECT_EQ(t.t_since_request + t.t_since_served + t.t_since_food_ready, 0);
  }
}

TEST(InitialJointState, PointMassPriorIsDeterministic) {
  RestaurantConfig c = scenarios::paper_3tables();
  c.initial_satisfaction = 3;
  const auto cfg = validate_config(c);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    for (const auto& t : initial_joint_state(cfg, rng).tables) EXPECT_EQ(t.satisfaction, 3);
  }
}

TEST(InitialJointState, SameSeedSameDraws) {
  RestaurantConfig c = scenarios::paper_3tables();
  c.satisfaction_prior = std::vector<double>(6, 1.0 / 6.0);
  const auto cfg = validate_config(c);
  Rng a = make_stream(42, Stream::InitialState);
  Rng b = make_stream(42, Stream::InitialState);
  EXPECT_EQ(initial_joint_state(cfg, a), initial_joint_state(cfg, b));
}

TEST(LegalActions, ServeWhenCoLocated) {
  const auto cfg = validate_config(scenarios::paper_3tables());
  JointState js;
  js.robot.position = cfg.table_pos(0);
  js.tables.assign(3, initial_table_state(5));
  const auto legal = legal_actions(js, cfg);
  EXPECT_NE(std::find(legal.begin(), legal.end(), Action::serve(0)), legal.end());
  EXPECT_EQ(std::find(legal.begin(), legal.end(), Action::go_to(0)), legal.end());
  EXPECT_EQ(std::find(legal.begin(), legal.end(), Action::serve(1)), legal.end());
  EXPECT_NE(std::find(legal.begin(), legal.end(), Action::go_to(1)), legal.end());
}

// Enumerates every (request, cooking_status) pair against the gating rule.
TEST(LegalActions, FoodGatingRuleTable) {
  const auto cfg = validate_config(scenarios::paper_3tables());
  for (int req = 1; req <= 8; ++req) {
    for (int cook = 0; cook <= 2; ++cook) {
      JointState js;
      js.robot.position = cfg.table_pos(0);
      js.tables.assign(3, initial_table_state(5));
      js.tables[0].current_request = req;
      js.tables[0].cooking_status = cook;
      const auto legal = legal_actions(js, cfg);
      auto has = [&](const Action& a) { return std::find(legal.begin(), legal.end(), a) != legal.end(); };
      const bool pending = req == 3 && cook < 2;
      EXPECT_EQ(has(Action::serve(0)), !pending) << req << "," << cook;
      EXPECT_EQ(has(Action::food_not_ready(0)), pending) << req << "," << cook;
      EXPECT_TRUE(has(Action::will_return(0)));
      EXPECT_TRUE(has(Action::no_op()));
    }
  }
}

TEST(LegalActions, AllDoneLeavesOnlyNoOp) {
  const auto cfg = validate_config(scenarios::paper_3tables());
  JointState js;
  js.robot.position = cfg.start();
  js.tables.assign(3, initial_table_state(2));
  for (auto& t : js.tables) t.hand_raise = 0;
  const auto legal = legal_actions(js, cfg);
  ASSERT_EQ(legal.size(), 1u);
  EXPECT_TRUE(legal.front().is_no_op());
}

TEST(LegalActions, SortedAndDisjointAcrossTables) {
  const auto cfg = validate_config(scenarios::paper_3tables());
  Rng rng(5);
  for (int k = 0; k < 200; ++k) {
    const auto js = verify::random_reachable_state(cfg, rng, 80);
    const auto legal = legal_actions(js, cfg);
    ASSERT_FALSE(legal.empty());
    EXPECT_TRUE(std::is_sorted(legal.begin(), legal.end()));
    EXPECT_TRUE(legal.back().is_no_op());
    for (std::size_t a = 0; a < legal.size(); ++a) {
      for (std::size_t b = a + 1; b < legal.size(); ++b) EXPECT_FALSE(legal[a] == legal[b]);
    }
  }
}

TEST(Action, OrderIsKindThenTable) {
  EXPECT_LT(Action::serve(2), Action::go_to(0));
  EXPECT_LT(Action::go_to(0), Action::go_to(1));
  EXPECT_LT(Action::will_return(5), Action::no_op());
  EXPECT_FALSE(Action::no_op() < Action::no_op());
}

}  // namespace
}  // namespace restaurant
