#include <gtest/gtest.h>

#include <cmath>

#include "restaurant/restaurant.hpp"

namespace restaurant {
namespace {

RestaurantConfig three_tables() { return validate_config(scenarios::paper_3tables()); }

TEST(Reward, SpotTable) {
  const auto cases = verify::reward_spot_table(RewardParams{});
  ASSERT_EQ(cases.size(), 5u);
  for (const auto& c : cases) EXPECT_NEAR(c.actual, c.expected, 1e-9) << c.label;
  EXPECT_NEAR(cases[2].actual, -std::pow(1.7, 3), 1e-12);
}

TEST(Reward, TamperedPenaltyBaseBreaksSpotTable) {
  RewardParams p;
  p.penalty_bases = {2.0, 1.8, 1.4};
  EXPECT_FALSE(verify::check_reward_spot_table(p).passed);
}

TEST(Reward, ServeDecreasesStrictlyInNextSatisfaction) {
  const auto cfg = three_tables();
  const RobotState robot{cfg.table_pos(0)};
  double prev = std::numeric_limits<double>::infinity();
  for (int s = 0; s <= cfg.sat_max; ++s) {
    const auto before = initial_table_state(std::max(0, s - 1));
    const auto after = initial_table_state(s);
    const double r = reward(before, 0, Action::serve(0), after, robot, cfg);
    EXPECT_DOUBLE_EQ(r, 5.0 * (cfg.sat_max - s + 1));
    EXPECT_LT(r, prev);
    prev = r;
  }
}

TEST(Reward, PenaltyGrowsWithWaitAndSeverityAndIsCapped) {
  const auto cfg = three_tables();
  const RobotState robot{cfg.start()};
  for (int sat = 0; sat <= 2; ++sat) {
    double prev = 0.0;
    for (int t = 0; t <= 15; ++t) {
      TableState s = initial_table_state(sat);
      s.t_since_request = t;
      const double r = reward(s, 0, Action::no_op(), s, robot, cfg);
      EXPECT_LE(r, prev);
      if (t >= 10) {
        TableState capped = s;
        capped.t_since_request = 10;
        EXPECT_DOUBLE_EQ(r, reward(capped, 0, Action::no_op(), capped, robot, cfg));
      }
      prev = r;
      if (sat > 0) {
        TableState worse = initial_table_state(sat - 1);
        worse.t_since_request = t;
        EXPECT_LE(reward(worse, 0, Action::no_op(), worse, robot, cfg), r);
      }
    }
  }
}

TEST(Reward, CommunicationUsesWaitingCase) {
  const auto cfg = three_tables();
  TableState s = initial_table_state(1);
  s.t_since_request = 2;
  EXPECT_NEAR(reward(s, 0, Action::will_return(0), s, RobotState{cfg.start()}, cfg), -1.7 * 1.7, 1e-12);
}

TEST(Reward, DoneTableEarnsNothing) {
  const auto cfg = three_tables();
  TableState s = initial_table_state(0);
  s.hand_raise = 0;
  s.t_since_request = 9;
  EXPECT_EQ(reward(s, 0, Action::no_op(), s, RobotState{cfg.start()}, cfg), 0.0);
}

TEST(RewardedTransitions, NavigationAccruesPerStepForOthers) {
  const auto cfg = three_tables();
  TableState s = initial_table_state(1);
  s.t_since_request = 13;
  const RobotState robot{{0, 0}};
  const auto out = rewarded_transitions(s, 1, Action::go_to(0), 3, robot, cfg);
  ASSERT_EQ(out.size(), 1u);
  // Waits after each step: 14, 15, 15 (exponent capped at 10). The decay
  // crossing at 15 drops satisfaction to 0 on the second step.
  const double expected = -std::pow(1.7, 10) - 0.95 * std::pow(2.0, 10) - 0.95 * 0.95 * std::pow(2.0, 10);
  EXPECT_NEAR(out[0].reward, expected, 1e-9);
  EXPECT_EQ(out[0].next.t_since_request, 15);
}

TEST(ExpectedReward, PointMassMatchesReward) {
  const auto cfg = three_tables();
  Belief b = belief_init(cfg);
  const auto a = Action::go_to(1);
  const int d = action_duration(b.robot, a, cfg);
  double direct = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    for (const auto& o : rewarded_transitions(with_satisfaction(b.tables[i], 5), i, a, d, b.robot, cfg)) direct += o.reward;
  }
  EXPECT_NEAR(expected_reward(b, a, cfg), direct, 1e-12);
  EXPECT_NEAR(expected_reward(b, a, cfg), -6.0 / 3.0, 1e-12);  // others are content
}

TEST(ExpectedReward, ServeAtThreeIsTwelve) {
  auto c = scenarios::small();
  c.sat_max = 5;
  c.time_max = 15;
  c.satisfaction_prior.clear();
  auto cfg = validate_config(c);
  Belief b = belief_init(cfg);
  b.robot.position = cfg.table_pos(0);
  b.satisfaction[0] = {0, 0, 0, 1, 0, 0};
  // Oracle: 0.6 * 5*(5-4+1) + 0.4 * 5*(5-3+1).
  EXPECT_NEAR(expected_reward(b, Action::serve(0), cfg), 0.6 * 10 + 0.4 * 15, 1e-12);
  EXPECT_NEAR(expected_reward(b, Action::serve(0), cfg), 12.0, 1e-12);
}

TEST(ExpectedReward, AllDoneIsZero) {
  const auto cfg = three_tables();
  Belief b = belief_init(cfg);
  for (auto& t : b.tables) t.hand_raise = 0;
  EXPECT_EQ(expected_reward(b, Action::no_op(), cfg), 0.0);
}

TEST(ExpectedReward, IllegalActionThrows) {
  const auto cfg = three_tables();
  EXPECT_THROW(expected_reward(belief_init(cfg), Action::serve(0), cfg), ModelError);
}

// Brute force: weight the joint enumeration of every support state.
TEST(ExpectedReward, MatchesJointEnumerationOnSmallInstances) {
  RestaurantConfig c = scenarios::small();
  c.n_tables = 2;
  c.grid_width = c.grid_height = 4;
  c.table_positions = {{2, 2}, {0, 3}};
  const auto cfg = validate_config(c);
  Rng rng(3);
  for (int k = 0; k < 200; ++k) {
    const auto js = verify::random_reachable_state(cfg, rng, 25);
    Belief b;
    b.robot = js.robot;
    b.tables = observe_all(js);
    for (int i = 0; i < 2; ++i) {
      std::vector<double> v{uniform01(rng), uniform01(rng), uniform01(rng)};
      const double t = v[0] + v[1] + v[2];
      for (auto& x : v) x /= t;
      b.satisfaction.push_back(v);
    }
    for (const auto& a : legal_actions(b, cfg)) {
      double oracle = 0.0;
      for (int s0 = 0; s0 <= 2; ++s0) {
        for (int s1 = 0; s1 <= 2; ++s1) {
          JointState j = js;
          j.tables[0] = with_satisfaction(b.tables[0], s0);
          j.tables[1] = with_satisfaction(b.tables[1], s1);
          const double w = b.satisfaction[0][s0] * b.satisfaction[1][s1];
          for (const auto& o : enumerate_joint_transitions(j, a, cfg)) oracle += w * o.probability * o.reward;
        }
      }
      EXPECT_NEAR(expected_reward(b, a, cfg), oracle, 1e-9);
    }
  }
}

}  // namespace
}  // namespace restaurant
