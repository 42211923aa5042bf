#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "restaurant/model_core.hpp"
#include "restaurant/observation_belief.hpp"
#include "restaurant/table_dynamics.hpp"

namespace restaurant {

/// Reward of a table that is not being served or approached: a penalty that
/// grows with the wait when the table is unhappy, a bonus when it cheers up.
inline double waiting_reward(const TableState& ts, const TableState& next, const RewardParams& p) {
  const int time = std::min(ts.t_since_request, p.time_cap);
  const int sat_next = next.satisfaction;
  if (sat_next <= 2) return -std::pow(p.penalty_bases[static_cast<std::size_t>(sat_next)], time);
  if (sat_next > ts.satisfaction) return p.improvement_bonus;
  return 0.0;
}

/// Reward table `table` yields for the transition ts -> next under action `a`,
/// with the robot at `robot` before acting.
inline double reward(const TableState& ts, std::size_t table, const Action& a, const TableState& next,
                     const RobotState& robot, const RestaurantConfig& cfg) {
  if (ts.done()) return 0.0;
  const auto& p = cfg.reward;
  auto in_range = [&](int s) { return s >= 0 && s <= cfg.sat_max; };
  if (!in_range(ts.satisfaction) || !in_range(next.satisfaction)) throw ModelError("satisfaction out of range");
  if (a.targets(table) && a.kind == ActionKind::Serve) {
    if (next.satisfaction < ts.satisfaction || next.satisfaction > ts.satisfaction + 1) {
      throw ModelError("infeasible serve transition");
    }
    return p.serve_scale * static_cast<double>(cfg.sat_max - next.satisfaction + 1);
  }
  if (a.targets(table) && a.kind == ActionKind::GoToTable) {
    return -static_cast<double>(manhattan(robot.position, cfg.table_pos(table))) / p.nav_divisor;
  }
  return waiting_reward(ts, next, p);
}

struct RewardedOutcome {
  TableState next;
  double probability = 0.0;
  double reward = 0.0;  // discounted to the start of the action
};

/// Outcomes of one table over a whole action. Unattended tables accrue the
/// waiting reward once per elapsed step, step k weighted by gamma^k.
inline std::vector<RewardedOutcome> rewarded_transitions(const TableState& ts, std::size_t table, const Action& a,
                                                         int duration, const RobotState& robot,
                                                         const RestaurantConfig& cfg) {
  if (duration < 1) throw ModelError("action duration must be at least 1");
  if (ts.done()) return {{ts, 1.0, 0.0}};

  if (a.targets(table) && a.kind == ActionKind::GoToTable) {
    const auto dist = transition_distribution(ts, table, a, duration, cfg);
    const auto& next = dist.entries.front().state;
    return {{next, 1.0, reward(ts, table, a, next, robot, cfg)}};
  }

  const bool serve = a.targets(table) && a.kind == ActionKind::Serve;
  const int waiting_steps = serve ? duration - 1 : duration;
  // Validate the action against this table even when no ticks remain.
  if (!serve) (void)transition_distribution(ts, table, a, 1, cfg);

  const Action waiting_action = serve ? Action::no_op() : a;
  TableState cur = ts;
  double acc = 0.0;
  double discount = 1.0;
  for (int k = 0; k < waiting_steps; ++k) {
    const TableState next = tick_table(cur, cfg);
    acc += discount * reward(cur, table, waiting_action, next, robot, cfg);
    discount *= cfg.gamma;
    cur = next;
  }
  if (!serve) return {{cur, 1.0, acc}};

  std::vector<RewardedOutcome> out;
  for (const auto& e : apply_serve(cur, cfg).entries) {
    out.push_back({e.state, e.probability, acc + discount * reward(cur, table, a, e.state, robot, cfg)});
  }
  return out;
}

/// Expected immediate (discounted-within-duration) reward of `a` under the
/// belief, summed over tables.
inline double expected_reward(const Belief& b, const Action& a, const RestaurantConfig& cfg) {
  if (!is_legal(a, b.robot, b.tables, cfg)) throw ModelError("illegal action " + to_string(a));
  const int duration = action_duration(b.robot, a, cfg);
  double total = 0.0;
  for (std::size_t i = 0; i < b.tables.size(); ++i) {
    if (b.tables[i].done()) continue;
    const auto& sat = b.satisfaction[i];
    for (std::size_t s = 0; s < sat.size(); ++s) {
      if (sat[s] <= 0.0) continue;
      const auto ts = with_satisfaction(b.tables[i], static_cast<int>(s));
      for (const auto& o : rewarded_transitions(ts, i, a, duration, b.robot, cfg)) {
        total += sat[s] * o.probability * o.reward;
      }
    }
  }
  return total;
}

}  // namespace restaurant
