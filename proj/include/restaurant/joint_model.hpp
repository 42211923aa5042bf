#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "restaurant/model_core.hpp"
#include "restaurant/observation_belief.hpp"
#include "restaurant/reward.hpp"
#include "restaurant/rng.hpp"
#include "restaurant/table_dynamics.hpp"

namespace restaurant {

struct JointStepResult {
  JointState next;
  std::vector<TableObservation> obs;
  double reward = 0.0;  // sum of table_rewards
  std::vector<double> table_rewards;
  int duration = 1;
};

namespace detail {

inline RewardedOutcome pick(const std::vector<RewardedOutcome>& outcomes, Rng& rng) {
  if (outcomes.size() == 1) return outcomes.front();
  double probs[8];
  for (std::size_t k = 0; k < outcomes.size(); ++k) probs[k] = outcomes[k].probability;
  return outcomes[sample_categorical(rng, std::span<const double>(probs, outcomes.size()))];
}

}  // namespace detail

/// Executes `a` on the combined model: the robot moves, the targeted table
/// responds to the action and every other table evolves as under NoOp for
/// the action's duration. Returns the total reward of the step.
inline double advance_joint(JointState& js, const Action& a, int duration, const RestaurantConfig& cfg, Rng& rng,
                            std::vector<double>* table_rewards = nullptr) {
  double total = 0.0;
  if (table_rewards) table_rewards->assign(js.tables.size(), 0.0);
  for (std::size_t i = 0; i < js.tables.size(); ++i) {
    auto& t = js.tables[i];
    if (t.done()) continue;
    const auto outcome = detail::pick(rewarded_transitions(t, i, a, duration, js.robot, cfg), rng);
    t = outcome.next;
    total += outcome.reward;
    if (table_rewards) (*table_rewards)[i] = outcome.reward;
  }
  if (a.kind == ActionKind::GoToTable) js.robot.position = cfg.table_pos(a.table);
  js.clock += duration;
  return total;
}

inline JointStepResult step_joint(const JointState& js, const Action& a, const RestaurantConfig& cfg, Rng& rng) {
  if (!is_legal(a, js.robot, js.tables, cfg)) throw ModelError("illegal action " + to_string(a));
  JointStepResult res;
  res.duration = action_duration(js.robot, a, cfg);
  res.next = js;
  res.reward = advance_joint(res.next, a, res.duration, cfg, rng, &res.table_rewards);
  res.obs = observe_all(res.next);
  return res;
}

struct JointOutcome {
  JointState next;
  double probability = 0.0;
  double reward = 0.0;
};

/// Exact joint successor distribution: the product of the independent
/// per-table distributions.
inline std::vector<JointOutcome> enumerate_joint_transitions(const JointState& js, const Action& a,
                                                             const RestaurantConfig& cfg) {
  if (!is_legal(a, js.robot, js.tables, cfg)) throw ModelError("illegal action " + to_string(a));
  const int duration = action_duration(js.robot, a, cfg);

  std::vector<std::vector<RewardedOutcome>> factors;
  factors.reserve(js.tables.size());
  std::size_t support = 1;
  for (std::size_t i = 0; i < js.tables.size(); ++i) {
    factors.push_back(rewarded_transitions(js.tables[i], i, a, duration, js.robot, cfg));
    support *= factors.back().size();
    if (support > cfg.support_cap) {
      throw SupportCapExceeded("joint support exceeds support_cap=" + std::to_string(cfg.support_cap));
    }
  }

  JointState base = js;
  if (a.kind == ActionKind::GoToTable) base.robot.position = cfg.table_pos(a.table);
  base.clock += duration;

  std::vector<JointOutcome> out{{base, 1.0, 0.0}};
  for (std::size_t i = 0; i < factors.size(); ++i) {
    std::vector<JointOutcome> grown;
    grown.reserve(out.size() * factors[i].size());
    for (const auto& partial : out) {
      for (const auto& f : factors[i]) {
        JointOutcome o = partial;
        o.next.tables[i] = f.next;
        o.probability *= f.probability;
        o.reward += f.reward;
        grown.push_back(std::move(o));
      }
    }
    out = std::move(grown);
  }
  return out;
}

}  // namespace restaurant
