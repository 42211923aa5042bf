#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "restaurant/model_core.hpp"
#include "restaurant/table_dynamics.hpp"

namespace restaurant {

/// What the robot sees of one table: every state variable except satisfaction.
struct TableObservation {
  int food = 0;
  int water = 0;
  int cooking_status = 0;
  int current_request = request::want_menu;
  int hand_raise = 1;
  int t_since_served = 0;
  int t_since_food_ready = 0;
  int t_since_request = 0;

  bool done() const { return hand_raise == 0; }
  friend auto operator<=>(const TableObservation&, const TableObservation&) = default;
};

/// Observation of the next state. The action does not enter: the observable
/// variables are copied exactly and satisfaction is never revealed.
inline TableObservation observe(const TableState& next, [[maybe_unused]] const Action& a = Action::no_op()) {
  return {next.food,           next.water,          next.cooking_status,    next.current_request,
          next.hand_raise,     next.t_since_served, next.t_since_food_ready, next.t_since_request};
}

/// Full table state with the observed variables and the given satisfaction.
inline TableState with_satisfaction(const TableObservation& z, int satisfaction) {
  TableState s;
  s.satisfaction = satisfaction;
  s.food = z.food;
  s.water = z.water;
  s.cooking_status = z.cooking_status;
  s.current_request = z.current_request;
  s.hand_raise = z.hand_raise;
  s.t_since_served = z.t_since_served;
  s.t_since_food_ready = z.t_since_food_ready;
  s.t_since_request = z.t_since_request;
  return s;
}

inline std::vector<TableObservation> observe_all(const JointState& js) {
  std::vector<TableObservation> out;
  out.reserve(js.tables.size());
  for (const auto& t : js.tables) out.push_back(observe(t));
  return out;
}

/// Belief over the joint state: the robot and the observable table variables
/// are known exactly; each table carries a distribution over satisfaction.
struct Belief {
  RobotState robot;
  std::vector<TableObservation> tables;
  std::vector<std::vector<double>> satisfaction;  // [table][sat value]

  bool all_done() const {
    for (const auto& t : tables) {
      if (!t.done()) return false;
    }
    return true;
  }
  friend bool operator==(const Belief&, const Belief&) = default;
};

inline Belief belief_init(const RestaurantConfig& cfg) {
  Belief b;
  b.robot.position = cfg.start();
  b.tables.assign(cfg.n_tables, observe(initial_table_state(0)));
  b.satisfaction.assign(cfg.n_tables, cfg.satisfaction_prior);
  return b;
}

inline std::vector<Action> legal_actions(const Belief& b, const RestaurantConfig& cfg) {
  return legal_actions(b.robot, b.tables, cfg);
}

/// Bayes filter step for one table. Predicts the satisfaction marginal through
/// the transition model, then conditions on the observation.
inline std::vector<double> filter_table(const TableObservation& before, const std::vector<double>& sat_belief,
                                        std::size_t table, const Action& a, int duration,
                                        const TableObservation& z, const RestaurantConfig& cfg) {
  const auto n_sat = sat_belief.size();
  std::vector<double> predicted(n_sat, 0.0);
  std::vector<double> joint_with_z(n_sat, 0.0);
  for (std::size_t s = 0; s < n_sat; ++s) {
    if (sat_belief[s] <= 0.0) continue;
    const auto dist = transition_distribution(with_satisfaction(before, static_cast<int>(s)), table, a, duration, cfg);
    for (const auto& e : dist.entries) {
      const double w = sat_belief[s] * e.probability;
      const auto next_sat = static_cast<std::size_t>(e.state.satisfaction);
      predicted[next_sat] += w;
      // Pr(z | s', a) is 1 on an exact match of the observable variables, else 0.
      if (observe(e.state, a) == z) joint_with_z[next_sat] += w;
    }
  }
  double evidence = 0.0;
  for (double w : joint_with_z) evidence += w;
  if (evidence <= 0.0) {
    throw ModelError("observation of table " + std::to_string(table) + " is inconsistent with the model prediction");
  }
  for (auto& w : joint_with_z) w /= evidence;
  for (std::size_t s = 0; s < n_sat; ++s) {
    if (std::abs(joint_with_z[s] - predicted[s]) > 1e-12) {
      throw ModelError("observation changed the satisfaction marginal of table " + std::to_string(table));
    }
  }
  return joint_with_z;
}

inline Belief belief_step(const Belief& b, const Action& a, int duration, const std::vector<TableObservation>& z,
                          const RestaurantConfig& cfg) {
  if (z.size() != b.tables.size()) throw ModelError("observation count does not match table count");
  if (!is_legal(a, b.robot, b.tables, cfg)) throw ModelError("illegal action " + to_string(a));
  Belief next = b;
  if (a.kind == ActionKind::GoToTable) next.robot.position = cfg.table_pos(a.table);
  for (std::size_t i = 0; i < b.tables.size(); ++i) {
    if (b.tables[i].done()) {
      if (z[i] != b.tables[i]) throw ModelError("observation changed a table that has left");
      continue;
    }
    next.satisfaction[i] = filter_table(b.tables[i], b.satisfaction[i], i, a, duration, z[i], cfg);
    next.tables[i] = z[i];
  }
  return next;
}

}  // namespace restaurant
