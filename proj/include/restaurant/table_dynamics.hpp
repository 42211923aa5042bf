#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "restaurant/model_core.hpp"
#include "restaurant/rng.hpp"

namespace restaurant {

struct WeightedTableState {
  TableState state;
  double probability = 0.0;
};

/// Next-state distribution of one table. Support points are distinct.
struct TransitionDistribution {
  std::vector<WeightedTableState> entries;

  static TransitionDistribution point(const TableState& s) { return {{{s, 1.0}}}; }
  double total() const {
    double acc = 0.0;
    for (const auto& e : entries) acc += e.probability;
    return acc;
  }
};

/// Travel time in steps: the Manhattan distance scaled onto [1, duration_max_nav].
inline int navigation_duration(const RobotState& from, GridPos to, const RestaurantConfig& cfg) {
  const int span = (cfg.grid_width - 1) + (cfg.grid_height - 1);
  if (span == 0) return 1;
  const int dist = manhattan(from.position, to);
  const int steps = (cfg.duration_max_nav * dist + span - 1) / span;
  return std::max(1, steps);
}

/// Steps consumed by an action: navigation is durative, everything else takes one step.
inline int action_duration(const RobotState& robot, const Action& a, const RestaurantConfig& cfg) {
  if (a.kind == ActionKind::GoToTable) return navigation_duration(robot, cfg.table_pos(a.table), cfg);
  return 1;
}

namespace detail {

inline bool crossed(int before, int after, int period) {
  return after > before && after % period == 0;
}

}  // namespace detail

/// One step of unattended evolution. All conditions read the pre-step state.
inline TableState tick_table(const TableState& ts, const RestaurantConfig& cfg) {
  if (ts.done()) throw ModelError("tick_table on a table that has left");
  const int tmax = cfg.tmax();
  const int stage = cfg.stage_period();
  const bool eating = ts.eating();
  const bool drinking = ts.drinking();
  const bool waiting_food = ts.current_request == request::want_food;

  TableState next = ts;
  if (!(eating || drinking)) {
    next.t_since_request = std::min(ts.t_since_request + 1, tmax);
  } else {
    next.t_since_served = std::min(ts.t_since_served + 1, tmax);
    if (detail::crossed(ts.t_since_served, next.t_since_served, stage)) {
      if (eating) next.food = std::min(ts.food + 1, kFoodMax);
      if (drinking) next.water = std::min(ts.water + 1, kWaterMax);
    }
  }

  // The kitchen clock starts with t_since_request when the order is taken and
  // both run unfrozen until the food is served, so the request timer drives it.
  if (waiting_food && ts.cooking_status < kCookingReady &&
      detail::crossed(ts.t_since_request, next.t_since_request, stage)) {
    next.cooking_status = ts.cooking_status + 1;
  }
  if (waiting_food && ts.cooking_status == kCookingReady) {
    next.t_since_food_ready = std::min(ts.t_since_food_ready + 1, tmax);
  }

  if (detail::crossed(ts.t_since_request, next.t_since_request, cfg.decay_period(waiting_food))) {
    next.satisfaction = std::max(ts.satisfaction - 1, 0);
  }
  return next;
}

inline TableState tick_table(TableState ts, int steps, const RestaurantConfig& cfg) {
  for (int k = 0; k < steps; ++k) ts = tick_table(ts, cfg);
  return ts;
}

/// Probability that a serve raises satisfaction by one level.
inline double serve_improvement_probability(int satisfaction, int sat_max) {
  if (satisfaction >= sat_max) return 0.0;
  return satisfaction == 0 ? 0.3 : 0.6;
}

/// Effect of the serve action on its table: the request advances (or the
/// table leaves after cleaning) and satisfaction may rise by one.
inline TransitionDistribution apply_serve(const TableState& ts, const RestaurantConfig& cfg) {
  if (ts.done()) throw ModelError("serve on a table that has left");
  if (ts.current_request == request::want_food && ts.cooking_status < kCookingReady) {
    throw ModelError("serve of food that is not ready");
  }
  TableState base = ts;
  base.t_since_request = 0;
  switch (ts.current_request) {
    case request::ready_to_order:
      base.cooking_status = 0;
      base.t_since_food_ready = 0;
      break;
    case request::want_food:
      base.food = 1;
      base.t_since_served = 0;
      base.t_since_food_ready = 0;
      break;
    case request::want_drinks:
      base.water = 1;
      base.t_since_served = 0;
      break;
    default:
      break;
  }
  if (ts.current_request == request::needs_cleaning) {
    base.hand_raise = 0;
  } else {
    base.current_request = ts.current_request + 1;
  }

  const double up = serve_improvement_probability(ts.satisfaction, cfg.sat_max);
  if (up == 0.0) return TransitionDistribution::point(base);
  TableState raised = base;
  raised.satisfaction = ts.satisfaction + 1;
  return {{{raised, up}, {base, 1.0 - up}}};
}

/// Next-state distribution of table `table` when the robot executes `a` for
/// `duration` steps. Actions aimed elsewhere act on this table as NoOp.
inline TransitionDistribution transition_distribution(const TableState& ts, std::size_t table, const Action& a,
                                                      int duration, const RestaurantConfig& cfg) {
  if (duration < 1) throw ModelError("action duration must be at least 1");
  if (ts.done()) return TransitionDistribution::point(ts);
  if (a.targets(table)) {
    switch (a.kind) {
      case ActionKind::Serve:
        return apply_serve(tick_table(ts, duration - 1, cfg), cfg);
      case ActionKind::CommFoodNotReady:
        if (ts.current_request != request::want_food || ts.cooking_status >= kCookingReady) {
          throw ModelError("food_not_ready is only legal while food is cooking");
        }
        break;
      default:
        break;
    }
  }
  return TransitionDistribution::point(tick_table(ts, duration, cfg));
}

inline TableState sample_transition(const TableState& ts, std::size_t table, const Action& a, int duration,
                                    const RestaurantConfig& cfg, Rng& rng) {
  const auto dist = transition_distribution(ts, table, a, duration, cfg);
  if (dist.entries.size() == 1) return dist.entries.front().state;
  std::vector<double> probs;
  probs.reserve(dist.entries.size());
  for (const auto& e : dist.entries) probs.push_back(e.probability);
  return dist.entries[sample_categorical(rng, probs)].state;
}

}  // namespace restaurant
