#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "restaurant/rng.hpp"

namespace restaurant {

/// Invalid configuration or user input. The CLI maps it to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition of the model was violated (illegal action, inconsistent
/// observation, ...). Never expected in a correct run.
class ModelError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An exhaustive enumeration would exceed the configured support cap.
class SupportCapExceeded : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

struct GridPos {
  int x = 0;
  int y = 0;
  friend auto operator<=>(const GridPos&, const GridPos&) = default;
};

inline int manhattan(GridPos a, GridPos b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y); }

/// Shared robot state: its cell on the grid.
struct RobotState {
  GridPos position;
  friend auto operator<=>(const RobotState&, const RobotState&) = default;
};

/// Values of TableState::current_request, in the order a table goes through them.
namespace request {
inline constexpr int want_menu = 1;
inline constexpr int ready_to_order = 2;
inline constexpr int want_food = 3;
inline constexpr int want_drinks = 4;
inline constexpr int want_bill = 5;
inline constexpr int cash_ready = 6;
inline constexpr int cash_collected = 7;
inline constexpr int needs_cleaning = 8;
}  // namespace request

inline constexpr int kFoodMax = 3;   // plate-empty
inline constexpr int kWaterMax = 3;  // glass-empty
inline constexpr int kCookingReady = 2;

/// Coefficients of the reward equation.
struct RewardParams {
  double serve_scale = 5.0;
  double nav_divisor = 3.0;
  std::vector<double> penalty_bases{2.0, 1.7, 1.4};  // indexed by sat' = 0, 1, 2
  int time_cap = 10;
  double improvement_bonus = 1.0;
  friend bool operator==(const RewardParams&, const RewardParams&) = default;
};

struct RestaurantConfig {
  std::size_t n_tables = 1;
  int grid_width = 11;
  int grid_height = 11;
  std::vector<GridPos> table_positions;  // empty: default layout
  std::optional<GridPos> robot_start;    // unset: grid centre
  int sat_max = 5;
  std::optional<int> time_max;  // unset: n_tables * sat_max
  double gamma = 0.95;
  int horizon = 100;
  std::uint64_t seed = 0;
  int duration_max_nav = 3;
  std::optional<int> initial_satisfaction;  // unset: sat_max
  std::vector<double> satisfaction_prior;   // empty: point mass at initial_satisfaction
  RewardParams reward;
  std::size_t support_cap = 100000;

  friend bool operator==(const RestaurantConfig&, const RestaurantConfig&) = default;

  // Accessors for validated configs, where every optional is filled in.
  int tmax() const { return *time_max; }
  GridPos start() const { return *robot_start; }
  GridPos table_pos(std::size_t i) const { return table_positions.at(i); }

  /// Steps per food/water/cooking stage.
  int stage_period() const { return std::max(1, tmax() / 3); }
  /// Steps per satisfaction decrement while waiting.
  int decay_period(bool waiting_for_food) const {
    return std::max(1, tmax() / (waiting_for_food ? sat_max + 1 : sat_max));
  }
};

struct TableState {
  int satisfaction = 0;
  int food = 0;
  int water = 0;
  int cooking_status = 0;
  int current_request = request::want_menu;
  int hand_raise = 1;
  int t_since_served = 0;
  int t_since_food_ready = 0;
  int t_since_request = 0;

  bool done() const { return hand_raise == 0; }
  bool eating() const { return food == 1 || food == 2; }
  bool drinking() const { return water == 1 || water == 2; }

  friend auto operator<=>(const TableState&, const TableState&) = default;
};

enum class ActionKind : int { Serve = 0, GoToTable = 1, CommFoodNotReady = 2, CommWillReturn = 3, NoOp = 4 };

/// A robot action, tagged with the table whose action set it belongs to.
/// NoOp is the only action shared by every table; its `table` is ignored.
struct Action {
  ActionKind kind = ActionKind::NoOp;
  std::size_t table = 0;

  static Action serve(std::size_t t) { return {ActionKind::Serve, t}; }
  static Action go_to(std::size_t t) { return {ActionKind::GoToTable, t}; }
  static Action food_not_ready(std::size_t t) { return {ActionKind::CommFoodNotReady, t}; }
  static Action will_return(std::size_t t) { return {ActionKind::CommWillReturn, t}; }
  static Action no_op() { return {}; }

  bool is_no_op() const { return kind == ActionKind::NoOp; }
  bool targets(std::size_t t) const { return !is_no_op() && table == t; }

  friend bool operator==(const Action& a, const Action& b) {
    return a.kind == b.kind && (a.is_no_op() || a.table == b.table);
  }
  /// Fixed total order used for tie-breaking: kind first, then table index.
  friend bool operator<(const Action& a, const Action& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    return !a.is_no_op() && a.table < b.table;
  }
};

inline std::string to_string(const Action& a) {
  switch (a.kind) {
    case ActionKind::Serve: return "serve(" + std::to_string(a.table) + ")";
    case ActionKind::GoToTable: return "goto(" + std::to_string(a.table) + ")";
    case ActionKind::CommFoodNotReady: return "food_not_ready(" + std::to_string(a.table) + ")";
    case ActionKind::CommWillReturn: return "will_return(" + std::to_string(a.table) + ")";
    case ActionKind::NoOp: return "noop";
  }
  return "?";
}

struct JointState {
  RobotState robot;
  std::vector<TableState> tables;
  long clock = 0;

  bool all_done() const {
    return std::all_of(tables.begin(), tables.end(), [](const TableState& t) { return t.done(); });
  }
  friend auto operator<=>(const JointState&, const JointState&) = default;
};

/// Lattice of candidate table cells (spacing 3, inset 2), skipping the robot start.
inline std::vector<GridPos> default_table_layout(std::size_t n, int width, int height, GridPos robot) {
  std::vector<GridPos> out;
  for (int y = 2; y < height && out.size() < n; y += 3) {
    for (int x = 2; x < width && out.size() < n; x += 3) {
      GridPos p{x, y};
      if (p != robot) out.push_back(p);
    }
  }
  if (out.size() < n) {
    throw ConfigError("grid too small for a default layout of " + std::to_string(n) +
                      " tables; give table_positions explicitly");
  }
  return out;
}

/// Fills derived fields and checks every invariant of the configuration.
inline RestaurantConfig validate_config(RestaurantConfig cfg) {
  auto fail = [](const std::string& msg) { throw ConfigError("invalid config: " + msg); };
  if (cfg.n_tables == 0) fail("n_tables must be positive");
  if (cfg.grid_width <= 0 || cfg.grid_height <= 0) fail("grid dimensions must be positive");
  if (cfg.sat_max <= 0) fail("sat_max must be positive");
  if (cfg.time_max && *cfg.time_max <= 0) fail("time_max must be positive");
  if (!(cfg.gamma > 0.0 && cfg.gamma <= 1.0)) fail("gamma must lie in (0, 1]");
  if (cfg.horizon < 0) fail("horizon must be nonnegative");
  if (cfg.duration_max_nav < 1) fail("duration_max_nav must be at least 1");
  if (cfg.support_cap == 0) fail("support_cap must be positive");

  auto inside = [&](GridPos p) {
    return p.x >= 0 && p.y >= 0 && p.x < cfg.grid_width && p.y < cfg.grid_height;
  };
  if (!cfg.robot_start) cfg.robot_start = GridPos{cfg.grid_width / 2, cfg.grid_height / 2};
  if (!inside(*cfg.robot_start)) fail("robot_start outside the grid");

  if (cfg.table_positions.empty()) {
    cfg.table_positions = default_table_layout(cfg.n_tables, cfg.grid_width, cfg.grid_height, *cfg.robot_start);
  }
  if (cfg.table_positions.size() != cfg.n_tables) {
    fail("table_positions has " + std::to_string(cfg.table_positions.size()) + " entries for n_tables=" +
         std::to_string(cfg.n_tables));
  }
  std::set<GridPos> seen;
  for (GridPos p : cfg.table_positions) {
    if (!inside(p)) fail("table position (" + std::to_string(p.x) + "," + std::to_string(p.y) + ") outside the grid");
    if (!seen.insert(p).second) fail("duplicate table position");
  }

  if (!cfg.time_max) cfg.time_max = static_cast<int>(cfg.n_tables) * cfg.sat_max;

  if (!cfg.initial_satisfaction) cfg.initial_satisfaction = cfg.sat_max;
  if (*cfg.initial_satisfaction < 0 || *cfg.initial_satisfaction > cfg.sat_max) {
    fail("initial_satisfaction outside [0, sat_max]");
  }
  const auto n_sat = static_cast<std::size_t>(cfg.sat_max) + 1;
  if (cfg.satisfaction_prior.empty()) {
    cfg.satisfaction_prior.assign(n_sat, 0.0);
    cfg.satisfaction_prior[static_cast<std::size_t>(*cfg.initial_satisfaction)] = 1.0;
  }
  if (cfg.satisfaction_prior.size() != n_sat) fail("satisfaction_prior must have sat_max+1 entries");
  for (double p : cfg.satisfaction_prior) {
    if (!(p >= 0.0)) fail("satisfaction_prior entries must be nonnegative");
  }
  const double total = std::accumulate(cfg.satisfaction_prior.begin(), cfg.satisfaction_prior.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-9) fail("satisfaction_prior sums to " + std::to_string(total) + ", not 1");

  const auto& r = cfg.reward;
  if (r.penalty_bases.size() != 3) fail("reward.penalty_bases must have 3 entries");
  for (double b : r.penalty_bases) {
    if (!(b > 1.0)) fail("reward.penalty_bases must exceed 1");
  }
  if (r.time_cap < 0) fail("reward.time_cap must be nonnegative");
  if (!(r.nav_divisor > 0.0)) fail("reward.nav_divisor must be positive");
  return cfg;
}

inline TableState initial_table_state(int satisfaction) {
  TableState t;
  t.satisfaction = satisfaction;
  return t;
}

/// Robot at its start cell, every table freshly seated (want-menu, timers 0),
/// satisfaction drawn from the prior.
inline JointState initial_joint_state(const RestaurantConfig& cfg, Rng& rng) {
  JointState js;
  js.robot.position = cfg.start();
  js.tables.reserve(cfg.n_tables);
  for (std::size_t i = 0; i < cfg.n_tables; ++i) {
    js.tables.push_back(initial_table_state(static_cast<int>(sample_categorical(rng, cfg.satisfaction_prior))));
  }
  return js;
}

/// Legal actions, sorted by the fixed action order. `Tables` is any range of
/// objects exposing the observable table fields (TableState or TableObservation).
template <class Tables>
std::vector<Action> legal_actions(const RobotState& robot, const Tables& tables, const RestaurantConfig& cfg) {
  std::vector<Action> out;
  std::size_t i = 0;
  for (const auto& t : tables) {
    if (t.hand_raise != 0) {
      const bool here = robot.position == cfg.table_pos(i);
      const bool food_pending = t.current_request == request::want_food && t.cooking_status < kCookingReady;
      if (here && !food_pending) out.push_back(Action::serve(i));
      if (!here) out.push_back(Action::go_to(i));
      if (food_pending) out.push_back(Action::food_not_ready(i));
      out.push_back(Action::will_return(i));
    }
    ++i;
  }
  out.push_back(Action::no_op());
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<Action> legal_actions(const JointState& js, const RestaurantConfig& cfg) {
  return legal_actions(js.robot, js.tables, cfg);
}

template <class Tables>
bool is_legal(const Action& a, const RobotState& robot, const Tables& tables, const RestaurantConfig& cfg) {
  if (!a.is_no_op() && a.table >= cfg.n_tables) return false;
  const auto legal = legal_actions(robot, tables, cfg);
  return std::find(legal.begin(), legal.end(), a) != legal.end();
}

}  // namespace restaurant
