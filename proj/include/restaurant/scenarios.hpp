#pragma once

#include <string>
#include <vector>

#include "restaurant/model_core.hpp"

namespace restaurant::scenarios {

/// Three tables on the 11x11 grid with the robot in the middle; time_max is
/// derived (3 x 5 = 15).
inline RestaurantConfig paper_3tables() {
  RestaurantConfig c;
  c.n_tables = 3;
  c.table_positions = {{2, 2}, {8, 2}, {5, 8}};
  c.robot_start = GridPos{5, 5};
  c.sat_max = 5;
  c.gamma = 0.95;
  c.horizon = 100;
  return c;
}

/// Two tables along the top of the 11x11 grid, horizon 60.
inline RestaurantConfig two_tables() {
  RestaurantConfig c;
  c.n_tables = 2;
  c.table_positions = {{2, 2}, {5, 2}};
  c.robot_start = GridPos{5, 5};
  c.gamma = 0.95;
  c.horizon = 60;
  return c;
}

/// The small exhaustively enumerable instance: one table, sat_max=2,
/// time_max=4, uniform satisfaction prior.
inline RestaurantConfig small() {
  RestaurantConfig c;
  c.n_tables = 1;
  c.grid_width = 3;
  c.grid_height = 3;
  c.table_positions = {{2, 2}};
  c.robot_start = GridPos{0, 0};
  c.sat_max = 2;
  c.time_max = 4;
  c.satisfaction_prior = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  c.gamma = 0.95;
  c.horizon = 20;
  return c;
}

inline const std::vector<std::string>& names() {
  static const std::vector<std::string> n{"paper-3tables", "two-tables", "small"};
  return n;
}

/// Unvalidated preset by name.
inline RestaurantConfig by_name(const std::string& name) {
  if (name == "paper-3tables") return paper_3tables();
  if (name == "two-tables") return two_tables();
  if (name == "small") return small();
  throw ConfigError("unknown scenario '" + name + "'");
}

}  // namespace restaurant::scenarios
