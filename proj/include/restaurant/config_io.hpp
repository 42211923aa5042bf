#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "restaurant/model_core.hpp"
#include "restaurant/planners.hpp"

namespace restaurant {

using json = nlohmann::json;

namespace detail {

inline void reject_unknown_keys(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
T field(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

inline GridPos parse_pos(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw ConfigError(what + " must be an [x, y] pair of integers");
  }
  return {j[0].get<int>(), j[1].get<int>()};
}

}  // namespace detail

inline json reward_params_to_json(const RewardParams& p) {
  return {{"serve_scale", p.serve_scale},
          {"nav_divisor", p.nav_divisor},
          {"penalty_bases", p.penalty_bases},
          {"time_cap", p.time_cap},
          {"improvement_bonus", p.improvement_bonus}};
}

inline RewardParams reward_params_from_json(const json& j) {
  detail::reject_unknown_keys(j, {"serve_scale", "nav_divisor", "penalty_bases", "time_cap", "improvement_bonus"},
                              "reward");
  RewardParams p;
  if (j.contains("serve_scale")) p.serve_scale = detail::field<double>(j, "serve_scale");
  if (j.contains("nav_divisor")) p.nav_divisor = detail::field<double>(j, "nav_divisor");
  if (j.contains("penalty_bases")) p.penalty_bases = detail::field<std::vector<double>>(j, "penalty_bases");
  if (j.contains("time_cap")) p.time_cap = detail::field<int>(j, "time_cap");
  if (j.contains("improvement_bonus")) p.improvement_bonus = detail::field<double>(j, "improvement_bonus");
  return p;
}

/// Optional fields are written as null when unset.
inline json config_to_json(const RestaurantConfig& c) {
  json positions = json::array();
  for (GridPos p : c.table_positions) positions.push_back({p.x, p.y});
  json j;
  j["n_tables"] = c.n_tables;
  j["grid_width"] = c.grid_width;
  j["grid_height"] = c.grid_height;
  j["table_positions"] = positions;
  j["robot_start"] = c.robot_start ? json{c.robot_start->x, c.robot_start->y} : json(nullptr);
  j["sat_max"] = c.sat_max;
  j["time_max"] = c.time_max ? json(*c.time_max) : json(nullptr);
  j["gamma"] = c.gamma;
  j["horizon"] = c.horizon;
  j["seed"] = c.seed;
  j["duration_max_nav"] = c.duration_max_nav;
  j["initial_satisfaction"] = c.initial_satisfaction ? json(*c.initial_satisfaction) : json(nullptr);
  j["satisfaction_prior"] = c.satisfaction_prior;
  j["reward"] = reward_params_to_json(c.reward);
  j["support_cap"] = c.support_cap;
  return j;
}

/// Parses a config document. Absent keys keep their defaults; unknown keys are
/// rejected. The result is not validated.
inline RestaurantConfig config_from_json(const json& j) {
  detail::reject_unknown_keys(j,
                              {"n_tables", "grid_width", "grid_height", "table_positions", "robot_start", "sat_max",
                               "time_max", "gamma", "horizon", "seed", "duration_max_nav", "initial_satisfaction",
                               "satisfaction_prior", "reward", "support_cap"},
                              "config");
  RestaurantConfig c;
  auto has = [&](const char* k) { return j.contains(k) && !j.at(k).is_null(); };
  if (has("n_tables")) c.n_tables = detail::field<std::size_t>(j, "n_tables");
  if (has("grid_width")) c.grid_width = detail::field<int>(j, "grid_width");
  if (has("grid_height")) c.grid_height = detail::field<int>(j, "grid_height");
  if (has("table_positions")) {
    const auto& arr = j.at("table_positions");
    if (!arr.is_array()) throw ConfigError("table_positions must be an array");
    for (const auto& p : arr) c.table_positions.push_back(detail::parse_pos(p, "table position"));
  }
  if (has("robot_start")) c.robot_start = detail::parse_pos(j.at("robot_start"), "robot_start");
  if (has("sat_max")) c.sat_max = detail::field<int>(j, "sat_max");
  if (has("time_max")) c.time_max = detail::field<int>(j, "time_max");
  if (has("gamma")) c.gamma = detail::field<double>(j, "gamma");
  if (has("horizon")) c.horizon = detail::field<int>(j, "horizon");
  if (has("seed")) c.seed = detail::field<std::uint64_t>(j, "seed");
  if (has("duration_max_nav")) c.duration_max_nav = detail::field<int>(j, "duration_max_nav");
  if (has("initial_satisfaction")) c.initial_satisfaction = detail::field<int>(j, "initial_satisfaction");
  if (has("satisfaction_prior")) c.satisfaction_prior = detail::field<std::vector<double>>(j, "satisfaction_prior");
  if (has("reward")) c.reward = reward_params_from_json(j.at("reward"));
  if (has("support_cap")) c.support_cap = detail::field<std::size_t>(j, "support_cap");
  return c;
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

/// Applies `key=value` to a config document. Dotted keys address nested
/// objects (reward.time_cap=5). The value is read as JSON, falling back to a
/// plain string.
inline void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &doc;
  std::stringstream path(key);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(path, part, '.')) parts.push_back(part);
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!node->is_object()) throw ConfigError("override key '" + key + "' does not name a config field");
    if (!node->contains(parts[i]) || (*node)[parts[i]].is_null()) (*node)[parts[i]] = json::object();
    node = &(*node)[parts[i]];
  }
  (*node)[parts.back()] = value;
}

// ---------------------------------------------------------------------------
// Policy specs: NAME[:k=v,...]

inline std::string policy_name(PolicyKind k) {
  switch (k) {
    case PolicyKind::Random: return "random";
    case PolicyKind::FCFS: return "fcfs";
    case PolicyKind::Greedy: return "greedy";
    case PolicyKind::MCTS: return "mcts";
    case PolicyKind::Expectimax: return "expectimax";
  }
  return "?";
}

inline std::string to_string(const PolicySpec& p) {
  std::ostringstream os;
  os << policy_name(p.kind);
  if (p.kind == PolicyKind::MCTS) {
    os << ":budget=" << p.mcts.budget << ",c=" << p.mcts.exploration << ",depth=" << p.mcts.max_depth
       << ",rollout=" << (p.mcts.rollout == RolloutKind::FCFS ? "fcfs" : "random");
  } else if (p.kind == PolicyKind::Expectimax) {
    os << ":depth=" << p.depth;
  }
  return os.str();
}

inline PolicySpec parse_policy(const std::string& text) {
  PolicySpec spec;
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  if (name == "random") spec.kind = PolicyKind::Random;
  else if (name == "fcfs") spec.kind = PolicyKind::FCFS;
  else if (name == "greedy") spec.kind = PolicyKind::Greedy;
  else if (name == "mcts") spec.kind = PolicyKind::MCTS;
  else if (name == "expectimax") spec.kind = PolicyKind::Expectimax;
  else throw ConfigError("unknown policy '" + name + "'");

  if (colon != std::string::npos) {
    std::stringstream params(text.substr(colon + 1));
    std::string kv;
    while (std::getline(params, kv, ',')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("policy parameter '" + kv + "' is not k=v");
      const std::string k = kv.substr(0, eq);
      const std::string v = kv.substr(eq + 1);
      try {
        if (spec.kind == PolicyKind::MCTS && k == "budget") spec.mcts.budget = std::stoi(v);
        else if (spec.kind == PolicyKind::MCTS && k == "c") spec.mcts.exploration = std::stod(v);
        else if (spec.kind == PolicyKind::MCTS && k == "depth") spec.mcts.max_depth = std::stoi(v);
        else if (spec.kind == PolicyKind::MCTS && k == "rollout" && (v == "random" || v == "fcfs"))
          spec.mcts.rollout = v == "fcfs" ? RolloutKind::FCFS : RolloutKind::Random;
        else if (spec.kind == PolicyKind::Expectimax && k == "depth") spec.depth = std::stoi(v);
        else throw ConfigError("unknown parameter '" + k + "' for policy " + name);
      } catch (const std::logic_error&) {
        throw ConfigError("bad value '" + v + "' for policy parameter " + k);
      }
    }
  }
  spec.validate();
  return spec;
}

}  // namespace restaurant
