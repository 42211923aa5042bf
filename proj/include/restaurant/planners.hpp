#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "restaurant/joint_model.hpp"
#include "restaurant/model_core.hpp"
#include "restaurant/observation_belief.hpp"
#include "restaurant/reward.hpp"
#include "restaurant/rng.hpp"

namespace restaurant {

enum class PolicyKind { Random, FCFS, Greedy, MCTS, Expectimax };

enum class RolloutKind { Random, FCFS };

struct MctsParams {
  int budget = 1000;
  double exploration = 100.0;
  int max_depth = 10;
  RolloutKind rollout = RolloutKind::Random;
};

struct PolicySpec {
  PolicyKind kind = PolicyKind::Random;
  MctsParams mcts;
  int depth = 2;  // expectimax

  void validate() const {
    if (mcts.budget < 1) throw ConfigError("mcts budget must be at least 1");
    if (mcts.max_depth < 1) throw ConfigError("mcts depth must be at least 1");
    if (!(mcts.exploration >= 0.0)) throw ConfigError("mcts exploration constant must be nonnegative");
    if (depth < 1) throw ConfigError("expectimax depth must be at least 1");
  }
};

inline Action act_random(const Belief&, const std::vector<Action>& legal, Rng& rng) {
  if (legal.empty()) throw ModelError("no legal action to choose from");
  return legal[uniform_index(rng, legal.size())];
}

namespace detail {

/// First-come-first-served over any range of observable tables.
template <class Tables>
Action fcfs_choice(const RobotState& robot, const Tables& tables, const RestaurantConfig& cfg) {
  bool any_open = false;
  std::size_t best = 0;
  int best_wait = -1;
  std::size_t i = 0;
  for (const auto& t : tables) {
    if (t.hand_raise != 0) {
      any_open = true;
      const bool food_pending = t.current_request == request::want_food && t.cooking_status < kCookingReady;
      if (!food_pending && t.t_since_request > best_wait) {
        best = i;
        best_wait = t.t_since_request;
      }
    }
    ++i;
  }
  if (!any_open) throw ModelError("first-come-first-served has no table left to serve");
  if (best_wait < 0) return Action::no_op();
  return robot.position == cfg.table_pos(best) ? Action::serve(best) : Action::go_to(best);
}

}  // namespace detail

inline Action act_fcfs(const Belief& b, const RestaurantConfig& cfg) {
  return detail::fcfs_choice(b.robot, b.tables, cfg);
}

/// Myopic policy: the legal action with the highest expected one-step reward.
inline Action act_greedy(const Belief& b, const RestaurantConfig& cfg) {
  const auto legal = legal_actions(b, cfg);
  Action best = legal.front();
  double best_value = -std::numeric_limits<double>::infinity();
  for (const auto& a : legal) {
    const double v = expected_reward(b, a, cfg);
    if (v > best_value) {
      best_value = v;
      best = a;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Exact expectimax over the belief-state process.

struct PlanValue {
  Action action;
  double value = 0.0;
};

namespace detail {

struct SatSupport {
  std::vector<std::pair<int, double>> points;  // (satisfaction, probability)
};

inline std::vector<SatSupport> belief_supports(const Belief& b) {
  std::vector<SatSupport> out(b.tables.size());
  for (std::size_t i = 0; i < b.tables.size(); ++i) {
    for (std::size_t s = 0; s < b.satisfaction[i].size(); ++s) {
      if (b.satisfaction[i][s] > 0.0) out[i].points.emplace_back(static_cast<int>(s), b.satisfaction[i][s]);
    }
  }
  return out;
}

struct ObservationBranch {
  double probability = 0.0;
  RobotState robot;
  std::vector<TableObservation> tables;
  std::vector<std::vector<double>> sat_mass;  // unnormalized per-table marginals
};

/// Expected reward of `a` and the distribution over successor beliefs, built
/// by enumerating every joint state in the belief support.
inline double expand_belief(const Belief& b, const Action& a, const RestaurantConfig& cfg,
                            std::vector<ObservationBranch>& branches) {
  const auto supports = belief_supports(b);
  std::size_t combos = 1;
  for (const auto& s : supports) {
    combos *= std::max<std::size_t>(1, s.points.size());
    if (combos > cfg.support_cap) {
      throw SupportCapExceeded("belief support exceeds support_cap=" + std::to_string(cfg.support_cap));
    }
  }
  const std::size_t n = b.tables.size();
  const std::size_t n_sat = static_cast<std::size_t>(cfg.sat_max) + 1;
  std::map<std::pair<RobotState, std::vector<TableObservation>>, std::size_t> index;
  double expected = 0.0;

  std::vector<std::size_t> digit(n, 0);
  for (std::size_t c = 0; c < combos; ++c) {
    JointState js;
    js.robot = b.robot;
    js.tables.resize(n);
    double weight = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (supports[i].points.empty()) {
        js.tables[i] = with_satisfaction(b.tables[i], 0);
        continue;
      }
      const auto& [sat, p] = supports[i].points[digit[i]];
      js.tables[i] = with_satisfaction(b.tables[i], sat);
      weight *= p;
    }
    for (const auto& o : enumerate_joint_transitions(js, a, cfg)) {
      const double w = weight * o.probability;
      expected += w * o.reward;
      auto key = std::make_pair(o.next.robot, observe_all(o.next));
      auto [it, fresh] = index.try_emplace(key, branches.size());
      if (fresh) {
        branches.push_back({0.0, key.first, key.second, std::vector<std::vector<double>>(n, std::vector<double>(n_sat))});
      }
      auto& br = branches[it->second];
      br.probability += w;
      for (std::size_t i = 0; i < n; ++i) br.sat_mass[i][static_cast<std::size_t>(o.next.tables[i].satisfaction)] += w;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (++digit[i] < std::max<std::size_t>(1, supports[i].points.size())) break;
      digit[i] = 0;
    }
  }
  return expected;
}

inline double expectimax_value(const Belief& b, int depth, const RestaurantConfig& cfg, Action* best_action) {
  if (best_action) *best_action = Action::no_op();
  if (depth <= 0 || b.all_done()) return 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& a : legal_actions(b, cfg)) {
    std::vector<ObservationBranch> branches;
    double q = expand_belief(b, a, cfg, branches);
    const double discount = std::pow(cfg.gamma, action_duration(b.robot, a, cfg));
    for (auto& br : branches) {
      Belief child;
      child.robot = br.robot;
      child.tables = br.tables;
      child.satisfaction = std::move(br.sat_mass);
      for (auto& v : child.satisfaction) {
        for (auto& x : v) x /= br.probability;
      }
      q += discount * br.probability * expectimax_value(child, depth - 1, cfg, nullptr);
    }
    if (q > best) {
      best = q;
      if (best_action) *best_action = a;
    }
  }
  return best;
}

}  // namespace detail

/// Exact depth-limited expectimax. Returns the optimal root action and value.
inline PlanValue value_expectimax(const Belief& b, int depth, const RestaurantConfig& cfg) {
  if (depth < 1) throw ConfigError("expectimax depth must be at least 1");
  PlanValue out;
  out.value = detail::expectimax_value(b, depth, cfg, &out.action);
  return out;
}

// ---------------------------------------------------------------------------
// Belief-state UCT.

struct ActionStats {
  Action action;
  int visits = 0;
  double mean = 0.0;
};

struct MctsResult {
  Action action;
  double value = 0.0;  // mean return of the chosen root action
  std::vector<ActionStats> root;
};

namespace detail {

/// Search tree keyed by action history. Observations are a deterministic
/// function of the history here, so each action edge has a single child.
struct MctsNode {
  struct Edge {
    Action action;
    int visits = 0;
    double value_sum = 0.0;
    std::unique_ptr<MctsNode> child;
  };
  std::vector<Edge> edges;
  int visits = 0;
  bool initialized = false;
};

class MctsSearch {
 public:
  MctsSearch(const RestaurantConfig& cfg, const MctsParams& params, Rng& rng) : cfg_(cfg), params_(params), rng_(rng) {}

  MctsResult run(const Belief& b) {
    MctsNode root;
    JointState state;
    for (int k = 0; k < params_.budget; ++k) {
      sample_state(b, state);
      simulate(root, state, 0);
    }
    MctsResult res;
    const MctsNode::Edge* best = nullptr;
    for (const auto& e : root.edges) {
      res.root.push_back({e.action, e.visits, e.visits ? e.value_sum / e.visits : 0.0});
      if (!best || e.visits > best->visits) best = &e;
    }
    if (best) {
      res.action = best->action;
      res.value = best->visits ? best->value_sum / best->visits : 0.0;
    }
    return res;
  }

 private:
  void sample_state(const Belief& b, JointState& out) {
    out.robot = b.robot;
    out.clock = 0;
    out.tables.resize(b.tables.size());
    for (std::size_t i = 0; i < b.tables.size(); ++i) {
      const int sat = static_cast<int>(sample_categorical(rng_, b.satisfaction[i]));
      out.tables[i] = with_satisfaction(b.tables[i], sat);
    }
  }

  double simulate(MctsNode& node, JointState& state, int depth) {
    if (depth >= params_.max_depth || state.all_done()) return 0.0;
    if (!node.initialized) {
      for (const auto& a : legal_actions(state, cfg_)) node.edges.push_back({a, 0, 0.0, nullptr});
      node.initialized = true;
    }
    MctsNode::Edge& edge = select(node);
    const int duration = action_duration(state.robot, edge.action, cfg_);
    const double r = advance_joint(state, edge.action, duration, cfg_, rng_);
    const double discount = std::pow(cfg_.gamma, duration);
    double ret;
    if (!edge.child) {
      edge.child = std::make_unique<MctsNode>();
      ret = r + discount * rollout(state, depth + 1);
    } else {
      ret = r + discount * simulate(*edge.child, state, depth + 1);
    }
    ++edge.visits;
    edge.value_sum += ret;
    ++node.visits;
    return ret;
  }

  MctsNode::Edge& select(MctsNode& node) {
    for (auto& e : node.edges) {
      if (e.visits == 0) return e;
    }
    const double log_n = std::log(static_cast<double>(node.visits));
    MctsNode::Edge* best = &node.edges.front();
    double best_score = -std::numeric_limits<double>::infinity();
    for (auto& e : node.edges) {
      const double score = e.value_sum / e.visits + params_.exploration * std::sqrt(log_n / e.visits);
      if (score > best_score) {
        best_score = score;
        best = &e;
      }
    }
    return *best;
  }

  double rollout(JointState& state, int depth) {
    double ret = 0.0;
    double discount = 1.0;
    for (; depth < params_.max_depth && !state.all_done(); ++depth) {
      Action a;
      if (params_.rollout == RolloutKind::FCFS) {
        a = fcfs_choice(state.robot, state.tables, cfg_);
      } else {
        legal_buffer_ = legal_actions(state, cfg_);
        a = legal_buffer_[uniform_index(rng_, legal_buffer_.size())];
      }
      const int duration = action_duration(state.robot, a, cfg_);
      ret += discount * advance_joint(state, a, duration, cfg_, rng_);
      discount *= std::pow(cfg_.gamma, duration);
    }
    return ret;
  }

  const RestaurantConfig& cfg_;
  MctsParams params_;
  Rng& rng_;
  std::vector<Action> legal_buffer_;
};

}  // namespace detail

inline MctsResult mcts_search(const Belief& b, const RestaurantConfig& cfg, const MctsParams& params, Rng& rng) {
  if (params.budget < 1) throw ConfigError("mcts budget must be at least 1");
  return detail::MctsSearch(cfg, params, rng).run(b);
}

inline Action act_mcts(const Belief& b, const RestaurantConfig& cfg, const MctsParams& params, Rng& rng) {
  return mcts_search(b, cfg, params, rng).action;
}

/// Dispatches on the policy kind.
inline Action choose_action(const PolicySpec& policy, const Belief& b, const RestaurantConfig& cfg, Rng& rng) {
  switch (policy.kind) {
    case PolicyKind::Random: return act_random(b, legal_actions(b, cfg), rng);
    case PolicyKind::FCFS: return act_fcfs(b, cfg);
    case PolicyKind::Greedy: return act_greedy(b, cfg);
    case PolicyKind::MCTS: return act_mcts(b, cfg, policy.mcts, rng);
    case PolicyKind::Expectimax: return value_expectimax(b, policy.depth, cfg).action;
  }
  throw ModelError("unknown policy kind");
}

}  // namespace restaurant
