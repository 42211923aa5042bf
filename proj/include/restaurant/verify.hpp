#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "restaurant/joint_model.hpp"
#include "restaurant/model_core.hpp"
#include "restaurant/observation_belief.hpp"
#include "restaurant/planners.hpp"
#include "restaurant/reward.hpp"
#include "restaurant/rng.hpp"
#include "restaurant/scenarios.hpp"
#include "restaurant/table_dynamics.hpp"

// Exhaustive oracles shared by the CLI `verify` command and the test suites.
// Each one reaches its answer by enumerating joint states rather than through
// the per-table code paths it checks.

namespace restaurant::verify {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Joint states reachable from the prior's support, with the clock zeroed.
inline std::vector<JointState> reachable_states(const RestaurantConfig& cfg) {
  std::set<JointState> seen;
  std::vector<JointState> frontier;
  // Every table may start at any value in the prior's support, independently.
  std::vector<std::size_t> support;
  for (std::size_t s = 0; s < cfg.satisfaction_prior.size(); ++s) {
    if (cfg.satisfaction_prior[s] > 0.0) support.push_back(s);
  }
  std::vector<std::size_t> digit(cfg.n_tables, 0);
  while (true) {
    JointState js;
    js.robot.position = cfg.start();
    for (std::size_t i = 0; i < cfg.n_tables; ++i) {
      js.tables.push_back(initial_table_state(static_cast<int>(support[digit[i]])));
    }
    if (seen.insert(js).second) frontier.push_back(js);
    std::size_t i = 0;
    for (; i < cfg.n_tables; ++i) {
      if (++digit[i] < support.size()) break;
      digit[i] = 0;
    }
    if (i == cfg.n_tables) break;
  }
  std::vector<JointState> out;
  while (!frontier.empty()) {
    JointState js = frontier.back();
    frontier.pop_back();
    out.push_back(js);
    if (out.size() > cfg.support_cap) {
      throw SupportCapExceeded("reachable state count exceeds support_cap=" + std::to_string(cfg.support_cap));
    }
    for (const auto& a : legal_actions(js, cfg)) {
      for (auto& o : enumerate_joint_transitions(js, a, cfg)) {
        o.next.clock = 0;
        if (seen.insert(o.next).second) frontier.push_back(o.next);
      }
    }
  }
  return out;
}

/// Every transition row of every reachable state sums to one.
inline CheckResult check_row_sums(const RestaurantConfig& cfg) {
  CheckResult r{"transition_row_sums", true, ""};
  const auto states = reachable_states(cfg);
  std::size_t rows = 0;
  double worst = 0.0;
  for (const auto& js : states) {
    for (const auto& a : legal_actions(js, cfg)) {
      const int d = action_duration(js.robot, a, cfg);
      for (std::size_t i = 0; i < js.tables.size(); ++i) {
        worst = std::max(worst, std::abs(transition_distribution(js.tables[i], i, a, d, cfg).total() - 1.0));
      }
      double total = 0.0;
      for (const auto& o : enumerate_joint_transitions(js, a, cfg)) total += o.probability;
      worst = std::max(worst, std::abs(total - 1.0));
      ++rows;
    }
  }
  r.passed = worst <= 1e-9;
  std::ostringstream os;
  os << states.size() << " states, " << rows << " rows, max |sum-1| = " << worst;
  r.detail = os.str();
  return r;
}

/// Exact distribution over joint states, propagated by enumeration.
class ForwardEnumeration {
 public:
  explicit ForwardEnumeration(const RestaurantConfig& cfg) : cfg_(cfg) {
    std::vector<JointState> starts{JointState{}};
    std::vector<double> weights{1.0};
    starts.front().robot.position = cfg.start();
    for (std::size_t i = 0; i < cfg.n_tables; ++i) {
      std::vector<JointState> grown;
      std::vector<double> grown_w;
      for (std::size_t k = 0; k < starts.size(); ++k) {
        for (std::size_t s = 0; s < cfg.satisfaction_prior.size(); ++s) {
          if (cfg.satisfaction_prior[s] <= 0.0) continue;
          JointState js = starts[k];
          js.tables.push_back(initial_table_state(static_cast<int>(s)));
          grown.push_back(js);
          grown_w.push_back(weights[k] * cfg.satisfaction_prior[s]);
        }
      }
      starts = std::move(grown);
      weights = std::move(grown_w);
    }
    for (std::size_t k = 0; k < starts.size(); ++k) dist_[starts[k]] += weights[k];
  }

  /// Propagates through `a` and conditions on the robot and observations `z`.
  void step(const Action& a, const RobotState& robot, const std::vector<TableObservation>& z) {
    std::map<JointState, double> next;
    for (const auto& [js, p] : dist_) {
      for (const auto& o : enumerate_joint_transitions(js, a, cfg_)) {
        if (o.next.robot == robot && observe_all(o.next) == z) next[o.next] += p * o.probability;
      }
      if (next.size() > cfg_.support_cap) {
        throw SupportCapExceeded("forward enumeration exceeds support_cap=" + std::to_string(cfg_.support_cap));
      }
    }
    double evidence = 0.0;
    for (const auto& [_, p] : next) evidence += p;
    if (evidence <= 0.0) throw ModelError("observation sequence has zero probability");
    for (auto& [_, p] : next) p /= evidence;
    dist_ = std::move(next);
  }

  std::vector<double> satisfaction_marginal(std::size_t table) const {
    std::vector<double> m(static_cast<std::size_t>(cfg_.sat_max) + 1, 0.0);
    for (const auto& [js, p] : dist_) m[static_cast<std::size_t>(js.tables[table].satisfaction)] += p;
    return m;
  }

  const std::map<JointState, double>& distribution() const { return dist_; }

 private:
  const RestaurantConfig& cfg_;
  std::map<JointState, double> dist_;
};

/// Largest deviation between the Bayes filter and forward enumeration along
/// one random trajectory of `length` actions.
inline double filter_deviation(const RestaurantConfig& cfg, std::uint64_t seed, int length) {
  Rng rng = make_stream(seed, Stream::Policy);
  Rng init = make_stream(seed, Stream::InitialState);
  Rng dyn = make_stream(seed, Stream::Dynamics);
  JointState truth = initial_joint_state(cfg, init);
  Belief belief = belief_init(cfg);
  ForwardEnumeration oracle(cfg);
  double worst = 0.0;
  for (int k = 0; k < length; ++k) {
    const auto legal = legal_actions(belief, cfg);
    const Action a = legal[uniform_index(rng, legal.size())];
    auto res = step_joint(truth, a, cfg, dyn);
    belief = belief_step(belief, a, res.duration, res.obs, cfg);
    oracle.step(a, res.next.robot, res.obs);
    for (std::size_t i = 0; i < cfg.n_tables; ++i) {
      const auto m = oracle.satisfaction_marginal(i);
      for (std::size_t s = 0; s < m.size(); ++s) worst = std::max(worst, std::abs(m[s] - belief.satisfaction[i][s]));
    }
    truth = std::move(res.next);
  }
  return worst;
}

inline CheckResult check_filter(const RestaurantConfig& cfg, int sequences = 100, int length = 20) {
  double worst = 0.0;
  for (int k = 0; k < sequences; ++k) worst = std::max(worst, filter_deviation(cfg, 7000 + k, length));
  std::ostringstream os;
  os << sequences << " sequences x " << length << " actions, max deviation = " << worst;
  return {"belief_filter_vs_enumeration", worst <= 1e-9, os.str()};
}

/// A random state reached by a walk of up to `max_walk` actions. Half of the
/// walks mix in first-come-first-served moves so that late dining stages show up.
inline JointState random_reachable_state(const RestaurantConfig& cfg, Rng& rng, int max_walk) {
  JointState js = initial_joint_state(cfg, rng);
  const auto steps = uniform_index(rng, static_cast<std::size_t>(max_walk) + 1);
  const bool guided = uniform01(rng) < 0.5;
  for (std::size_t k = 0; k < steps && !js.all_done(); ++k) {
    const auto legal = legal_actions(js, cfg);
    const Action a = guided && uniform01(rng) < 0.8 ? detail::fcfs_choice(js.robot, js.tables, cfg)
                                                    : legal[uniform_index(rng, legal.size())];
    js = step_joint(js, a, cfg, rng).next;
  }
  return js;
}

/// Largest gap between a per-table marginal of the joint distribution and the
/// table's own transition distribution.
inline double marginal_deviation(const JointState& js, const Action& a, const RestaurantConfig& cfg) {
  const auto joint = enumerate_joint_transitions(js, a, cfg);
  const int d = action_duration(js.robot, a, cfg);
  double worst = 0.0;
  for (std::size_t i = 0; i < js.tables.size(); ++i) {
    std::map<TableState, double> marginal;
    for (const auto& o : joint) marginal[o.next.tables[i]] += o.probability;
    std::map<TableState, double> single;
    for (const auto& e : transition_distribution(js.tables[i], i, a, d, cfg).entries) single[e.state] += e.probability;
    for (const auto& [s, p] : marginal) worst = std::max(worst, std::abs(p - (single.count(s) ? single.at(s) : 0.0)));
    for (const auto& [s, p] : single) worst = std::max(worst, std::abs(p - (marginal.count(s) ? marginal.at(s) : 0.0)));
  }
  return worst;
}

inline CheckResult check_marginals(const RestaurantConfig& cfg, int pairs = 500, std::uint64_t seed = 11) {
  Rng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < pairs; ++k) {
    const JointState js = random_reachable_state(cfg, rng, 60);
    const auto legal = legal_actions(js, cfg);
    worst = std::max(worst, marginal_deviation(js, legal[uniform_index(rng, legal.size())], cfg));
  }
  std::ostringstream os;
  os << pairs << " (state, action) pairs, max deviation = " << worst;
  return {"joint_marginal_consistency", worst <= 1e-9, os.str()};
}

struct SpotCase {
  std::string label;
  double expected;
  double actual;
};

/// The worked reward examples on the 11x11 three-table layout, using the
/// reward coefficients of `params`.
inline std::vector<SpotCase> reward_spot_table(const RewardParams& params) {
  RestaurantConfig cfg = scenarios::paper_3tables();
  cfg.reward = params;
  cfg = validate_config(cfg);
  RobotState robot{cfg.start()};
  std::vector<SpotCase> out;

  TableState t = initial_table_state(0);
  out.push_back({"serve, sat'=0", 30.0, reward(t, 0, Action::serve(0), t, robot, cfg)});

  out.push_back({"goto, distance 6", -2.0, reward(initial_table_state(5), 0, Action::go_to(0), initial_table_state(5),
                                                   robot, cfg)});

  TableState waiting = initial_table_state(1);
  waiting.t_since_request = 3;
  out.push_back({"noop, sat'=1, wait 3", -4.913, reward(waiting, 0, Action::no_op(), waiting, robot, cfg)});

  TableState before = initial_table_state(3);
  TableState after = initial_table_state(4);
  out.push_back({"noop, sat 3 -> 4", 1.0, reward(before, 0, Action::no_op(), after, robot, cfg)});

  out.push_back({"noop, sat 3 -> 3", 0.0, reward(before, 0, Action::no_op(), before, robot, cfg)});
  return out;
}

inline CheckResult check_reward_spot_table(const RewardParams& params) {
  CheckResult r{"reward_spot_table", true, ""};
  std::ostringstream os;
  for (const auto& c : reward_spot_table(params)) {
    const bool ok = std::abs(c.actual - c.expected) <= 1e-9;
    r.passed = r.passed && ok;
    if (!ok) os << c.label << ": expected " << c.expected << ", got " << c.actual << "; ";
  }
  r.detail = r.passed ? "5 cases exact" : os.str();
  return r;
}

/// Monte-Carlo frequency of a raised satisfaction after serving at `sat`.
inline double serve_raise_frequency(const RestaurantConfig& cfg, int sat, int samples, std::uint64_t seed) {
  Rng rng(seed);
  TableState t = initial_table_state(sat);
  int raised = 0;
  for (int k = 0; k < samples; ++k) {
    raised += sample_transition(t, 0, Action::serve(0), 1, cfg, rng).satisfaction == sat + 1 ? 1 : 0;
  }
  return static_cast<double>(raised) / samples;
}

inline CheckResult check_serve_split(const RestaurantConfig& cfg) {
  const double p3 = serve_raise_frequency(cfg, 3, 100000, 21);
  const double p0 = serve_raise_frequency(cfg, 0, 100000, 22);
  std::ostringstream os;
  os << "P(raise | sat=3) = " << p3 << ", P(raise | sat=0) = " << p0;
  return {"serve_response_split", std::abs(p3 - 0.6) <= 0.01 && std::abs(p0 - 0.3) <= 0.01, os.str()};
}

/// Ticks a fresh, maximally satisfied table; returns the t_since_request at
/// which satisfaction first reaches zero (-1 if it never does).
inline int decay_endpoint(const RestaurantConfig& cfg) {
  TableState t = initial_table_state(cfg.sat_max);
  for (int k = 0; k < 10 * cfg.tmax() && t.satisfaction > 0; ++k) t = tick_table(t, cfg);
  return t.satisfaction == 0 ? t.t_since_request : -1;
}

inline CheckResult check_decay_endpoint(const RestaurantConfig& cfg) {
  const int at = decay_endpoint(cfg);
  return {"decay_endpoint", at == cfg.tmax(),
          "satisfaction reaches 0 at t_since_request=" + std::to_string(at) + ", time_max=" +
              std::to_string(cfg.tmax())};
}

/// The full oracle suite. `small` is the exhaustively enumerable instance;
/// reward coefficients are taken from it.
inline std::vector<CheckResult> run_all(const RestaurantConfig& small) {
  RestaurantConfig three = scenarios::paper_3tables();
  three.reward = small.reward;
  three.support_cap = small.support_cap;
  three = validate_config(three);
  std::vector<CheckResult> out;
  out.push_back(check_reward_spot_table(small.reward));
  out.push_back(check_row_sums(small));
  out.push_back(check_serve_split(three));
  out.push_back(check_decay_endpoint(three));
  out.push_back(check_filter(small, 100, 20));
  out.push_back(check_marginals(three, 500));
  return out;
}

}  // namespace restaurant::verify
