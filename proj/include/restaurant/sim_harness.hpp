#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "restaurant/joint_model.hpp"
#include "restaurant/model_core.hpp"
#include "restaurant/observation_belief.hpp"
#include "restaurant/planners.hpp"
#include "restaurant/rng.hpp"

namespace restaurant {

struct StepRecord {
  long clock = 0;  // time at which the action started
  Action action;
  int duration = 1;
  std::vector<TableObservation> observation;  // after the step
  std::vector<int> true_satisfaction;         // after the step
  std::vector<std::vector<double>> belief;    // after the update
  std::vector<double> table_rewards;
  double reward = 0.0;
  double discounted_return = 0.0;  // cumulative, including this step
};

struct EpisodeTrace {
  std::uint64_t seed = 0;
  RestaurantConfig config;
  PolicySpec policy;
  std::vector<int> initial_satisfaction;
  std::vector<StepRecord> steps;
  double discounted_return = 0.0;
  long final_clock = 0;
};

namespace detail {

/// Drives one episode from `seed`; `next_action` picks each action.
template <class ActionSource>
EpisodeTrace simulate_episode(const RestaurantConfig& cfg, std::uint64_t seed, ActionSource&& next_action) {
  EpisodeTrace trace;
  trace.seed = seed;
  trace.config = cfg;
  Rng init_rng = make_stream(seed, Stream::InitialState);
  Rng dyn_rng = make_stream(seed, Stream::Dynamics);

  JointState js = initial_joint_state(cfg, init_rng);
  Belief belief = belief_init(cfg);
  for (const auto& t : js.tables) trace.initial_satisfaction.push_back(t.satisfaction);

  double ret = 0.0;
  while (js.clock < cfg.horizon && !js.all_done()) {
    const Action a = next_action(belief, trace.steps.size());
    auto res = step_joint(js, a, cfg, dyn_rng);
    belief = belief_step(belief, a, res.duration, res.obs, cfg);
    ret += std::pow(cfg.gamma, static_cast<double>(js.clock)) * res.reward;

    StepRecord rec;
    rec.clock = js.clock;
    rec.action = a;
    rec.duration = res.duration;
    rec.observation = res.obs;
    for (const auto& t : res.next.tables) rec.true_satisfaction.push_back(t.satisfaction);
    rec.belief = belief.satisfaction;
    rec.table_rewards = res.table_rewards;
    rec.reward = res.reward;
    rec.discounted_return = ret;
    trace.steps.push_back(std::move(rec));
    js = std::move(res.next);
  }
  trace.discounted_return = ret;
  trace.final_clock = js.clock;
  return trace;
}

}  // namespace detail

/// Runs one seeded episode until the horizon or until every table has left.
inline EpisodeTrace run_episode(const PolicySpec& policy, const RestaurantConfig& cfg, std::uint64_t seed) {
  policy.validate();
  Rng policy_rng = make_stream(seed, Stream::Policy);
  auto trace = detail::simulate_episode(cfg, seed, [&](const Belief& b, std::size_t) {
    return choose_action(policy, b, cfg, policy_rng);
  });
  trace.policy = policy;
  return trace;
}

/// Re-simulates a trace's recorded action sequence from its seed.
inline EpisodeTrace replay_episode(const EpisodeTrace& trace) {
  auto replayed = detail::simulate_episode(trace.config, trace.seed, [&](const Belief&, std::size_t k) {
    if (k >= trace.steps.size()) throw ModelError("replay ran past the recorded actions");
    return trace.steps[k].action;
  });
  replayed.policy = trace.policy;
  return replayed;
}

struct EpisodeSummary {
  double discounted_return = 0.0;
  std::vector<int> final_satisfaction;
  int max_wait = 0;
  std::size_t tables_done = 0;
};

inline EpisodeSummary summarize(const EpisodeTrace& trace) {
  EpisodeSummary s;
  s.discounted_return = trace.discounted_return;
  s.final_satisfaction = trace.steps.empty() ? trace.initial_satisfaction : trace.steps.back().true_satisfaction;
  for (const auto& step : trace.steps) {
    for (const auto& z : step.observation) s.max_wait = std::max(s.max_wait, z.t_since_request);
  }
  if (!trace.steps.empty()) {
    for (const auto& z : trace.steps.back().observation) s.tables_done += z.done() ? 1 : 0;
  }
  return s;
}

struct Metrics {
  std::size_t episodes = 0;
  double mean_return = 0.0;
  double std_return = 0.0;     // sample standard deviation
  double stderr_return = 0.0;  // std_return / sqrt(episodes)
  std::vector<double> mean_final_satisfaction;
  double mean_max_wait = 0.0;
  double completion_rate = 0.0;
  std::vector<double> returns;  // per episode, in seed order
};

inline Metrics aggregate(const std::vector<EpisodeSummary>& episodes, std::size_t n_tables) {
  Metrics m;
  m.episodes = episodes.size();
  if (episodes.empty()) return m;
  const auto n = static_cast<double>(episodes.size());
  m.mean_final_satisfaction.assign(n_tables, 0.0);
  double done = 0.0;
  for (const auto& e : episodes) {
    m.returns.push_back(e.discounted_return);
    m.mean_return += e.discounted_return;
    m.mean_max_wait += e.max_wait;
    done += static_cast<double>(e.tables_done);
    for (std::size_t i = 0; i < n_tables; ++i) m.mean_final_satisfaction[i] += e.final_satisfaction[i];
  }
  m.mean_return /= n;
  m.mean_max_wait /= n;
  for (auto& v : m.mean_final_satisfaction) v /= n;
  m.completion_rate = done / (n * static_cast<double>(n_tables));
  if (episodes.size() > 1) {
    double ss = 0.0;
    for (double r : m.returns) ss += (r - m.mean_return) * (r - m.mean_return);
    m.std_return = std::sqrt(ss / (n - 1.0));
  }
  m.stderr_return = m.std_return / std::sqrt(n);
  return m;
}

/// Evaluates a policy on seeds base_seed .. base_seed+episodes-1. Episodes are
/// farmed out to `threads` workers; results are identical for any thread count.
inline Metrics evaluate(const PolicySpec& policy, const RestaurantConfig& cfg, std::size_t episodes,
                        std::uint64_t base_seed, unsigned threads = 1) {
  if (episodes == 0) throw ConfigError("episodes must be at least 1");
  policy.validate();
  std::vector<EpisodeSummary> results(episodes);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < episodes; k = next++) {
      try {
        results[k] = summarize(run_episode(policy, cfg, base_seed + k));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(episodes)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return aggregate(results, cfg.n_tables);
}

/// Mean and standard error of the per-episode difference a - b (same seeds).
struct PairedDifference {
  double mean = 0.0;
  double standard_error = 0.0;
};

inline PairedDifference paired_difference(const Metrics& a, const Metrics& b) {
  PairedDifference d;
  const std::size_t n = std::min(a.returns.size(), b.returns.size());
  if (n == 0) return d;
  std::vector<double> diff(n);
  for (std::size_t k = 0; k < n; ++k) diff[k] = a.returns[k] - b.returns[k];
  for (double x : diff) d.mean += x;
  d.mean /= static_cast<double>(n);
  if (n > 1) {
    double ss = 0.0;
    for (double x : diff) ss += (x - d.mean) * (x - d.mean);
    d.standard_error = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
  }
  return d;
}

}  // namespace restaurant
