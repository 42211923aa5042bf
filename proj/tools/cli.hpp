#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "restaurant/restaurant.hpp"

namespace restaurant::cli {

/// Exit statuses of every subcommand.
inline constexpr int kOk = 0;
inline constexpr int kInternalError = 1;
inline constexpr int kConfigError = 2;

struct Invocation {
  std::string subcommand;
  std::optional<std::string> config_path;
  std::optional<std::string> scenario;
  std::optional<std::string> out_path;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> policies;
  std::size_t episodes = 100;
  std::vector<std::string> overrides;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Builds the config: file or preset, then overrides, then --seed.
inline RestaurantConfig resolve_config(const Invocation& inv, const std::string& default_scenario) {
  json doc;
  if (inv.config_path) {
    doc = load_json_file(*inv.config_path);
  } else {
    doc = config_to_json(scenarios::by_name(inv.scenario.value_or(default_scenario)));
  }
  for (const auto& o : inv.overrides) apply_override(doc, o);
  RestaurantConfig cfg = config_from_json(doc);
  if (inv.seed) cfg.seed = *inv.seed;
  return validate_config(cfg);
}

inline unsigned worker_count(const Invocation& inv) {
  if (inv.threads > 0) return inv.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

inline PolicySpec single_policy(const Invocation& inv, const std::string& fallback) {
  if (inv.policies.size() > 1) throw ConfigError("this subcommand takes a single --policy");
  return parse_policy(inv.policies.empty() ? fallback : inv.policies.front());
}

inline std::ofstream open_output(const std::string& path, std::ios::openmode mode) {
  std::ofstream out(path, mode);
  if (!out) throw ConfigError("cannot write output file '" + path + "'");
  return out;
}

inline int cmd_run(const Invocation& inv, std::ostream& out) {
  const auto cfg = resolve_config(inv, "paper-3tables");
  const auto policy = single_policy(inv, "greedy");
  const auto trace = run_episode(policy, cfg, cfg.seed);
  const std::string path = inv.out_path.value_or("trace.jsonl");
  auto file = open_output(path, std::ios::out | std::ios::trunc);
  write_trace_jsonl(file, trace);
  out << "policy " << to_string(policy) << "\n"
      << "steps " << trace.steps.size() << "\n"
      << "discounted_return " << format_number(trace.discounted_return) << "\n"
      << "trace " << path << "\n";
  return kOk;
}

inline void append_csv(const std::string& path, const std::string& header, const std::vector<std::string>& rows,
                       bool truncate) {
  const bool fresh = truncate || !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  auto file = open_output(path, truncate ? std::ios::out | std::ios::trunc : std::ios::out | std::ios::app);
  if (fresh) file << header << "\n";
  for (const auto& r : rows) file << r << "\n";
}

inline int cmd_evaluate(const Invocation& inv, std::ostream& out) {
  const auto cfg = resolve_config(inv, "paper-3tables");
  const auto policy = single_policy(inv, "greedy");
  const auto metrics = evaluate(policy, cfg, inv.episodes, cfg.seed, worker_count(inv));
  const std::string row = metrics_csv_row(to_string(policy), cfg.seed, metrics);
  append_csv(inv.out_path.value_or("metrics.csv"), metrics_csv_header(), {row}, false);
  out << metrics_csv_header() << "\n" << row << "\n";
  return kOk;
}

inline int cmd_compare(const Invocation& inv, std::ostream& out) {
  const auto cfg = resolve_config(inv, "paper-3tables");
  std::vector<std::string> names = inv.policies;
  if (names.empty()) names = {"random", "fcfs", "greedy"};
  std::vector<PolicySpec> specs;
  for (const auto& n : names) specs.push_back(parse_policy(n));

  std::vector<Metrics> results;
  for (const auto& p : specs) results.push_back(evaluate(p, cfg, inv.episodes, cfg.seed, worker_count(inv)));

  std::vector<std::string> rows;
  for (std::size_t k = 0; k < specs.size(); ++k) {
    const auto diff = paired_difference(results[k], results.front());
    rows.push_back(metrics_csv_row(to_string(specs[k]), cfg.seed, results[k]) + "," + format_number(diff.mean) +
                   "," + format_number(diff.standard_error));
  }
  append_csv(inv.out_path.value_or("compare.csv"),
             metrics_csv_header() + ",paired_diff_vs_first,paired_stderr_vs_first", rows, true);

  std::vector<std::size_t> order(specs.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return results[a].mean_return > results[b].mean_return; });
  out << "rank policy mean_return stderr\n";
  for (std::size_t r = 0; r < order.size(); ++r) {
    const auto& m = results[order[r]];
    out << r + 1 << " " << to_string(specs[order[r]]) << " " << format_number(m.mean_return) << " "
        << format_number(m.stderr_return) << "\n";
  }
  for (std::size_t r = 0; r + 1 < order.size(); ++r) {
    const auto d = paired_difference(results[order[r]], results[order[r + 1]]);
    out << to_string(specs[order[r]]) << " - " << to_string(specs[order[r + 1]]) << " = " << format_number(d.mean)
        << " (paired stderr " << format_number(d.standard_error) << ")\n";
  }
  return kOk;
}

inline int cmd_verify(const Invocation& inv, std::ostream& out) {
  const auto cfg = resolve_config(inv, "small");
  const auto checks = verify::run_all(cfg);
  const verify::CheckResult* first_failure = nullptr;
  for (const auto& c : checks) {
    out << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail << "\n";
    if (!c.passed && !first_failure) first_failure = &c;
  }
  if (first_failure) {
    out << "verification failed: " << first_failure->name << "\n";
    return kInternalError;
  }
  out << "all " << checks.size() << " checks passed\n";
  return kOk;
}

inline int dispatch(const Invocation& inv, std::ostream& out) {
  if (inv.subcommand == "run") return cmd_run(inv, out);
  if (inv.subcommand == "evaluate") return cmd_evaluate(inv, out);
  if (inv.subcommand == "compare") return cmd_compare(inv, out);
  if (inv.subcommand == "verify") return cmd_verify(inv, out);
  throw ConfigError("unknown subcommand '" + inv.subcommand + "'");
}

/// Parses argv and runs one subcommand. Returns the process exit status.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Restaurant waiting-tables POMDP: simulate, evaluate, compare and verify planners"};
  app.require_subcommand(1, 1);
  Invocation inv;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", inv.config_path, "JSON config file");
    sub->add_option("--scenario", inv.scenario, "Built-in preset: paper-3tables, two-tables, small");
    sub->add_option("--out", inv.out_path, "Output file");
    sub->add_option("--seed", inv.seed, "Seed (episode seed for run, base seed otherwise)");
    sub->add_option("--override", inv.overrides, "key=value config patch (repeatable, dotted keys for reward.*)");
  };
  auto* run_cmd = app.add_subcommand("run", "Simulate one episode and write its JSONL trace");
  auto* eval_cmd = app.add_subcommand("evaluate", "Evaluate one policy and append a CSV metrics row");
  auto* cmp_cmd = app.add_subcommand("compare", "Evaluate several policies on shared seeds");
  auto* ver_cmd = app.add_subcommand("verify", "Run the exhaustive oracle checks on the small instance");
  for (auto* sub : {run_cmd, eval_cmd, cmp_cmd, ver_cmd}) add_common(sub);
  for (auto* sub : {run_cmd, eval_cmd, cmp_cmd}) {
    sub->add_option("--policy", inv.policies, "NAME[:k=v,...] (random, fcfs, greedy, mcts, expectimax)");
  }
  for (auto* sub : {eval_cmd, cmp_cmd}) {
    sub->add_option("--episodes", inv.episodes, "Episode count")->check(CLI::PositiveNumber);
    sub->add_option("--threads", inv.threads, "Worker threads (0: all cores)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
  for (auto* sub : app.get_subcommands()) inv.subcommand = sub->get_name();
  if (inv.config_path && inv.scenario) {
    err << "error: --config and --scenario are mutually exclusive\n";
    return kConfigError;
  }

  try {
    return dispatch(inv, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
}

}  // namespace restaurant::cli
