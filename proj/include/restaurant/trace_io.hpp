#pragma once

#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "restaurant/config_io.hpp"
#include "restaurant/sim_harness.hpp"

namespace restaurant {

inline constexpr int kTraceSchemaVersion = 1;
inline constexpr int kMetricsSchemaVersion = 1;

inline json observation_to_json(const TableObservation& z) {
  return {{"food", z.food},
          {"water", z.water},
          {"cooking_status", z.cooking_status},
          {"current_request", z.current_request},
          {"hand_raise", z.hand_raise},
          {"t_since_served", z.t_since_served},
          {"t_since_food_ready", z.t_since_food_ready},
          {"t_since_request", z.t_since_request}};
}

inline json action_to_json(const Action& a) {
  static const char* kinds[] = {"serve", "goto", "food_not_ready", "will_return", "noop"};
  json j{{"kind", kinds[static_cast<int>(a.kind)]}};
  j["table"] = a.is_no_op() ? json(nullptr) : json(a.table);
  return j;
}

/// JSON-lines trace: a header line, one line per step, a summary line.
inline void write_trace_jsonl(std::ostream& out, const EpisodeTrace& trace) {
  json header{{"schema_version", kTraceSchemaVersion},
              {"record", "header"},
              {"seed", trace.seed},
              {"policy", to_string(trace.policy)},
              {"config", config_to_json(trace.config)},
              {"initial_satisfaction", trace.initial_satisfaction}};
  out << header.dump() << '\n';
  for (const auto& s : trace.steps) {
    json obs = json::array();
    for (const auto& z : s.observation) obs.push_back(observation_to_json(z));
    json line{{"schema_version", kTraceSchemaVersion},
              {"record", "step"},
              {"clock", s.clock},
              {"action", action_to_json(s.action)},
              {"duration", s.duration},
              {"observation", obs},
              {"true_satisfaction", s.true_satisfaction},
              {"belief", s.belief},
              {"table_rewards", s.table_rewards},
              {"reward", s.reward},
              {"discounted_return", s.discounted_return}};
    out << line.dump() << '\n';
  }
  json summary{{"schema_version", kTraceSchemaVersion},
               {"record", "summary"},
               {"steps", trace.steps.size()},
               {"final_clock", trace.final_clock},
               {"discounted_return", trace.discounted_return}};
  out << summary.dump() << '\n';
}

inline std::string format_number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline std::string metrics_csv_header() {
  return "schema_version,policy,episodes,base_seed,mean_return,std_return,stderr_return,"
         "mean_final_satisfaction,mean_max_wait,completion_rate";
}

/// One CSV row; per-table final satisfactions are joined with ';'.
inline std::string metrics_csv_row(const std::string& policy, std::uint64_t base_seed, const Metrics& m) {
  std::ostringstream os;
  os << kMetricsSchemaVersion << ',' << policy << ',' << m.episodes << ',' << base_seed << ','
     << format_number(m.mean_return) << ',' << format_number(m.std_return) << ',' << format_number(m.stderr_return)
     << ',';
  for (std::size_t i = 0; i < m.mean_final_satisfaction.size(); ++i) {
    if (i) os << ';';
    os << format_number(m.mean_final_satisfaction[i]);
  }
  os << ',' << format_number(m.mean_max_wait) << ',' << format_number(m.completion_rate);
  return os.str();
}

}  // namespace restaurant
