#pragma once

// Verification report in the column layout of the benchmark table, with JSON
// and CSV serialization.

#include <cstdint>
#include <string>
#include <vector>

namespace apobs {

inline constexpr const char* kReportSchema = "apobs-report/1";

struct Report {
  std::string schema = kReportSchema;
  std::string formula;
  std::string nnf;
  std::vector<std::string> aps;
  std::string verdict;  // VERIFIED or INCONCLUSIVE

  // automaton
  std::uint64_t closure_size = 0;
  std::uint64_t subformulas = 0;  // without true/false
  std::uint64_t consistent_valuations = 0;
  std::uint64_t gba_states = 0;
  std::uint64_t automaton_states = 0;
  std::uint64_t automaton_edges = 0;

  // symbolic model
  std::uint64_t model_states = 0;
  std::uint64_t model_transitions = 0;
  bool model_sink = false;

  // tau bound
  bool tau_pass = false;
  bool tau_overridden = false;
  double tau = 0.0;
  double tau_max = 0.0;
  double v_max = 0.0;

  // game
  std::uint64_t game_player = 0;
  std::uint64_t game_opponent = 0;
  std::uint64_t game_edges = 0;
  std::uint64_t stuck_player = 0;
  std::uint64_t stuck_opponent = 0;
  std::uint64_t w0_size = 0;
  std::uint64_t recursive_calls = 0;
  std::uint64_t attractors = 0;

  // wall-clock seconds, averaged over `repeat` runs
  double automaton_time = 0.0;
  double model_time = 0.0;
  double game_time = 0.0;
  double solve_time = 0.0;
  double total_time = 0.0;
  int repeat = 1;

  std::string config_hash;

  bool verified() const { return verdict == "VERIFIED"; }
};

bool operator==(const Report& a, const Report& b);

std::string report_to_json(const Report& r, int indent = 2);
Report report_from_json(const std::string& text);

std::string csv_header();
std::string csv_row(const Report& r);
/// Header line plus one row per report.
std::string reports_to_csv(const std::vector<Report>& rs);
std::vector<Report> reports_from_csv(const std::string& text);

/// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a_hex(const std::string& data);

}  // namespace apobs
