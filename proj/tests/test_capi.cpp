#include <doctest.h>

#include <cstdio>
#include <string>

#include "apobs/apobs.h"

namespace {

// Takes ownership of a library string.
std::string take(char* s) {
  std::string r = s ? s : "";
  apobs_string_free(s);
  return r;
}

apobs_system* drone(double eta = 0) {
  char* json = nullptr;
  REQUIRE(apobs_scenario_json("drone", eta, nullptr, &json) == APOBS_OK);
  apobs_system* sys = nullptr;
  const apobs_status st = apobs_system_from_json(json, &sys);
  apobs_string_free(json);
  REQUIRE(st == APOBS_OK);
  return sys;
}

}  // namespace

TEST_CASE("version and options") {
  CHECK(std::string(apobs_version()).size() > 0);
  apobs_verify_options opt;
  apobs_verify_options_init(&opt);
  CHECK(opt.repeat == 1);
  CHECK(opt.allow_unsound_tau == 0);
  CHECK(opt.single_change_filter != 0);
}

TEST_CASE("scenario and system handles") {
  apobs_system* sys = drone();
  CHECK(apobs_system_cells(sys) == 1089);
  CHECK(apobs_system_override(sys, 0.5, 0) == APOBS_OK);
  CHECK(apobs_system_cells(sys) == 67 * 67);
  CHECK(apobs_system_override(sys, 0, 0.25) == APOBS_OK);
  char* json = nullptr;
  REQUIRE(apobs_system_to_json(sys, &json) == APOBS_OK);
  const std::string text = take(json);
  CHECK(text.find("\"eta\": 0.5") != std::string::npos);
  CHECK(text.find("\"tau\": 0.25") != std::string::npos);
  apobs_system_free(sys);

  apobs_system* other = nullptr;
  CHECK(apobs_scenario_json("nowhere", 0, nullptr, &json) != APOBS_OK);
  CHECK(apobs_system_from_json("{", &other) == APOBS_ERR_PARSE);
  CHECK(other == nullptr);
  CHECK(std::string(apobs_last_error()).size() > 0);
  CHECK(apobs_system_from_file("/nonexistent/spec.json", &other) == APOBS_ERR_IO);
  apobs_system_free(nullptr);
}

TEST_CASE("formula automaton") {
  char* dot = nullptr;
  size_t states = 0;
  REQUIRE(apobs_formula_automaton("G F g", "dot", &dot, &states) == APOBS_OK);
  CHECK(states == 7);
  CHECK(take(dot).rfind("digraph", 0) == 0);
  char* json = nullptr;
  REQUIRE(apobs_formula_automaton("G r", "json", &json, nullptr) == APOBS_OK);
  CHECK(take(json).find("\"edges\"") != std::string::npos);
  CHECK(apobs_formula_automaton("a &", "dot", &dot, nullptr) == APOBS_ERR_PARSE);
  CHECK(apobs_formula_automaton("X a", "dot", &dot, nullptr) == APOBS_ERR_UNSUPPORTED);
  CHECK(apobs_formula_automaton("a", "svg", &dot, nullptr) == APOBS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("verify through the C interface") {
  apobs_system* sys = drone();
  apobs_report* r = nullptr;
  char* dot = nullptr;
  char* game = nullptr;
  REQUIRE(apobs_verify_export(sys, "G r", nullptr, &r, &dot, &game) == APOBS_OK);
  CHECK(apobs_report_verified(r) == 1);
  CHECK(apobs_report_automaton_states(r) == 2);
  CHECK(apobs_report_model_states(r) == 1089);
  CHECK(apobs_report_game_player(r) > 0);
  CHECK(apobs_report_game_opponent(r) > 0);
  CHECK(apobs_report_tau_pass(r) == 1);
  double a = -1, m = -1, g = -1, s = -1, t = -1;
  apobs_report_times(r, &a, &m, &g, &s, &t);
  CHECK(a >= 0);
  CHECK(t >= s);
  CHECK(apobs_report_total_time(r) == t);
  apobs_report_times(r, nullptr, nullptr, nullptr, nullptr, nullptr);
  CHECK(take(dot).rfind("digraph", 0) == 0);
  CHECK(take(game).find("\"verdict\"") != std::string::npos);

  char* json = nullptr;
  REQUIRE(apobs_report_json(r, &json) == APOBS_OK);
  const std::string text = take(json);
  apobs_report* back = nullptr;
  REQUIRE(apobs_report_from_json(text.c_str(), &back) == APOBS_OK);
  CHECK(apobs_report_automaton_states(back) == 2);
  char* csv = nullptr;
  REQUIRE(apobs_report_csv_row(back, 1, &csv) == APOBS_OK);
  const std::string rows = take(csv);
  CHECK(rows.find('\n') < rows.size() - 1);
  apobs_report_free(back);
  apobs_report_free(r);

  // failing stages
  r = nullptr;
  CHECK(apobs_verify(sys, "F X r", nullptr, &r) == APOBS_ERR_UNSUPPORTED);
  CHECK(std::string(apobs_last_error_stage()) == "parse");
  CHECK(r == nullptr);
  CHECK(apobs_system_override(sys, 0, 10) == APOBS_OK);
  CHECK(apobs_verify(sys, "G r & F c", nullptr, &r) == APOBS_ERR_TAU);
  CHECK(std::string(apobs_last_error_stage()) == "tau");
  apobs_verify_options opt;
  apobs_verify_options_init(&opt);
  opt.allow_unsound_tau = 1;
  REQUIRE(apobs_verify(sys, "G r & F c", &opt, &r) == APOBS_OK);
  CHECK(apobs_report_tau_pass(r) == 0);
  apobs_report_free(r);
  CHECK(apobs_verify(nullptr, "G r", nullptr, &r) == APOBS_ERR_INVALID_ARGUMENT);
  apobs_system_free(sys);
}

TEST_CASE("benchmark rows") {
  CHECK(apobs_bench_count() == 9);
  CHECK(std::string(apobs_bench_formula(0)) == "G r");
  size_t states = 0, p = 0, o = 0;
  CHECK(apobs_bench_paper_sizes(0, &states, &p, &o));
  CHECK(states == 2);
  CHECK(p == 651);  // table column order: Player first
  CHECK(o == 642);
  double a = 0, g = 0, s = 0, t = 0;
  CHECK(apobs_bench_paper_times(8, &a, &g, &s, &t));
  CHECK(t > 0);
  CHECK_FALSE(apobs_bench_paper_sizes(9, &states, &p, &o));
  CHECK(apobs_bench_formula(9) == nullptr);
}
