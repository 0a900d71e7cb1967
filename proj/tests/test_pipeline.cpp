#include <doctest.h>

#include <cmath>
#include <numbers>

#include "apobs/error.hpp"
#include "apobs/pipeline.hpp"

using namespace apobs;

namespace {

SystemSpec line_system(double p_from) {
  SystemSpec s;
  s.dim = 1;
  s.domain = {{0.0, 10.0}};
  s.eta = 1;
  s.tau = 1;
  s.x_in = {5};
  s.boundary = Boundary::Clamp;
  Mode m;
  m.heading = false;
  // 1.5 keeps the closed reach box off cell borders, so every step advances
  m.velocity = {1.5};
  m.v = 1.5;
  s.modes.assign(11, m);
  s.aps["p"] = {{{0, true, p_from}}};
  return s;
}

std::string failing_stage(const SystemSpec& s, const std::string& f, VerifyOptions opt = {}) {
  try {
    verify(s, f, opt);
  } catch (const StageError& e) {
    return e.stage();
  }
  return "";
}

}  // namespace

TEST_CASE("one dimensional verdicts") {
  // p holds on the whole line
  const Report ok = verify(line_system(-1), "G p");
  CHECK(ok.verdict == "VERIFIED");
  CHECK(ok.model_states == 11);
  CHECK(ok.automaton_states == 2);
  CHECK(ok.w0_size > 0);
  const Report no = verify(line_system(-1), "G !p");
  CHECK(no.verdict == "INCONCLUSIVE");
  // only cell 0 is mixed, and it lies behind the start
  CHECK(verify(line_system(0.2), "G p").verified());
  CHECK(verify(line_system(0.2), "F G p").verified());
  // crossing the mixed cell 7 lets the Opponent pick E twice in a row, which
  // no automaton state reads: the abstraction forgets p inside a cell
  CHECK_FALSE(verify(line_system(7.2), "F G p").verified());
  CHECK_FALSE(verify(line_system(7.2), "F !p").verified());
}

TEST_CASE("stage names on failure") {
  const SystemSpec drone = drone_scenario();
  CHECK(failing_stage(drone, "a &") == "parse");
  CHECK(failing_stage(drone, "F X r") == "parse");
  try {
    verify(drone, "G q");
    FAIL("no error");
  } catch (const StageError& e) {
    CHECK(e.kind() == ErrorKind::AlphabetMismatch);
  }
  SystemSpec broken = drone;
  broken.modes.pop_back();
  CHECK(failing_stage(broken, "G r") == "spec");
  SystemSpec slow = drone;
  slow.tau = 10;
  CHECK(failing_stage(slow, "G r & F c") == "tau");
  VerifyOptions unsound;
  unsound.allow_unsound_tau = true;
  CHECK(failing_stage(slow, "G r & F c", unsound).empty());
}

TEST_CASE("drone scenario") {
  const SystemSpec s = drone_scenario();
  CHECK(s.modes.size() == 1089);
  CHECK(s.aps.size() == 5);
  const Report r = verify(s, "G r");
  CHECK(r.model_states == 1089);
  CHECK(r.automaton_states == 2);
  CHECK(r.tau_pass);

  SystemSpec fine = s;
  apply_overrides(fine, 0.5, std::nullopt);
  CHECK(fine.modes.size() == 67 * 67);
  CHECK(fine.eta == 0.5);
  VerifyOptions unsound;
  unsound.allow_unsound_tau = true;
  CHECK(verify(fine, "G r", unsound).model_states == 4489);
}

TEST_CASE("patrol headings") {
  // clockwise square around the origin
  CHECK(patrol_heading(0, 13, 13, 1) == doctest::Approx(0.0));
  CHECK(std::abs(patrol_heading(0, -13, 13, 1)) == doctest::Approx(std::numbers::pi));
}

TEST_CASE("benchmark table") {
  const auto& rows = paper_bench();
  CHECK(rows.size() == 9);
  CHECK(std::string(rows.front().formula) == "G r");
  for (const auto& row : rows) {
    CHECK(row.automaton_states > 0);
    CHECK(row.total_time > 0);
  }
}

TEST_CASE("repeat averages timings and keeps counts") {
  VerifyOptions opt;
  opt.repeat = 3;
  const Report r = verify(line_system(-1), "G p", opt);
  CHECK(r.repeat == 3);
  CHECK(r.verdict == "VERIFIED");
  CHECK(r.total_time >= r.solve_time);
}
