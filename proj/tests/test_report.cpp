#include <doctest.h>

#include <cmath>
#include <limits>

#include "apobs/error.hpp"
#include "apobs/json_io.hpp"
#include "apobs/pipeline.hpp"
#include "apobs/report.hpp"

using namespace apobs;

namespace {

Report sample() {
  Report r;
  r.formula = "G r & F c";
  r.nnf = "((false R r) & (true U c))";
  r.aps = {"c", "r"};
  r.verdict = "VERIFIED";
  r.automaton_states = 12;
  r.model_states = 1089;
  r.model_sink = true;
  r.tau = 1.0;
  r.tau_max = 1.0 / 3.0;
  r.v_max = 4.1;
  r.game_player = 12345;
  r.solve_time = 0.125;
  r.repeat = 3;
  r.config_hash = fnv1a_hex("x");
  return r;
}

}  // namespace

TEST_CASE("report JSON round trip") {
  const Report r = sample();
  const Report back = report_from_json(report_to_json(r));
  CHECK(back == r);
  CHECK(back.tau_max == r.tau_max);
  CHECK(back.aps == r.aps);
  CHECK(back.verified());
}

TEST_CASE("infinite bounds are written as null") {
  Report r = sample();
  r.tau_max = std::numeric_limits<double>::infinity();
  const std::string text = report_to_json(r);
  CHECK(text.find("\"tau_max\": null") != std::string::npos);
  CHECK(std::isinf(report_from_json(text).tau_max));
}

TEST_CASE("malformed reports") {
  CHECK_THROWS_AS(report_from_json("{"), Error);
  CHECK_THROWS_AS(report_from_json("{}"), Error);
  std::string text = report_to_json(sample());
  text.replace(text.find("apobs-report/1"), 14, "apobs-report/9");
  CHECK_THROWS_AS(report_from_json(text), Error);
}

TEST_CASE("CSV round trip") {
  Report a = sample(), b = sample();
  b.formula = "F (g & F p)";  // no commas needed, quoting still exercised below
  b.verdict = "INCONCLUSIVE";
  b.aps = {"g", "p"};
  a.formula = "a, \"quoted\"";
  const std::string csv = reports_to_csv({a, b});
  CHECK(csv.rfind(csv_header(), 0) == 0);
  const auto back = reports_from_csv(csv);
  REQUIRE(back.size() == 2);
  CHECK(back[0] == a);
  CHECK(back[1] == b);
}

TEST_CASE("fnv1a") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("spec JSON round trip") {
  for (const SystemSpec& s : {drone_scenario(), drone_scenario({.eta = 0.5, .r_mode = "and", .field = "uniform", .heading = 0.4})}) {
    const std::string text = spec_to_json(s);
    const SystemSpec back = spec_from_json(text);
    CHECK(spec_to_json(back) == text);
    CHECK(back.modes.size() == s.modes.size());
    CHECK(back.aps.size() == s.aps.size());
    CHECK(back.eta == s.eta);
  }
  CHECK_THROWS_AS(spec_from_json("[1, 2]"), Error);
}
