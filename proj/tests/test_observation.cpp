#include <doctest.h>

#include <map>
#include <random>

#include "apobs/error.hpp"
#include "apobs/observation.hpp"
#include "oracles.hpp"

using namespace apobs;

namespace {

ObsSet S(const char* s) { return oracle::set_of(s); }

Obs O(char c) { return obs_from_char(c); }

// Word over the given APs from "p:A,q:N" style strings.
Word word(std::vector<std::string> aps, const std::vector<std::string>& prefix, const std::vector<std::string>& loop) {
  Word w;
  w.aps = std::move(aps);
  for (const auto& l : prefix) w.prefix.push_back(label_from_string(l, w.aps));
  for (const auto& l : loop) w.loop.push_back(label_from_string(l, w.aps));
  return w;
}

}  // namespace

TEST_CASE("involution") {
  CHECK(neg(Obs::A) == Obs::N);
  CHECK(neg(Obs::N) == Obs::A);
  CHECK(neg(Obs::Z) == Obs::E);
  CHECK(neg(Obs::E) == Obs::Z);
  CHECK(neg(S("AZ")) == S("NE"));
  CHECK(to_string(S("ZN")) == "ZN");
  CHECK(to_string(ObsSet{0}) == "");
  CHECK_THROWS_AS(obs_from_char('Q'), Error);
}

TEST_CASE("consistency cells") {
  CHECK(consistency(Connective::Until, O('A'), O('N')) == S("AN"));
  CHECK(consistency(Connective::And, O('A'), O('Z')) == S("Z"));
  CHECK(consistency(Connective::Release, O('N'), O('A')) == S("AN"));
  CHECK(consistency(Connective::Or, O('N'), O('N')) == S("N"));
}

TEST_CASE("consistency table, all cells") {
  for (const auto& row : oracle::consistency_table()) {
    CAPTURE(row.p1);
    CAPTURE(row.p2);
    const Obs a = O(row.p1), b = O(row.p2);
    CHECK(consistency(Connective::And, a, b) == S(row.and_));
    CHECK(consistency(Connective::Or, a, b) == S(row.or_));
    CHECK(consistency(Connective::Until, a, b) == S(row.until));
    CHECK(consistency(Connective::Release, a, b) == S(row.release));
  }
}

TEST_CASE("table totality and duality") {
  for (Obs a : kAllObs)
    for (Obs b : kAllObs) {
      for (auto c : {Connective::And, Connective::Or, Connective::Until, Connective::Release}) {
        const ObsSet s = consistency(c, a, b);
        CHECK(s != 0);
        CHECK((s & ~kAnyObs) == 0);
      }
      CHECK(__builtin_popcount(consistency(Connective::And, a, b)) == 1);
      CHECK(__builtin_popcount(consistency(Connective::Or, a, b)) == 1);
      CHECK(consistency(Connective::Or, a, b) == neg(consistency(Connective::And, neg(a), neg(b))));
      CHECK(consistency(Connective::Release, a, b) == neg(consistency(Connective::Until, neg(a), neg(b))));
    }
}

TEST_CASE("labels") {
  const std::vector<std::string> aps{"c", "r"};
  const Label l = label_from_string("c:A,r:N", aps);
  CHECK(label_get(l, 0) == Obs::A);
  CHECK(label_get(l, 1) == Obs::N);
  CHECK(label_to_string(l, aps) == "c:A,r:N");
  CHECK(label_from_string("r:N,c:A", aps) == l);
  CHECK(label_count(2) == 16);
  CHECK_THROWS_AS(label_from_string("c:A", aps), Error);
  CHECK_THROWS_AS(label_from_string("c:A,x:N", aps), Error);
  CHECK_THROWS_AS(label_from_string("c:Q,r:N", aps), Error);
}

TEST_CASE("signal word checks") {
  CHECK(check_signal_word(word({"p"}, {"p:A", "p:Z"}, {"p:N"})).ok);
  const auto bad = check_signal_word(word({"p"}, {"p:A"}, {"p:N"}));
  CHECK_FALSE(bad.ok);
  CHECK(bad.position == 0);
  CHECK_FALSE(check_signal_word(word({"p", "q"}, {}, {"p:Z,q:E", "p:E,q:Z"})).ok);
  // the loop seam counts too
  CHECK_FALSE(check_signal_word(word({"p"}, {}, {"p:A", "p:Z"})).ok);
  CHECK(check_signal_word(word({"p"}, {}, {"p:A", "p:Z", "p:E"})).ok);
  CHECK_FALSE(check_signal_word(word({"p"}, {"p:A"}, {})).ok);
}

TEST_CASE("normalize") {
  const Word w = normalize(word({"p"}, {"p:A", "p:A"}, {"p:A", "p:A"}));
  CHECK(w.prefix.empty());
  CHECK(w.loop.size() == 1);
  const Word v = normalize(word({"p"}, {"p:E", "p:Z"}, {"p:E", "p:Z"}));
  CHECK(v.prefix.empty());
  CHECK(v.loop.size() == 2);
  const Word u = normalize(word({"p"}, {"p:A", "p:Z"}, {"p:N"}));
  CHECK(u.prefix.size() == 2);
}
