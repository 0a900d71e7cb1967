#include <doctest.h>

#include <random>

#include "apobs/automaton.hpp"
#include "apobs/error.hpp"
#include "apobs/run_oracle.hpp"
#include "apobs/signal.hpp"
#include "oracles.hpp"

using namespace apobs;

namespace {

Label L(char c) { return static_cast<Label>(obs_from_char(c)); }

Word one_ap(const std::string& ap, const std::string& prefix, const std::string& loop) {
  Word w;
  w.aps = {ap};
  for (char c : prefix) w.prefix.push_back(L(c));
  for (char c : loop) w.loop.push_back(L(c));
  return w;
}

std::size_t nba_size(const char* f) { return formula_automaton(to_nnf(f)).nba.size(); }

// Random valid word over the given APs, taken from a random grid signal.
Word random_word(std::mt19937_64& rng, const std::vector<std::string>& aps) {
  return chop(oracle::to_piecewise(oracle::random_grid_signal(rng, aps)), 1.0, aps);
}

}  // namespace

TEST_CASE("automaton sizes that match the reference table") {
  CHECK(nba_size("G r") == 2);
  CHECK(nba_size("F p") == 5);
  CHECK(nba_size("c U b") == 7);
  CHECK(nba_size("b R c") == 7);
  CHECK(nba_size("F G r") == 6);
  CHECK(nba_size("G F g") == 7);
}

TEST_CASE("atomic formula") {
  const SubformulaSet sub(to_nnf("p"));
  const Automaton a = build_gba(sub);
  CHECK(a.size() == 5);
  std::set<Label> from_q0;
  for (const auto& [l, t] : a.out[0]) from_q0.insert(l);
  CHECK(from_q0 == std::set<Label>{L('A'), L('Z')});
  CHECK(a.accepting.empty());
}

TEST_CASE("consistent valuations of true U g") {
  const SubformulaSet sub(to_nnf("F g"));
  // pairs (g, F g) allowed by the Until cells with left operand A
  std::size_t expect = 0;
  for (Obs g : kAllObs) expect += static_cast<std::size_t>(__builtin_popcount(consistency(Connective::Until, Obs::A, g)));
  CHECK(consistent_valuations(sub).size() == expect);
  CHECK(expect == 6);
}

TEST_CASE("transition rules and labels of the raw automaton") {
  for (const char* f : {"a U b", "G F a", "(a R b) | F a", "G (a | F b)"}) {
    const SubformulaSet sub(to_nnf(f));
    const Automaton a = build_gba(sub);
    const auto root = static_cast<std::size_t>(sub.root());
    for (std::size_t s = 0; s < a.size(); ++s)
      for (const auto& [l, t] : a.out[s]) {
        const Valuation& v = a.valuations[static_cast<std::size_t>(t)].front();
        // label equals the target's atoms
        for (std::size_t i = 0; i < a.aps.size(); ++i)
          CHECK(label_get(l, i) == v[static_cast<std::size_t>(sub.ap_entry(i))]);
        if (s == 0) {
          CHECK(holds_at_start(v[root]));
        } else {
          const Valuation& u = a.valuations[s].front();
          for (std::size_t k = 0; k < sub.size(); ++k) CHECK(holds_at_end(u[k]) == holds_at_start(v[k]));
        }
      }
    // every valuation satisfies the table
    for (std::size_t s = 1; s < a.size(); ++s) CHECK(is_consistent(sub, a.valuations[s].front()));
    CHECK(a.accepting.size() == static_cast<std::size_t>(std::count_if(sub.entries().begin(), sub.entries().end(), [](const Subformula& e) {
            return e.op == NnfOp::Until || e.op == NnfOp::Release;
          })));
  }
}

TEST_CASE("enumeration strategies agree") {
  std::mt19937_64 rng(3);
  int tried = 0;
  while (tried < 60) {
    const auto f = to_nnf(*oracle::random_formula(rng, {"a", "b", "c"}, 4));
    const SubformulaSet sub(f);
    if (sub.nontrivial_size() > 6) continue;
    ++tried;
    CHECK(consistent_valuations(sub, Enumeration::BottomUp) == consistent_valuations(sub, Enumeration::BruteForce));
  }
}

TEST_CASE("GF g") {
  const auto fa = formula_automaton(to_nnf("G F g"));
  CHECK(fa.gba.size() == 4);
  CHECK(fa.gba.accepting.size() == 2);
  CHECK(fa.nba.size() == 7);
  CHECK(fa.closure_size == 5);
  CHECK(fa.nontrivial_size == 3);
  // already pruned and minimal
  CHECK(prune(fa.gba).size() == 4);
  CHECK(minimize(fa.gba).size() == 4);
  // A and E of g are merged into one state
  bool merged = false;
  for (const auto& vs : fa.gba.valuations) merged = merged || vs.size() == 2;
  CHECK(merged);

  CHECK(accepts_lasso(fa.gba, one_ap("g", "", "A")));
  CHECK(accepts_lasso(fa.nba, one_ap("g", "", "A")));
  CHECK_FALSE(accepts_lasso(fa.gba, one_ap("g", "Z", "N")));
  CHECK_FALSE(accepts_lasso(fa.nba, one_ap("g", "Z", "N")));
  CHECK(accepts_lasso(fa.nba, one_ap("g", "N", "EZ")));
  CHECK_THROWS_AS(accepts_lasso(fa.nba, one_ap("g", "A", "N")), Error);
  try {
    accepts_lasso(fa.nba, one_ap("h", "", "A"));
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::AlphabetMismatch);
  }
}

TEST_CASE("prune") {
  const SubformulaSet gp(to_nnf("G p"));
  const Automaton raw = build_gba(gp);
  CHECK(raw.size() == 7);
  const Automaton pruned = prune(restrict_reachable(raw));
  REQUIRE(pruned.size() == 2);
  CHECK(pruned.out[0] == std::vector<std::pair<Label, int>>{{L('A'), 1}});
  CHECK(pruned.out[1] == std::vector<std::pair<Label, int>>{{L('A'), 1}});

  // empty language: only q0 is left
  const auto empty = formula_automaton(to_nnf("a & !a"));
  CHECK(empty.gba.size() == 1);
  CHECK(empty.nba.size() == 1);
  const auto never = formula_automaton(to_nnf("false"));
  CHECK(never.nba.size() == 1);
}

TEST_CASE("minimize keeps distinguishable states") {
  Automaton a;
  a.aps = {"p"};
  a.names = {"q0", "x", "y"};
  a.valuations = {{}, {{Obs::A}}, {{Obs::N}}};
  a.out = {{{L('A'), 1}, {L('N'), 2}}, {{L('A'), 1}}, {{L('N'), 2}}};
  a.accepting = {{0, 1, 1}};
  CHECK(minimize(a).size() == 3);
  a.out = {{{L('A'), 1}, {L('A'), 2}}, {{L('A'), 1}, {L('A'), 2}}, {{L('A'), 1}, {L('A'), 2}}};
  CHECK(minimize(a).size() == 2);
  a.accepting = {{0, 1, 0}};
  CHECK(minimize(a).size() == 3);
}

TEST_CASE("degeneralize with a single set is a copy") {
  const auto fa = formula_automaton(to_nnf("F p"));
  REQUIRE(fa.gba.accepting.size() == 1);
  const Automaton d = degeneralize(fa.gba);
  CHECK(d.size() == fa.gba.size());
  CHECK(d.edge_count() == fa.gba.edge_count());
  std::size_t acc = 0, acc_src = 0;
  for (std::size_t s = 0; s < d.size(); ++s) acc += d.accepting[0][s] ? 1 : 0;
  for (std::size_t s = 0; s < fa.gba.size(); ++s) acc_src += fa.gba.accepting[0][s] ? 1 : 0;
  CHECK(acc == acc_src);
}

TEST_CASE("pipeline stages preserve the language") {
  std::mt19937_64 rng(77);
  const std::vector<const char*> formulas = {"G F a",       "a U b",     "F (a & F b)", "G a & (F b | F c)",
                                             "(a R b) U c", "F G !a",    "G (a | F b)", "b R (F a & G c)"};
  for (const char* text : formulas) {
    CAPTURE(text);
    const SubformulaSet sub(to_nnf(text));
    const Automaton raw = build_gba(sub);
    const Automaton pruned = prune(restrict_reachable(raw));
    const Automaton small = minimize(pruned);
    const Automaton nba = degeneralize(small);
    int accepted = 0;
    for (int i = 0; i < 500 / static_cast<int>(formulas.size()) + 1; ++i) {
      const Word w = random_word(rng, {"a", "b", "c"});
      const bool r = accepts_lasso(raw, w);
      CHECK(accepts_lasso(pruned, w) == r);
      CHECK(accepts_lasso(small, w) == r);
      CHECK(accepts_lasso(nba, w) == r);
      accepted += r;
    }
    CHECK(accepted > 0);
  }
}

TEST_CASE("run oracle gives the accepting run of the pruned automaton") {
  std::mt19937_64 rng(8);
  for (const char* text : {"a U b", "G F a", "F (a & G b)", "a R (b | F a)"}) {
    const SubformulaSet sub(to_nnf(text));
    const auto fa = formula_automaton(to_nnf(text));
    for (int i = 0; i < 100; ++i) {
      const Word w = random_word(rng, {"a", "b"});
      // accepted iff the oracle run holds the formula at the first slice
      const auto run = unique_run_oracle(w, sub);
      CHECK(accepts_lasso(fa.nba, w) == holds_at_start(run.at(0)[static_cast<std::size_t>(sub.root())]));
    }
  }
}

TEST_CASE("exports") {
  const auto fa = formula_automaton(to_nnf("G F g"));
  const std::string dot = to_dot(fa.gba);
  CHECK(dot.rfind("digraph", 0) == 0);
  CHECK(dot.find("g:Z") != std::string::npos);
  const std::string json = to_json(fa.nba);
  CHECK(json.find("\"initial\": \"q0\"") != std::string::npos);
  CHECK(json.find("\"edges\"") != std::string::npos);
}

TEST_CASE("scc ids") {
  int count = 0;
  const auto ids = scc_ids({{1}, {0, 2}, {2}, {}}, &count);
  CHECK(count == 3);
  CHECK(ids[0] == ids[1]);
  CHECK(ids[1] != ids[2]);
  CHECK(ids[3] != ids[2]);
}
