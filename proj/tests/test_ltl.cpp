#include <doctest.h>

#include <random>

#include "apobs/error.hpp"
#include "apobs/ltl.hpp"
#include "oracles.hpp"

using namespace apobs;

namespace {

std::string nnf_of(const char* s) { return to_string(to_nnf(s)); }

}  // namespace

TEST_CASE("parser precedence and aliases") {
  CHECK(to_string(*parse_ltl("p")) == "p");
  CHECK(to_string(*parse_ltl("a & b | c")) == "((a & b) | c)");
  CHECK(to_string(*parse_ltl("a | b & c")) == "(a | (b & c))");
  CHECK(to_string(*parse_ltl("a U b U c")) == "(a U (b U c))");
  CHECK(to_string(*parse_ltl("a U b & c")) == "((a U b) & c)");
  CHECK(to_string(*parse_ltl("!a U b")) == "(!a U b)");
  CHECK(to_string(*parse_ltl("F G !x")) == "F G !x");
  CHECK(to_string(*parse_ltl("a && b || !(c R d)")) == "((a & b) | !(c R d))");
  CHECK(to_string(*parse_ltl("true U false")) == "(true U false)");
  CHECK(to_string(*parse_ltl("X p")) == "X p");
}

TEST_CASE("parser errors carry a position") {
  CHECK_THROWS_AS(parse_ltl(""), ParseError);
  CHECK_THROWS_AS(parse_ltl("a &"), ParseError);
  CHECK_THROWS_AS(parse_ltl("(a | b"), ParseError);
  CHECK_THROWS_AS(parse_ltl("a $ b"), ParseError);
  CHECK_THROWS_AS(parse_ltl("a b"), ParseError);
  try {
    parse_ltl("a & & b");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
    CHECK(e.kind() == ErrorKind::Parse);
  }
}

TEST_CASE("negation normal form") {
  CHECK(nnf_of("G F g") == "(false R (true U g))");
  CHECK(nnf_of("p") == "p");
  CHECK(nnf_of("G !a & F r") == "((false R !a) & (true U r))");
  CHECK(nnf_of("!(p U q)") == "(!p R !q)");
  CHECK(nnf_of("!!p") == "p");
  CHECK(nnf_of("!(G r)") == "(true U !r)");
  CHECK(nnf_of("!(a & !b)") == "(!a | b)");
  CHECK(nnf_of("!true") == "false");
  CHECK(nnf_of("!(a R F b)") == "(!a U (false R !b))");
}

TEST_CASE("X is rejected") {
  try {
    to_nnf("F X p");
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Unsupported);
    CHECK(std::string(e.what()).find("not supported") != std::string::npos);
  }
  CHECK(contains_next(*parse_ltl("a U X b")));
  CHECK_FALSE(contains_next(*parse_ltl("a U b")));
}

TEST_CASE("NNF is idempotent") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    const auto f = oracle::random_formula(rng, {"a", "b", "c"}, 6);
    const Nnf once = to_nnf(*f);
    const Nnf twice = to_nnf(*from_nnf(once));
    CHECK(once->key == twice->key);
    // the printed form parses back to the same formula
    CHECK(to_nnf(once->key)->key == once->key);
  }
}

TEST_CASE("NNF preserves discrete semantics on random lassos") {
  std::mt19937_64 rng(11);
  const std::vector<std::string> aps{"a", "b", "c"};
  for (int i = 0; i < 1000; ++i) {
    const auto f = oracle::random_formula(rng, aps, 6);
    oracle::BoolLasso w;
    const auto len = std::uniform_int_distribution<int>(1, 8)(rng);
    const auto np = std::uniform_int_distribution<int>(0, len - 1)(rng);
    for (int k = 0; k < len; ++k) {
      std::set<std::string> letter;
      for (const auto& ap : aps)
        if (rng() & 1) letter.insert(ap);
      (k < np ? w.prefix : w.loop).push_back(letter);
    }
    const auto nnf = from_nnf(to_nnf(*f));
    CHECK(oracle::eval_discrete(*f, w) == oracle::eval_discrete(*nnf, w));
  }
}

TEST_CASE("subformula closure") {
  const SubformulaSet gfg(to_nnf("G F g"));
  CHECK(gfg.size() == 5);
  CHECK(gfg.nontrivial_size() == 3);
  CHECK(gfg.aps() == std::vector<std::string>{"g"});
  CHECK(to_string(gfg[static_cast<std::size_t>(gfg.root())].formula) == "(false R (true U g))");

  const SubformulaSet atom(to_nnf("p"));
  CHECK(atom.size() == 1);

  const SubformulaSet big(to_nnf("G r & F (g & F p)"));
  CHECK(big.size() == 10);
  CHECK(big.nontrivial_size() == 8);
  CHECK(big.aps() == std::vector<std::string>{"g", "p", "r"});

  // children first, no duplicates
  const SubformulaSet s(to_nnf("(a U b) & (b R (a U b)) | !a"));
  std::set<std::string> keys;
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(keys.insert(s[i].formula->key).second);
    CHECK(s[i].lhs < static_cast<int>(i));
    CHECK(s[i].rhs < static_cast<int>(i));
    CHECK(s[i].positive_atom < static_cast<int>(i));
  }
  const auto neg = s.index_of(nnf_atom("a", true));
  REQUIRE(neg);
  CHECK(s[static_cast<std::size_t>(*neg)].positive_atom == *s.index_of(nnf_atom("a")));
}
