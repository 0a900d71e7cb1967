#pragma once

// AP-observation automata: generalized construction from valuations, pruning,
// minimization, degeneralization and lasso membership.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "apobs/ltl.hpp"
#include "apobs/observation.hpp"

namespace apobs {

/// Automaton over labels (maps from `aps` to observations). State 0 is the
/// initial state. With one accepting set it is a plain Büchi automaton.
struct Automaton {
  std::vector<std::string> aps;
  std::vector<std::string> names;                    // per state
  std::vector<std::vector<Valuation>> valuations;    // per state; empty for q0
  std::vector<std::vector<std::pair<Label, int>>> out;  // sorted successor lists
  std::vector<std::vector<char>> accepting;          // accepting[i][state]
  std::vector<std::string> accepting_names;          // per set, e.g. "(true U g)"

  std::size_t size() const { return out.size(); }
  std::size_t edge_count() const;
  bool in_set(std::size_t set, int state) const { return accepting[set][static_cast<std::size_t>(state)] != 0; }
};

enum class Enumeration { BottomUp, BruteForce };

/// Consistent valuations of the closure, in lexicographic order.
std::vector<Valuation> consistent_valuations(const SubformulaSet& sub, Enumeration how = Enumeration::BottomUp);

bool is_consistent(const SubformulaSet& sub, const Valuation& v);

/// One transition rule between valuations: every subformula true at the end of
/// the first slice is true at the start of the next one and vice versa.
bool valuation_step(const Valuation& from, const Valuation& to);

/// The generalized automaton with q0 plus every consistent valuation.
Automaton build_gba(const SubformulaSet& sub, Enumeration how = Enumeration::BottomUp);

Automaton restrict_reachable(const Automaton& a);
/// Keeps states reachable from q0 that can reach a cycle meeting every
/// accepting set; q0 is always kept.
Automaton prune(const Automaton& a);
/// Quotient by the coarsest acceptance-respecting forward bisimulation.
Automaton minimize(const Automaton& a);
/// Counter construction; the result has exactly one accepting set.
Automaton degeneralize(const Automaton& a);

struct FormulaAutomaton {
  Nnf formula;
  std::size_t closure_size = 0;     // including true/false
  std::size_t nontrivial_size = 0;  // without them
  std::size_t consistent = 0;       // consistent valuations
  Automaton gba;                    // pruned and minimized
  Automaton nba;                    // degeneralized and trimmed
};

/// build -> reachable -> prune -> minimize -> degeneralize -> prune again.
FormulaAutomaton formula_automaton(const Nnf& f, Enumeration how = Enumeration::BottomUp);

/// Membership of an ultimately periodic word. Throws AlphabetMismatch if the
/// word lacks one of the automaton's APs, Precondition if the word is not a
/// signal word.
bool accepts_lasso(const Automaton& a, const Word& w);

/// Re-indexes a word onto the automaton's AP list.
Word project_word(const Word& w, const std::vector<std::string>& aps);

std::string to_dot(const Automaton& a);
std::string to_json(const Automaton& a);

/// Strongly connected components (iterative Tarjan); returns component id per
/// node, ids in reverse topological order.
std::vector<int> scc_ids(const std::vector<std::vector<int>>& succ, int* count = nullptr);

}  // namespace apobs
