#pragma once

// Explicit construction of the accepting run of the observation automaton
// matching a signal word, built subformula by subformula.

#include <vector>

#include "apobs/ltl.hpp"
#include "apobs/observation.hpp"

namespace apobs {

/// Valuation sequence with the same prefix/loop shape as the word it was
/// built from.
struct ValuationLasso {
  std::vector<Valuation> prefix;
  std::vector<Valuation> loop;

  std::size_t size() const { return prefix.size() + loop.size(); }
  const Valuation& at(std::size_t k) const {
    return k < prefix.size() ? prefix[k] : loop[(k - prefix.size()) % loop.size()];
  }
};

bool operator==(const ValuationLasso& a, const ValuationLasso& b);

/// Throws Error(Precondition) if w is not a signal word, or if the Until case
/// split does not apply at some position; Error(AlphabetMismatch) if an atom
/// of the closure is missing from w.
ValuationLasso unique_run_oracle(const Word& w, const SubformulaSet& sub);

}  // namespace apobs
