#pragma once

// LTL front end: surface syntax, negation normal form, subformula closure.
//
// Grammar (loosest to tightest):
//   or      := and ('|' and)*
//   and     := binary ('&' binary)*
//   binary  := unary (('U' | 'R') binary)?          right-associative
//   unary   := ('!' | 'F' | 'G' | 'X') unary | atom
//   atom    := 'true' | 'false' | identifier | '(' or ')'

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace apobs {

enum class Op { True, False, Atom, Not, And, Or, Until, Release, Next, Finally, Globally };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// Parsed LTL formula. F and G are kept as written; to_nnf expands them.
struct Formula {
  Op op = Op::True;
  std::string name;  // Atom only
  FormulaPtr lhs;    // unary operand or left operand
  FormulaPtr rhs;
};

FormulaPtr make_true();
FormulaPtr make_false();
FormulaPtr make_atom(std::string name);
FormulaPtr make_unary(Op op, FormulaPtr child);
FormulaPtr make_binary(Op op, FormulaPtr lhs, FormulaPtr rhs);

FormulaPtr parse_ltl(std::string_view text);
std::string to_string(const Formula& f);
bool contains_next(const Formula& f);

enum class NnfOp { True, False, PosAtom, NegAtom, And, Or, Until, Release };

struct NnfNode;
using Nnf = std::shared_ptr<const NnfNode>;

/// Formula in negation normal form. `key` is a canonical rendering used for
/// structural equality.
struct NnfNode {
  NnfOp op = NnfOp::True;
  std::string name;  // atoms only
  Nnf lhs;
  Nnf rhs;
  std::string key;
  int depth = 0;
};

Nnf nnf_true();
Nnf nnf_false();
Nnf nnf_atom(std::string name, bool negated = false);
Nnf nnf_binary(NnfOp op, Nnf lhs, Nnf rhs);

bool operator==(const NnfNode& a, const NnfNode& b);
inline bool same(const Nnf& a, const Nnf& b) { return a->key == b->key; }

/// Pushes negations to the atoms and expands F/G. Throws Error(Unsupported)
/// when the formula contains X.
Nnf to_nnf(const Formula& f);
Nnf to_nnf(std::string_view text);

/// Converts back into the general AST (used to check idempotence).
FormulaPtr from_nnf(const Nnf& f);

std::string to_string(const Nnf& f);

/// One closure entry; children are given as indices into the owning set.
struct Subformula {
  Nnf formula;
  NnfOp op;
  std::string atom;  // PosAtom / NegAtom
  int lhs = -1;
  int rhs = -1;
  int positive_atom = -1;  // for NegAtom: index of the matching PosAtom
};

/// Closure of an NNF formula, children before parents, root last. Every atom
/// that occurs negated is also present positively.
class SubformulaSet {
 public:
  explicit SubformulaSet(const Nnf& root);

  std::size_t size() const { return entries_.size(); }
  const Subformula& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<Subformula>& entries() const { return entries_; }
  int root() const { return static_cast<int>(entries_.size()) - 1; }

  std::optional<int> index_of(const Nnf& f) const;

  /// Sorted names of the atomic propositions.
  const std::vector<std::string>& aps() const { return aps_; }
  /// Index of the positive atom for the given AP position in aps().
  int ap_entry(std::size_t ap_index) const { return ap_entries_[ap_index]; }

  /// Closure size without the constants true/false.
  std::size_t nontrivial_size() const;

 private:
  int add(const Nnf& f);

  std::vector<Subformula> entries_;
  std::vector<std::string> aps_;
  std::vector<int> ap_entries_;
};

}  // namespace apobs
