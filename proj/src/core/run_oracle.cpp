#include "apobs/run_oracle.hpp"

#include <algorithm>

#include "apobs/error.hpp"

namespace apobs {

bool operator==(const ValuationLasso& a, const ValuationLasso& b) {
  return a.prefix == b.prefix && a.loop == b.loop;
}

namespace {

using Row = std::vector<Obs>;  // one observation per lasso position

Row negate(const Row& r) {
  Row out(r.size());
  std::transform(r.begin(), r.end(), out.begin(), [](Obs o) { return neg(o); });
  return out;
}

Obs single(ObsSet s) {
  for (Obs o : kAllObs)
    if (s == obs_bit(o)) return o;
  throw Error(ErrorKind::Internal, "consistency cell is not a singleton");
}

// Case split for psi1 U psi2. Cases are tried in the order A, Z, E, N: when
// psi1 = E and psi2 = N the E and N conditions can both hold, and E is the
// one the table entry {E, N} singles out for a satisfied look-ahead.
Row until_row(const Word& w, const Row& r1, const Row& r2) {
  const std::size_t n = w.size();
  Row out(n);
  for (std::size_t k = 0; k < n; ++k) {
    // first k' > k with psi2 != N, if any (n steps visit every reachable position)
    bool found = false;
    std::size_t steps = 0;
    for (std::size_t j = w.succ(k); steps < n; j = w.succ(j), ++steps) {
      if (r2[j] != Obs::N) {
        found = true;
        break;
      }
    }
    // psi1 = A on (k, k') and on [k, k')
    bool a_open = found;
    if (found)
      for (std::size_t j = w.succ(k), s = 0; s < steps; j = w.succ(j), ++s)
        if (r1[j] != Obs::A) {
          a_open = false;
          break;
        }
    const bool a_closed = a_open && r1[k] == Obs::A;

    const bool case_a = r2[k] == Obs::A || a_closed;
    const bool case_z = r2[k] == Obs::Z && !a_closed;
    const bool case_e = (r2[k] == Obs::E && (r1[k] == Obs::E || r1[k] == Obs::N)) ||
                        (r2[k] == Obs::N && r1[k] == Obs::E && a_open);
    const bool case_n = r2[k] == Obs::N && !a_closed;
    if (case_a) out[k] = Obs::A;
    else if (case_z) out[k] = Obs::Z;
    else if (case_e) out[k] = Obs::E;
    else if (case_n) out[k] = Obs::N;
    else
      throw Error(ErrorKind::Precondition,
                  "no Until case applies at position " + std::to_string(k) + " (psi1=" + to_char(r1[k]) +
                      ", psi2=" + to_char(r2[k]) + ")");
  }
  return out;
}

}  // namespace

ValuationLasso unique_run_oracle(const Word& w, const SubformulaSet& sub) {
  const WordCheck check = check_signal_word(w);
  if (!check.ok) throw Error(ErrorKind::Precondition, "not a signal word: " + check.message);
  const std::size_t n = w.size();
  std::vector<Row> rows(sub.size());
  for (std::size_t i = 0; i < sub.size(); ++i) {
    const Subformula& e = sub[i];
    Row& r = rows[i];
    r.resize(n);
    switch (e.op) {
      case NnfOp::True: std::fill(r.begin(), r.end(), Obs::A); break;
      case NnfOp::False: std::fill(r.begin(), r.end(), Obs::N); break;
      case NnfOp::PosAtom: {
        const auto it = std::find(w.aps.begin(), w.aps.end(), e.atom);
        if (it == w.aps.end()) throw Error(ErrorKind::AlphabetMismatch, "word has no AP '" + e.atom + "'");
        const auto ap = static_cast<std::size_t>(it - w.aps.begin());
        for (std::size_t k = 0; k < n; ++k) r[k] = label_get(w.at(k), ap);
        break;
      }
      case NnfOp::NegAtom: r = negate(rows[e.positive_atom]); break;
      case NnfOp::And:
        for (std::size_t k = 0; k < n; ++k)
          r[k] = single(consistency(Connective::And, rows[e.lhs][k], rows[e.rhs][k]));
        break;
      case NnfOp::Or:
        for (std::size_t k = 0; k < n; ++k)
          r[k] = neg(single(consistency(Connective::And, neg(rows[e.lhs][k]), neg(rows[e.rhs][k]))));
        break;
      case NnfOp::Until: r = until_row(w, rows[e.lhs], rows[e.rhs]); break;
      case NnfOp::Release: r = negate(until_row(w, negate(rows[e.lhs]), negate(rows[e.rhs]))); break;
    }
  }
  ValuationLasso out;
  for (std::size_t k = 0; k < n; ++k) {
    Valuation v(sub.size());
    for (std::size_t i = 0; i < sub.size(); ++i) v[i] = rows[i][k];
    (k < w.prefix.size() ? out.prefix : out.loop).push_back(std::move(v));
  }
  return out;
}

}  // namespace apobs
