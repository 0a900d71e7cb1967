#pragma once

// Four-valued observations {A,Z,E,N}, the consistency table and signal words.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace apobs {

enum class Obs : std::uint8_t { A = 0, Z = 1, E = 2, N = 3 };

inline constexpr Obs kAllObs[4] = {Obs::A, Obs::Z, Obs::E, Obs::N};

/// Bit set over observations, bit i stands for Obs(i).
using ObsSet = std::uint8_t;

inline constexpr ObsSet obs_bit(Obs o) { return static_cast<ObsSet>(1u << static_cast<unsigned>(o)); }
inline constexpr bool contains(ObsSet s, Obs o) { return (s & obs_bit(o)) != 0; }
inline constexpr ObsSet kAnyObs = 0x0F;

/// The involution A<->N, Z<->E.
inline constexpr Obs neg(Obs o) { return static_cast<Obs>(3 - static_cast<unsigned>(o)); }
ObsSet neg(ObsSet s);

/// True at the start of the slice (A or Z) / at its end (A or E).
inline constexpr bool holds_at_start(Obs o) { return o == Obs::A || o == Obs::Z; }
inline constexpr bool holds_at_end(Obs o) { return o == Obs::A || o == Obs::E; }
inline constexpr bool is_change(Obs o) { return o == Obs::Z || o == Obs::E; }

char to_char(Obs o);
Obs obs_from_char(char c);  // throws Error(InvalidArgument)
std::string to_string(ObsSet s);  // e.g. "AN", "" for the empty set

enum class Connective { And, Or, Until, Release };

/// c_op(o1, o2): the set of observations of (psi1 op psi2) consistent with
/// observations o1 of psi1 and o2 of psi2.
ObsSet consistency(Connective op, Obs o1, Obs o2);

// Labels: maps from an ordered AP list to observations, packed base-4
// (digit i is the observation of AP i). Up to 16 APs.
using Label = std::uint32_t;
inline constexpr std::size_t kMaxAps = 16;

inline Obs label_get(Label l, std::size_t i) { return static_cast<Obs>((l >> (2 * i)) & 3u); }
inline Label label_set(Label l, std::size_t i, Obs o) {
  return (l & ~(3u << (2 * i))) | (static_cast<Label>(o) << (2 * i));
}
inline Label label_count(std::size_t n_aps) { return 1u << (2 * n_aps); }

std::string label_to_string(Label l, const std::vector<std::string>& aps);  // "c:A,r:N"
Label label_from_string(const std::string& text, const std::vector<std::string>& aps);

/// Ultimately periodic word over labels: prefix loop^omega.
struct Word {
  std::vector<std::string> aps;  // sorted
  std::vector<Label> prefix;
  std::vector<Label> loop;

  std::size_t size() const { return prefix.size() + loop.size(); }
  Label at(std::size_t k) const {
    return k < prefix.size() ? prefix[k] : loop[(k - prefix.size()) % loop.size()];
  }
  /// Position following k in the lasso graph (the last loop letter wraps).
  std::size_t succ(std::size_t k) const { return k + 1 < size() ? k + 1 : prefix.size(); }
};

bool operator==(const Word& a, const Word& b);

/// Observation of every closure entry, indexed like the SubformulaSet.
using Valuation = std::vector<Obs>;

struct WordCheck {
  bool ok = true;
  std::size_t position = 0;  // lasso position of the first violation
  std::string message;
};

/// Checks the AP-transition rule (end of slice k agrees with start of k+1,
/// including across the loop seam) and the single-change rule.
WordCheck check_signal_word(const Word& w);

/// Same lasso structure with the shortest loop and prefix.
Word normalize(Word w);

}  // namespace apobs
