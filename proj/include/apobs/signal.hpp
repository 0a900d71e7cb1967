#pragma once

// Piecewise-constant, ultimately periodic AP signals: dense-time evaluation of
// NNF formulas and chopping into observation words.
//
// A piece with duration d covering (a, a+d] holds its value on that half-open
// interval; t = 0 takes the value of the first piece. Times are converted to
// exact integer ticks before any computation.

#include <cstdint>
#include <string>
#include <vector>

#include "apobs/ltl.hpp"
#include "apobs/observation.hpp"

namespace apobs {

struct Piece {
  double dur = 0.0;
  std::vector<std::string> aps;  // APs true on this piece
};

struct PiecewiseSignal {
  std::vector<Piece> prefix;
  std::vector<Piece> loop;
};

/// Signal on an integer time base: ticks_per_unit ticks per second.
struct TickSignal {
  std::int64_t ticks_per_unit = 1;
  std::vector<std::string> aps;  // sorted; APs not listed are false everywhere
  std::vector<std::pair<std::int64_t, std::uint32_t>> prefix;  // (duration, AP bit mask)
  std::vector<std::pair<std::int64_t, std::uint32_t>> loop;
};

inline constexpr std::int64_t kMaxDenominator = 1000000;

/// Converts durations (and the extra times in `also`) to a common tick base.
/// Throws ChoppingError(NotRepresentable) if that needs more than 10^6 ticks
/// per second.
TickSignal to_ticks(const PiecewiseSignal& s, const std::vector<std::string>& aps,
                    const std::vector<double>& also = {});

/// Rational approximation num/den of x with den <= max_den.
std::pair<std::int64_t, std::int64_t> rational_approx(double x, std::int64_t max_den = kMaxDenominator);

/// Boolean signal on ticks: cuts[0] = 0 < ... < cuts.back() = period_start +
/// period. at[i] is the value at cuts[i], open[i] the value on
/// (cuts[i], cuts[i+1]). For t > period_start the signal repeats with period.
struct TruthTrack {
  std::vector<std::int64_t> cuts;
  std::vector<bool> at;
  std::vector<bool> open;
  std::int64_t period_start = 0;
  std::int64_t period = 1;

  bool value(std::int64_t t) const;       // value at t
  bool value_after(std::int64_t t) const; // value on (t, t + epsilon)
  /// All cut instants in the open range (lo, hi), sorted.
  std::vector<std::int64_t> cuts_between(std::int64_t lo, std::int64_t hi) const;
};

TruthTrack constant_track(bool v);
TruthTrack ap_track(const TickSignal& s, const std::string& ap);

/// Truth signal of an NNF formula.
TruthTrack eval_track(const TickSignal& s, const Nnf& f);

/// Truth signal of every entry of a closure (same indices).
std::vector<TruthTrack> eval_tracks(const TickSignal& s, const SubformulaSet& sub);

/// s, t |= f with t in seconds.
bool eval_signal(const PiecewiseSignal& s, const Nnf& f, double t);

/// Observation of one track over the closed slice [lo, hi]; throws
/// ChoppingError(UndefinedSlice) when it fits none of A/Z/E/N.
Obs classify_slice(const TruthTrack& tr, std::int64_t lo, std::int64_t hi, std::size_t slice = 0);

/// Chops tracks with slice length `slice_ticks`. The lasso starts at the first
/// slice lying after the tracks' common periodic start. With check_single the
/// single-change rule is enforced (MultiChange).
Word chop_tracks(const std::vector<TruthTrack>& tracks, const std::vector<std::string>& names,
                 std::int64_t slice_ticks, bool check_single = true);

/// Chops a signal along tau (seconds) over the given AP list.
Word chop(const PiecewiseSignal& s, double tau, const std::vector<std::string>& aps);
Word chop(const TickSignal& s, std::int64_t slice_ticks);

}  // namespace apobs
