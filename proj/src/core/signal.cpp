#include "apobs/signal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>

#include "apobs/error.hpp"

namespace apobs {

std::pair<std::int64_t, std::int64_t> rational_approx(double x, std::int64_t max_den) {
  const bool negative = x < 0;
  double r = std::fabs(x);
  std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(r);
    if (a > 9e15) break;
    const auto ai = static_cast<std::int64_t>(a);
    const std::int64_t h2 = ai * h1 + h0;
    const std::int64_t k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    const double frac = r - a;
    if (frac < 1e-12) break;
    r = 1.0 / frac;
  }
  if (k1 == 0) return {0, 1};
  return {negative ? -h1 : h1, k1};
}

namespace {

std::int64_t checked_lcm(std::int64_t a, std::int64_t b, std::int64_t limit, const char* what) {
  const std::int64_t g = std::gcd(a, b);
  const std::int64_t q = a / g;
  if (q > limit / b) {
    throw ChoppingError(ChoppingFailure::NotRepresentable, 0,
                        std::string(what) + " exceeds the representable bound");
  }
  return q * b;
}

constexpr std::int64_t kMaxHorizon = std::int64_t{1} << 40;

}  // namespace

TickSignal to_ticks(const PiecewiseSignal& s, const std::vector<std::string>& aps,
                    const std::vector<double>& also) {
  if (s.loop.empty()) throw Error(ErrorKind::InvalidArgument, "signal loop is empty");
  if (aps.size() > 32) throw Error(ErrorKind::InvalidArgument, "too many APs in signal");
  std::vector<double> times;
  for (const auto* part : {&s.prefix, &s.loop})
    for (const auto& p : *part) {
      if (!(p.dur > 0) || !std::isfinite(p.dur))
        throw Error(ErrorKind::InvalidArgument, "signal piece durations must be positive");
      times.push_back(p.dur);
    }
  for (double t : also) {
    if (!(t >= 0) || !std::isfinite(t)) throw Error(ErrorKind::InvalidArgument, "time must be nonnegative");
    times.push_back(t);
  }
  std::int64_t den = 1;
  for (double t : times) {
    const auto [num, d] = rational_approx(t);
    if (std::fabs(static_cast<double>(num) / static_cast<double>(d) - t) > 1e-9 * std::max(1.0, t))
      throw ChoppingError(ChoppingFailure::NotRepresentable, 0, "time value is not representable with denominator <= 10^6");
    den = checked_lcm(den, d, kMaxDenominator, "common time denominator");
  }
  TickSignal out;
  out.ticks_per_unit = den;
  out.aps = aps;
  std::sort(out.aps.begin(), out.aps.end());
  auto convert = [&](const std::vector<Piece>& in, auto& dst) {
    for (const auto& p : in) {
      std::uint32_t mask = 0;
      for (const auto& name : p.aps) {
        const auto it = std::find(out.aps.begin(), out.aps.end(), name);
        if (it != out.aps.end()) mask |= 1u << (it - out.aps.begin());
      }
      dst.emplace_back(std::llround(p.dur * static_cast<double>(den)), mask);
    }
  };
  convert(s.prefix, out.prefix);
  convert(s.loop, out.loop);
  return out;
}

// --- tracks ---------------------------------------------------------------

bool TruthTrack::value(std::int64_t t) const {
  const std::int64_t h = period_start + period;
  if (t > h) t = period_start + (t - period_start - 1) % period + 1;
  const auto i = static_cast<std::size_t>(std::upper_bound(cuts.begin(), cuts.end(), t) - cuts.begin()) - 1;
  return cuts[i] == t ? at[i] : open[i];
}

bool TruthTrack::value_after(std::int64_t t) const {
  if (t >= period_start) t = period_start + (t - period_start) % period;
  const auto i = static_cast<std::size_t>(std::upper_bound(cuts.begin(), cuts.end(), t) - cuts.begin()) - 1;
  return open[i];
}

std::vector<std::int64_t> TruthTrack::cuts_between(std::int64_t lo, std::int64_t hi) const {
  std::vector<std::int64_t> out;
  const std::int64_t h = period_start + period;
  for (std::int64_t c : cuts)
    if (c > lo && c < hi) out.push_back(c);
  if (hi <= h) return out;
  // periodic copies of the cuts in (period_start, h]
  std::int64_t k = std::max<std::int64_t>(1, (lo - h) / period);
  for (;; ++k) {
    const std::int64_t shift = k * period;
    if (period_start + shift >= hi) break;
    for (std::int64_t c : cuts) {
      if (c <= period_start) continue;
      const std::int64_t s = c + shift;
      if (s > lo && s < hi) out.push_back(s);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

TruthTrack constant_track(bool v) { return TruthTrack{{0, 1}, {v, v}, {v}, 0, 1}; }

TruthTrack ap_track(const TickSignal& s, const std::string& ap) {
  const auto it = std::find(s.aps.begin(), s.aps.end(), ap);
  if (it == s.aps.end()) return constant_track(false);
  const std::uint32_t bit = 1u << (it - s.aps.begin());
  TruthTrack tr;
  tr.cuts.push_back(0);
  std::int64_t t = 0;
  bool first = true;
  for (const auto* part : {&s.prefix, &s.loop}) {
    for (const auto& [dur, mask] : *part) {
      const bool v = (mask & bit) != 0;
      if (first) tr.at.push_back(v);
      first = false;
      tr.open.push_back(v);
      t += dur;
      tr.cuts.push_back(t);
      tr.at.push_back(v);
    }
    if (part == &s.prefix) tr.period_start = t;
  }
  tr.period = t - tr.period_start;
  return tr;
}

namespace {

// Drops cuts that carry no change (keeps 0, the period start and the end).
void simplify(TruthTrack& tr) {
  TruthTrack out;
  out.period_start = tr.period_start;
  out.period = tr.period;
  const std::size_t m = tr.cuts.size() - 1;
  for (std::size_t i = 0; i <= m; ++i) {
    const bool keep = i == 0 || i == m || tr.cuts[i] == tr.period_start ||
                      !(tr.at[i] == tr.open[i - 1] && tr.open[i] == tr.open[i - 1]);
    if (!keep) continue;
    out.cuts.push_back(tr.cuts[i]);
    out.at.push_back(tr.at[i]);
    if (i < m) out.open.push_back(tr.open[i]);
  }
  tr = std::move(out);
}

struct Frame {
  std::int64_t period_start = 0;
  std::int64_t period = 1;
  std::vector<std::int64_t> cuts;  // up to `horizon`
};

Frame common_frame(const std::vector<const TruthTrack*>& in, int periods) {
  Frame f;
  for (const auto* t : in) {
    f.period_start = std::max(f.period_start, t->period_start);
    f.period = checked_lcm(f.period, t->period, kMaxHorizon, "common signal period");
  }
  const std::int64_t horizon = f.period_start + periods * f.period;
  std::set<std::int64_t> cuts{0, f.period_start, f.period_start + f.period, horizon};
  for (const auto* t : in)
    for (std::int64_t c : t->cuts_between(0, horizon)) cuts.insert(c);
  f.cuts.assign(cuts.begin(), cuts.end());
  return f;
}

TruthTrack combine(const std::vector<const TruthTrack*>& in, const std::function<bool(const std::vector<bool>&)>& fn) {
  const Frame f = common_frame(in, 1);
  TruthTrack out;
  out.period_start = f.period_start;
  out.period = f.period;
  out.cuts = f.cuts;
  std::vector<bool> args(in.size());
  for (std::size_t i = 0; i < f.cuts.size(); ++i) {
    for (std::size_t j = 0; j < in.size(); ++j) args[j] = in[j]->value(f.cuts[i]);
    out.at.push_back(fn(args));
    if (i + 1 < f.cuts.size()) {
      for (std::size_t j = 0; j < in.size(); ++j) args[j] = in[j]->value_after(f.cuts[i]);
      out.open.push_back(fn(args));
    }
  }
  simplify(out);
  return out;
}

TruthTrack negate(const TruthTrack& a) {
  return combine({&a}, [](const std::vector<bool>& v) { return !v[0]; });
}

// a U b: exists t' >= t with b(t') and a on [t, t'). Witnesses never need to
// lie more than one period past max(t, period start), so a backward sweep over
// two periods with a false tail is exact on the first one.
TruthTrack until(const TruthTrack& a, const TruthTrack& b) {
  const Frame f = common_frame({&a, &b}, 2);
  const std::size_t m = f.cuts.size() - 1;
  std::vector<bool> at(m + 1), open(m);
  at[m] = b.value(f.cuts[m]);
  for (std::size_t i = m; i-- > 0;) {
    const std::int64_t c = f.cuts[i];
    const bool a_open = a.value_after(c), b_open = b.value_after(c);
    open[i] = b_open || (a_open && at[i + 1]);
    at[i] = b.value(c) || (a.value(c) && a_open && open[i]);
  }
  TruthTrack out;
  out.period_start = f.period_start;
  out.period = f.period;
  const std::int64_t h = f.period_start + f.period;
  for (std::size_t i = 0; i <= m && f.cuts[i] <= h; ++i) {
    out.cuts.push_back(f.cuts[i]);
    out.at.push_back(at[i]);
    if (f.cuts[i] < h) out.open.push_back(open[i]);
  }
  simplify(out);
  return out;
}

TruthTrack eval_rec(const TickSignal& s, const Nnf& f) {
  switch (f->op) {
    case NnfOp::True: return constant_track(true);
    case NnfOp::False: return constant_track(false);
    case NnfOp::PosAtom: return ap_track(s, f->name);
    case NnfOp::NegAtom: return negate(ap_track(s, f->name));
    case NnfOp::And: {
      const TruthTrack l = eval_rec(s, f->lhs), r = eval_rec(s, f->rhs);
      return combine({&l, &r}, [](const std::vector<bool>& v) { return v[0] && v[1]; });
    }
    case NnfOp::Or: {
      const TruthTrack l = eval_rec(s, f->lhs), r = eval_rec(s, f->rhs);
      return combine({&l, &r}, [](const std::vector<bool>& v) { return v[0] || v[1]; });
    }
    case NnfOp::Until: return until(eval_rec(s, f->lhs), eval_rec(s, f->rhs));
    case NnfOp::Release:
      return negate(until(negate(eval_rec(s, f->lhs)), negate(eval_rec(s, f->rhs))));
  }
  return constant_track(false);
}

}  // namespace

TruthTrack eval_track(const TickSignal& s, const Nnf& f) { return eval_rec(s, f); }

std::vector<TruthTrack> eval_tracks(const TickSignal& s, const SubformulaSet& sub) {
  std::vector<TruthTrack> out;
  out.reserve(sub.size());
  for (const auto& e : sub.entries()) {
    switch (e.op) {
      case NnfOp::True: out.push_back(constant_track(true)); break;
      case NnfOp::False: out.push_back(constant_track(false)); break;
      case NnfOp::PosAtom: out.push_back(ap_track(s, e.atom)); break;
      case NnfOp::NegAtom: out.push_back(negate(out[e.positive_atom])); break;
      case NnfOp::And:
        out.push_back(combine({&out[e.lhs], &out[e.rhs]}, [](const std::vector<bool>& v) { return v[0] && v[1]; }));
        break;
      case NnfOp::Or:
        out.push_back(combine({&out[e.lhs], &out[e.rhs]}, [](const std::vector<bool>& v) { return v[0] || v[1]; }));
        break;
      case NnfOp::Until: out.push_back(until(out[e.lhs], out[e.rhs])); break;
      case NnfOp::Release: out.push_back(negate(until(negate(out[e.lhs]), negate(out[e.rhs])))); break;
    }
  }
  return out;
}

bool eval_signal(const PiecewiseSignal& s, const Nnf& f, double t) {
  const SubformulaSet sub(f);
  const TickSignal ts = to_ticks(s, sub.aps(), {t});
  const TruthTrack tr = eval_track(ts, f);
  return tr.value(std::llround(t * static_cast<double>(ts.ticks_per_unit)));
}

// --- chopping -------------------------------------------------------------

Obs classify_slice(const TruthTrack& tr, std::int64_t lo, std::int64_t hi, std::size_t slice) {
  // runs of equal value; for each run remember whether its last element is a point
  struct Run {
    bool value;
    bool ends_with_point;
  };
  std::vector<Run> runs;
  auto push = [&](bool v, bool point) {
    if (!runs.empty() && runs.back().value == v) runs.back().ends_with_point = point;
    else runs.push_back({v, point});
  };
  push(tr.value(lo), true);
  std::int64_t prev = lo;
  for (std::int64_t c : tr.cuts_between(lo, hi)) {
    push(tr.value_after(prev), false);
    push(tr.value(c), true);
    prev = c;
  }
  push(tr.value_after(prev), false);
  push(tr.value(hi), true);

  if (runs.size() == 1) return runs[0].value ? Obs::A : Obs::N;
  if (runs.size() == 2 && runs[0].ends_with_point) return runs[0].value ? Obs::Z : Obs::E;
  throw ChoppingError(ChoppingFailure::UndefinedSlice, slice,
                      "slice " + std::to_string(slice) + " fits none of A/Z/E/N");
}

Word chop_tracks(const std::vector<TruthTrack>& tracks, const std::vector<std::string>& names,
                 std::int64_t slice_ticks, bool check_single) {
  if (slice_ticks <= 0) throw Error(ErrorKind::InvalidArgument, "tau must be positive");
  if (tracks.size() > kMaxAps) throw Error(ErrorKind::InvalidArgument, "too many tracks for one label");
  std::int64_t p = 0, l = 1;
  for (const auto& t : tracks) {
    p = std::max(p, t.period_start);
    l = checked_lcm(l, t.period, kMaxHorizon, "common signal period");
  }
  const std::int64_t n0 = p / slice_ticks + 1;
  const std::int64_t k = checked_lcm(slice_ticks, l, kMaxHorizon, "lasso length") / slice_ticks;
  if (k > 1000000 || n0 > 1000000)
    throw ChoppingError(ChoppingFailure::NotRepresentable, 0, "chopped lasso is longer than 10^6 slices");
  Word w;
  w.aps = names;
  for (std::int64_t n = 0; n < n0 + k; ++n) {
    Label label = 0;
    int changes = 0;
    for (std::size_t i = 0; i < tracks.size(); ++i) {
      const Obs o = classify_slice(tracks[i], n * slice_ticks, (n + 1) * slice_ticks, static_cast<std::size_t>(n));
      if (is_change(o)) ++changes;
      label = label_set(label, i, o);
    }
    if (check_single && changes > 1)
      throw ChoppingError(ChoppingFailure::MultiChange, static_cast<std::size_t>(n),
                          "two APs change in slice " + std::to_string(n));
    (n < n0 ? w.prefix : w.loop).push_back(label);
  }
  return w;
}

Word chop(const TickSignal& s, std::int64_t slice_ticks) {
  std::vector<TruthTrack> tracks;
  for (const auto& ap : s.aps) tracks.push_back(ap_track(s, ap));
  return normalize(chop_tracks(tracks, s.aps, slice_ticks, true));
}

Word chop(const PiecewiseSignal& s, double tau, const std::vector<std::string>& aps) {
  if (!(tau > 0)) throw Error(ErrorKind::InvalidArgument, "tau must be positive");
  const TickSignal ts = to_ticks(s, aps, {tau});
  return chop(ts, std::llround(tau * static_cast<double>(ts.ticks_per_unit)));
}

}  // namespace apobs
