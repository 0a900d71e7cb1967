#include "apobs/abstraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "apobs/error.hpp"

namespace apobs {

namespace {
constexpr double kTol = 1e-9;
}

bool contains(const Region& r, const std::vector<double>& x) {
  for (const auto& conj : r) {
    bool all = true;
    for (const auto& h : conj) {
      const double v = x[static_cast<std::size_t>(h.axis)];
      if (h.ge ? v < h.c : v > h.c) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

// --- grid -----------------------------------------------------------------

Grid::Grid(const Box& domain, double eta) : eta_(eta) {
  size_ = 1;
  for (const auto& iv : domain) {
    const auto lo = static_cast<std::int64_t>(std::ceil(iv.lo / eta - kTol));
    const auto hi = static_cast<std::int64_t>(std::floor(iv.hi / eta + kTol));
    if (hi < lo) throw Error(ErrorKind::Spec, "domain contains no grid point");
    kmin_.push_back(lo);
    counts_.push_back(hi - lo + 1);
    size_ *= static_cast<std::size_t>(hi - lo + 1);
  }
}

std::vector<std::int64_t> Grid::coords(std::size_t index) const {
  std::vector<std::int64_t> k(kmin_.size());
  for (std::size_t a = kmin_.size(); a-- > 0;) {
    const auto c = static_cast<std::size_t>(counts_[a]);
    k[a] = kmin_[a] + static_cast<std::int64_t>(index % c);
    index /= c;
  }
  return k;
}

bool Grid::valid(const std::vector<std::int64_t>& k) const {
  for (std::size_t a = 0; a < kmin_.size(); ++a)
    if (k[a] < kmin_[a] || k[a] >= kmin_[a] + counts_[a]) return false;
  return true;
}

std::size_t Grid::index(const std::vector<std::int64_t>& k) const {
  std::size_t idx = 0;
  for (std::size_t a = 0; a < kmin_.size(); ++a)
    idx = idx * static_cast<std::size_t>(counts_[a]) + static_cast<std::size_t>(k[a] - kmin_[a]);
  return idx;
}

std::vector<double> Grid::center(std::size_t index) const {
  const auto k = coords(index);
  std::vector<double> x(k.size());
  for (std::size_t a = 0; a < k.size(); ++a) x[a] = static_cast<double>(k[a]) * eta_;
  return x;
}

Box Grid::cell_box(std::size_t index) const {
  const auto c = center(index);
  Box b(c.size());
  for (std::size_t a = 0; a < c.size(); ++a) b[a] = {c[a] - eta_ / 2, c[a] + eta_ / 2};
  return b;
}

namespace {

bool in_domain(const Box& domain, const std::vector<double>& x) {
  for (std::size_t a = 0; a < domain.size(); ++a)
    if (x[a] < domain[a].lo - kTol || x[a] > domain[a].hi + kTol) return false;
  return true;
}

}  // namespace

std::size_t gamma(const SystemSpec& spec, const Grid& grid, const std::vector<double>& x) {
  if (x.size() != spec.domain.size() || !in_domain(spec.domain, x))
    throw Error(ErrorKind::Spec, "point outside the domain");
  std::vector<std::int64_t> k(x.size());
  for (std::size_t a = 0; a < x.size(); ++a) {
    const auto r = static_cast<std::int64_t>(std::floor(x[a] / grid.eta() + 0.5));
    k[a] = std::clamp(r, grid.kmin()[a], grid.kmin()[a] + grid.counts()[a] - 1);
  }
  return grid.index(k);
}

// --- rho ------------------------------------------------------------------

char to_char(Tri t) { return t == Tri::Plus ? '+' : t == Tri::Minus ? '-' : '?'; }

namespace {

// Closed conjunction as a box (possibly unbounded).
Box conj_box(const Conjunction& c, std::size_t dim) {
  const double inf = std::numeric_limits<double>::infinity();
  Box b(dim, Interval{-inf, inf});
  for (const auto& h : c) {
    auto& iv = b[static_cast<std::size_t>(h.axis)];
    if (h.ge) iv.lo = std::max(iv.lo, h.c);
    else iv.hi = std::min(iv.hi, h.c);
  }
  return b;
}

bool intersects(const Box& a, const Box& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].hi < b[i].lo || b[i].hi < a[i].lo) return false;
  return true;
}

}  // namespace

Tri classify_box(const Box& box, const Region& r) {
  const std::size_t dim = box.size();
  std::vector<Box> conj;
  for (const auto& c : r) conj.push_back(conj_box(c, dim));
  bool any = false;
  for (const auto& c : conj)
    if (intersects(box, c)) any = true;
  if (!any) return Tri::Minus;
  // split the box at the thresholds strictly inside it; each piece lies
  // entirely in or out of every conjunction, so its center decides
  std::vector<std::vector<double>> cuts(dim);
  for (std::size_t a = 0; a < dim; ++a) {
    cuts[a].push_back(box[a].lo);
    for (const auto& c : r)
      for (const auto& h : c)
        if (static_cast<std::size_t>(h.axis) == a && h.c > box[a].lo && h.c < box[a].hi) cuts[a].push_back(h.c);
    cuts[a].push_back(box[a].hi);
    std::sort(cuts[a].begin(), cuts[a].end());
    cuts[a].erase(std::unique(cuts[a].begin(), cuts[a].end()), cuts[a].end());
  }
  std::vector<std::size_t> pos(dim, 0);
  for (;;) {
    std::vector<double> mid(dim);
    for (std::size_t a = 0; a < dim; ++a) {
      const auto& cs = cuts[a];
      mid[a] = cs.size() == 1 ? cs[0] : (cs[pos[a]] + cs[pos[a] + 1]) / 2;
    }
    if (!contains(r, mid)) return Tri::Unknown;
    std::size_t a = 0;
    for (; a < dim; ++a) {
      const std::size_t pieces = std::max<std::size_t>(1, cuts[a].size() - 1);
      if (++pos[a] < pieces) break;
      pos[a] = 0;
    }
    if (a == dim) break;
  }
  return Tri::Plus;
}

ObsSet start_set(Tri rho_z) {
  switch (rho_z) {
    case Tri::Plus: return obs_bit(Obs::A) | obs_bit(Obs::Z);
    case Tri::Minus: return obs_bit(Obs::E) | obs_bit(Obs::N);
    default: return kAnyObs;
  }
}

ObsSet end_set(Tri rho_e) {
  switch (rho_e) {
    case Tri::Plus: return obs_bit(Obs::A) | obs_bit(Obs::E);
    case Tri::Minus: return obs_bit(Obs::Z) | obs_bit(Obs::N);
    default: return kAnyObs;
  }
}

// --- reachability ---------------------------------------------------------

namespace {

// Range of cos over [a, b].
Interval cos_range(double a, double b) {
  const double pi = std::numbers::pi;
  double lo = std::min(std::cos(a), std::cos(b));
  double hi = std::max(std::cos(a), std::cos(b));
  for (double k = std::ceil(a / pi); k * pi <= b; k += 1.0) {
    const double v = std::fmod(std::fabs(k), 2.0) == 0.0 ? 1.0 : -1.0;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

Interval times(Interval s, Interval c) {
  const double p[4] = {s.lo * c.lo, s.lo * c.hi, s.hi * c.lo, s.hi * c.hi};
  return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

}  // namespace

Box displacement_box(const Mode& m, double tau, int dim) {
  Box b(static_cast<std::size_t>(dim));
  if (m.heading) {
    const Interval s{std::max(0.0, m.v - m.ev), m.v + m.ev};
    const double a = m.theta - m.etheta, c = m.theta + m.etheta;
    const Interval cx = cos_range(a, c);
    const Interval sy = cos_range(a - std::numbers::pi / 2, c - std::numbers::pi / 2);
    b[0] = times(s, cx);
    b[1] = times(s, sy);
  } else {
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = {m.velocity[i] - m.ev, m.velocity[i] + m.ev};
  }
  for (auto& iv : b) iv = {iv.lo * tau, iv.hi * tau};
  return b;
}

Box reach_box(const SystemSpec& spec, const Grid& grid, std::size_t cell) {
  if (cell >= spec.modes.size()) throw Error(ErrorKind::Spec, "no mode for cell " + std::to_string(cell));
  Box b = grid.cell_box(cell);
  const Box d = displacement_box(spec.modes[cell], spec.tau, spec.dim);
  for (std::size_t a = 0; a < b.size(); ++a) b[a] = {b[a].lo + d[a].lo, b[a].hi + d[a].hi};
  return b;
}

// --- symbolic model -------------------------------------------------------

std::size_t SymbolicModel::transition_count() const {
  std::size_t n = 0;
  for (const auto& o : out) n += o.size();
  return n;
}

bool SymbolicModel::has_transition(int q, Label l, int q2) const {
  if (q < 0 || static_cast<std::size_t>(q) >= out.size()) return false;
  const auto& o = out[static_cast<std::size_t>(q)];
  return std::binary_search(o.begin(), o.end(), std::make_pair(l, q2));
}

void validate_spec(const SystemSpec& spec) {
  if (spec.dim < 1) throw Error(ErrorKind::Spec, "dimension must be positive");
  if (spec.domain.size() != static_cast<std::size_t>(spec.dim)) throw Error(ErrorKind::Spec, "domain dimension mismatch");
  for (const auto& iv : spec.domain)
    if (!(iv.lo < iv.hi)) throw Error(ErrorKind::Spec, "empty domain interval");
  if (!(spec.eta > 0)) throw Error(ErrorKind::Spec, "eta must be positive");
  if (!(spec.tau > 0)) throw Error(ErrorKind::Spec, "tau must be positive");
  if (spec.x_in.size() != spec.domain.size() || !in_domain(spec.domain, spec.x_in))
    throw Error(ErrorKind::Spec, "initial state outside the domain");
  const Grid grid(spec.domain, spec.eta);
  if (spec.modes.size() != grid.size())
    throw Error(ErrorKind::Spec, "mode field has " + std::to_string(spec.modes.size()) + " entries for " +
                                     std::to_string(grid.size()) + " cells");
  for (const auto& m : spec.modes) {
    if (m.ev < 0 || m.etheta < 0) throw Error(ErrorKind::Spec, "negative disturbance bound");
    if (m.heading) {
      if (spec.dim != 2) throw Error(ErrorKind::Spec, "heading modes need a 2-D system");
      if (m.v - m.ev < 0) throw Error(ErrorKind::Spec, "v - ev must be nonnegative");
    } else if (m.velocity.size() != spec.domain.size()) {
      throw Error(ErrorKind::Spec, "velocity dimension mismatch");
    }
  }
  for (const auto& [name, region] : spec.aps)
    for (const auto& c : region)
      for (const auto& h : c)
        if (h.axis < 0 || h.axis >= spec.dim) throw Error(ErrorKind::Spec, "AP '" + name + "' uses a bad axis");
}

namespace {

void enumerate_labels(const std::vector<ObsSet>& sets, std::size_t i, Label cur, int changes, bool filter,
                      std::vector<Label>& out) {
  if (i == sets.size()) {
    out.push_back(cur);
    return;
  }
  for (Obs o : kAllObs) {
    if (!contains(sets[i], o)) continue;
    const int c = changes + (is_change(o) ? 1 : 0);
    if (filter && c > 1) continue;
    enumerate_labels(sets, i + 1, label_set(cur, i, o), c, filter, out);
  }
}

}  // namespace

SymbolicModel build_symbolic_model(const SystemSpec& spec, const std::vector<std::string>& tracked,
                                   const ModelOptions& opt) {
  validate_spec(spec);
  SymbolicModel m;
  m.aps = tracked;
  std::sort(m.aps.begin(), m.aps.end());
  if (m.aps.size() > kMaxAps) throw Error(ErrorKind::Unsupported, "more than 16 tracked APs");
  std::vector<const Region*> regions;
  for (const auto& ap : m.aps) {
    const auto it = spec.aps.find(ap);
    if (it == spec.aps.end()) throw Error(ErrorKind::AlphabetMismatch, "system defines no AP '" + ap + "'");
    regions.push_back(&it->second);
  }
  m.grid = Grid(spec.domain, spec.eta);
  const std::size_t n = m.grid.size();
  const std::size_t k = m.aps.size();
  std::vector<Tri> rho(n * k);
  for (std::size_t q = 0; q < n; ++q) {
    const Box box = m.grid.cell_box(q);
    for (std::size_t p = 0; p < k; ++p) rho[q * k + p] = classify_box(box, *regions[p]);
  }
  const auto sink = static_cast<int>(n);
  m.out.resize(n);
  auto labels_for = [&](std::size_t q, std::size_t q2, bool to_sink) {
    std::vector<ObsSet> sets(k);
    for (std::size_t p = 0; p < k; ++p) {
      const ObsSet e = to_sink ? kAnyObs : end_set(rho[q2 * k + p]);
      sets[p] = start_set(rho[q * k + p]) & e;
    }
    std::vector<Label> out;
    if (std::any_of(sets.begin(), sets.end(), [](ObsSet s) { return s == 0; })) return out;
    enumerate_labels(sets, 0, 0, 0, opt.single_change_filter, out);
    return out;
  };
  for (std::size_t q = 0; q < n; ++q) {
    Box rb = reach_box(spec, m.grid, q);
    bool exits = false;
    for (std::size_t a = 0; a < rb.size(); ++a) {
      const auto& dom = spec.domain[a];
      if (rb[a].lo < dom.lo - kTol || rb[a].hi > dom.hi + kTol) exits = true;
      rb[a].lo = std::clamp(rb[a].lo, dom.lo, dom.hi);
      rb[a].hi = std::clamp(rb[a].hi, dom.lo, dom.hi);
    }
    // successor cells: closed boxes meeting the reach box
    std::vector<std::int64_t> lo(rb.size()), hi(rb.size());
    for (std::size_t a = 0; a < rb.size(); ++a) {
      const double eta = spec.eta;
      lo[a] = std::max(m.grid.kmin()[a],
                       static_cast<std::int64_t>(std::ceil((rb[a].lo - eta / 2 - kTol) / eta)));
      hi[a] = std::min(m.grid.kmin()[a] + m.grid.counts()[a] - 1,
                       static_cast<std::int64_t>(std::floor((rb[a].hi + eta / 2 + kTol) / eta)));
    }
    auto& o = m.out[q];
    std::vector<std::int64_t> cur = lo;
    for (bool more = true; more;) {
      const std::size_t q2 = m.grid.index(cur);
      for (Label l : labels_for(q, q2, false)) o.emplace_back(l, static_cast<int>(q2));
      std::size_t a = cur.size();
      more = false;
      while (a-- > 0) {
        if (++cur[a] <= hi[a]) {
          more = true;
          break;
        }
        cur[a] = lo[a];
      }
    }
    if (exits && spec.boundary == Boundary::Sink) {
      m.has_sink = true;
      for (Label l : labels_for(q, 0, true)) o.emplace_back(l, sink);
    }
    std::sort(o.begin(), o.end());
  }
  if (m.has_sink) {
    std::vector<ObsSet> any(k, kAnyObs);
    std::vector<Label> all;
    enumerate_labels(any, 0, 0, 0, opt.single_change_filter, all);
    auto& o = m.out.emplace_back();
    for (Label l : all) o.emplace_back(l, sink);
  }
  m.initial = static_cast<int>(gamma(spec, m.grid, spec.x_in));
  return m;
}

// --- tau validation -------------------------------------------------------

double max_speed(const SystemSpec& spec) {
  double v = 0.0;
  for (const auto& m : spec.modes) {
    if (m.heading) {
      v = std::max(v, m.v + m.ev);
    } else {
      double u = 0.0;
      for (double c : m.velocity) u = std::max(u, std::fabs(c));
      v = std::max(v, u + m.ev);
    }
  }
  return v;
}

namespace {

// Boundary facets of a region inside the domain, from the arrangement of all
// thresholds: a facet separates two neighbouring elementary cells whose
// membership differs.
std::vector<Box> facets(const Region& r, const std::vector<std::vector<double>>& breaks) {
  const std::size_t dim = breaks.size();
  std::vector<std::size_t> n(dim);
  std::size_t total = 1;
  for (std::size_t a = 0; a < dim; ++a) {
    n[a] = breaks[a].size() - 1;
    total *= n[a];
  }
  auto decode = [&](std::size_t idx) {
    std::vector<std::size_t> pos(dim);
    for (std::size_t a = dim; a-- > 0;) {
      pos[a] = idx % n[a];
      idx /= n[a];
    }
    return pos;
  };
  auto encode = [&](const std::vector<std::size_t>& pos) {
    std::size_t idx = 0;
    for (std::size_t a = 0; a < dim; ++a) idx = idx * n[a] + pos[a];
    return idx;
  };
  std::vector<char> in(total);
  for (std::size_t i = 0; i < total; ++i) {
    const auto pos = decode(i);
    std::vector<double> mid(dim);
    for (std::size_t a = 0; a < dim; ++a) mid[a] = (breaks[a][pos[a]] + breaks[a][pos[a] + 1]) / 2;
    in[i] = contains(r, mid);
  }
  std::vector<Box> out;
  for (std::size_t i = 0; i < total; ++i) {
    const auto pos = decode(i);
    for (std::size_t a = 0; a < dim; ++a) {
      if (pos[a] + 1 >= n[a]) continue;
      auto nb = pos;
      ++nb[a];
      if (in[i] == in[encode(nb)]) continue;
      Box f(dim);
      for (std::size_t b = 0; b < dim; ++b) f[b] = {breaks[b][pos[b]], breaks[b][pos[b] + 1]};
      f[a] = {breaks[a][pos[a] + 1], breaks[a][pos[a] + 1]};
      out.push_back(f);
    }
  }
  return out;
}

double inf_distance(const Box& a, const Box& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    d = std::max(d, std::max({0.0, b[i].lo - a[i].hi, a[i].lo - b[i].hi}));
  return d;
}

}  // namespace

TauValidation validate_tau(const SystemSpec& spec, const std::vector<std::string>& tracked) {
  TauValidation tv;
  tv.v_max = max_speed(spec);
  std::vector<std::string> aps = tracked;
  std::sort(aps.begin(), aps.end());
  aps.erase(std::unique(aps.begin(), aps.end()), aps.end());
  const std::size_t dim = spec.domain.size();
  std::vector<std::vector<double>> breaks(dim);
  for (std::size_t a = 0; a < dim; ++a) breaks[a] = {spec.domain[a].lo, spec.domain[a].hi};
  for (const auto& ap : aps) {
    const auto it = spec.aps.find(ap);
    if (it == spec.aps.end()) throw Error(ErrorKind::AlphabetMismatch, "system defines no AP '" + ap + "'");
    for (const auto& c : it->second)
      for (const auto& h : c) {
        const auto& dom = spec.domain[static_cast<std::size_t>(h.axis)];
        if (h.c > dom.lo && h.c < dom.hi) breaks[static_cast<std::size_t>(h.axis)].push_back(h.c);
      }
  }
  for (auto& b : breaks) {
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
  }
  std::vector<std::vector<Box>> fs;
  for (const auto& ap : aps) fs.push_back(facets(spec.aps.at(ap), breaks));
  const double inf = std::numeric_limits<double>::infinity();
  double dmin = inf;
  for (std::size_t i = 0; i < aps.size(); ++i)
    for (std::size_t j = i + 1; j < aps.size(); ++j) {
      double d = inf;
      for (const auto& f : fs[i])
        for (const auto& g : fs[j]) d = std::min(d, inf_distance(f, g));
      tv.pairs.push_back({aps[i], aps[j], d});
      dmin = std::min(dmin, d);
      if (d <= 0) {
        tv.separated = false;
        if (tv.message.empty()) tv.message = "APs '" + aps[i] + "' and '" + aps[j] + "' share a boundary";
      }
    }
  tv.tau_max = tv.v_max > 0 ? dmin / tv.v_max : inf;
  tv.pass = tv.separated && spec.tau <= tv.tau_max * (1 + 1e-12);
  if (tv.separated && !tv.pass)
    tv.message = "tau = " + std::to_string(spec.tau) + " exceeds the AP-separation bound " + std::to_string(tv.tau_max);
  return tv;
}

void require_tau(const SystemSpec& spec, const std::vector<std::string>& tracked) {
  const TauValidation tv = validate_tau(spec, tracked);
  if (!tv.pass) throw Error(ErrorKind::TauValidation, tv.message);
}

// --- simulation -----------------------------------------------------------

Trajectory simulate_trajectory(const SystemSpec& spec, const std::vector<std::string>& tracked, std::size_t steps,
                               std::uint64_t seed, int samples_per_step) {
  validate_spec(spec);
  const Grid grid(spec.domain, spec.eta);
  Trajectory tr;
  tr.word.aps = tracked;
  std::sort(tr.word.aps.begin(), tr.word.aps.end());
  std::vector<const Region*> regions;
  for (const auto& ap : tr.word.aps) regions.push_back(&spec.aps.at(ap));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> x = spec.x_in;
  tr.points.push_back(x);
  tr.states.push_back(static_cast<int>(gamma(spec, grid, x)));
  for (std::size_t step = 0; step < steps; ++step) {
    const Mode& m = spec.modes[static_cast<std::size_t>(tr.states.back())];
    std::vector<double> u(x.size());
    if (m.heading) {
      const double s = m.v + m.ev * unit(rng);
      const double b = m.theta + m.etheta * unit(rng);
      u[0] = s * std::cos(b);
      u[1] = s * std::sin(b);
    } else {
      for (std::size_t a = 0; a < u.size(); ++a) u[a] = m.velocity[a] + m.ev * unit(rng);
    }
    Label label = 0;
    int changes = 0;
    for (std::size_t p = 0; p < regions.size(); ++p) {
      std::vector<char> seq;
      for (int j = 0; j <= samples_per_step; ++j) {
        std::vector<double> y(x.size());
        const double t = spec.tau * j / samples_per_step;
        for (std::size_t a = 0; a < y.size(); ++a) y[a] = x[a] + t * u[a];
        const char v = contains(*regions[p], y);
        if (seq.empty() || seq.back() != v) seq.push_back(v);
      }
      Obs o;
      if (seq.size() == 1) o = seq[0] ? Obs::A : Obs::N;
      else if (seq.size() == 2) o = seq[0] ? Obs::Z : Obs::E;
      else {
        tr.chopping_error = true;
        tr.error = "AP '" + tr.word.aps[p] + "' changes more than once in step " + std::to_string(step);
        return tr;
      }
      if (is_change(o)) ++changes;
      label = label_set(label, p, o);
    }
    if (changes > 1) {
      tr.chopping_error = true;
      tr.error = "two APs change in step " + std::to_string(step);
      return tr;
    }
    tr.word.prefix.push_back(label);
    for (std::size_t a = 0; a < x.size(); ++a) x[a] += spec.tau * u[a];
    tr.points.push_back(x);
    if (!in_domain(spec.domain, x)) {
      tr.states.push_back(static_cast<int>(grid.size()));
      break;
    }
    tr.states.push_back(static_cast<int>(gamma(spec, grid, x)));
  }
  return tr;
}

}  // namespace apobs
