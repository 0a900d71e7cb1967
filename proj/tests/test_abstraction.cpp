#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "apobs/abstraction.hpp"
#include "apobs/error.hpp"
#include "apobs/pipeline.hpp"
#include "oracles.hpp"

using namespace apobs;

namespace {

std::vector<std::int64_t> cell_of(const Grid& g, std::size_t i) { return g.coords(i); }

std::size_t cell(const Grid& g, std::int64_t x, std::int64_t y) { return g.index({x, y}); }

// Sampled classification of a cell box: 11 points per axis, corners included.
Tri sampled_rho(const Box& b, const Region& r) {
  int in = 0, total = 0;
  for (int i = 0; i <= 10; ++i)
    for (int j = 0; j <= 10; ++j) {
      const std::vector<double> x{b[0].lo + (b[0].hi - b[0].lo) * i / 10.0, b[1].lo + (b[1].hi - b[1].lo) * j / 10.0};
      in += contains(r, x);
      ++total;
    }
  return in == total ? Tri::Plus : in == 0 ? Tri::Minus : Tri::Unknown;
}

ObsSet pz(Tri t) { return t == Tri::Plus ? oracle::set_of("AZ") : t == Tri::Minus ? oracle::set_of("EN") : kAnyObs; }
ObsSet pe(Tri t) { return t == Tri::Plus ? oracle::set_of("AE") : t == Tri::Minus ? oracle::set_of("ZN") : kAnyObs; }

SystemSpec line_system() {
  // 1-D, moving right at 1 m/s
  SystemSpec s;
  s.dim = 1;
  s.domain = {{0.0, 10.0}};
  s.eta = 1;
  s.tau = 1;
  s.x_in = {5};
  s.boundary = Boundary::Clamp;
  Mode m;
  m.heading = false;
  m.velocity = {1.0};
  m.v = 1.0;
  s.modes.assign(11, m);
  s.aps["p"] = {{{0, true, 0.0}}};
  return s;
}

}  // namespace

TEST_CASE("gamma") {
  const SystemSpec spec = drone_scenario();
  const Grid g(spec.domain, spec.eta);
  CHECK(g.size() == 1089);
  CHECK(cell_of(g, gamma(spec, g, {10.3, 9.8})) == std::vector<std::int64_t>{10, 10});
  CHECK(cell_of(g, gamma(spec, g, {-3.0, 4.0})) == std::vector<std::int64_t>{-3, 4});
  CHECK(cell_of(g, gamma(spec, g, {0.5, 0.5})) == std::vector<std::int64_t>{1, 1});
  CHECK(cell_of(g, gamma(spec, g, {-0.5, -1.5})) == std::vector<std::int64_t>{0, -1});
  CHECK(cell_of(g, gamma(spec, g, {16.5, -16.5})) == std::vector<std::int64_t>{16, -16});
  CHECK_THROWS_AS(gamma(spec, g, {17.0, 0.0}), Error);
  CHECK(Grid(spec.domain, 0.5).size() == 67 * 67);
}

TEST_CASE("rho examples") {
  const SystemSpec spec = drone_scenario();
  const Grid g(spec.domain, 1);
  CHECK(classify_box(g.cell_box(cell(g, 10, 10)), spec.aps.at("c")) == Tri::Plus);
  CHECK(classify_box(g.cell_box(cell(g, 6, 6)), spec.aps.at("g")) == Tri::Unknown);
  CHECK(classify_box(g.cell_box(cell(g, 0, 0)), drone_scenario({.r_mode = "and"}).aps.at("r")) == Tri::Minus);
  CHECK(classify_box(g.cell_box(cell(g, 0, 0)), spec.aps.at("r")) == Tri::Minus);
  CHECK(classify_box(g.cell_box(cell(g, 2, 0)), spec.aps.at("r")) == Tri::Unknown);
  CHECK(start_set(Tri::Plus) == oracle::set_of("AZ"));
  CHECK(start_set(Tri::Minus) == oracle::set_of("EN"));
  CHECK(end_set(Tri::Plus) == oracle::set_of("AE"));
  CHECK(end_set(Tri::Minus) == oracle::set_of("ZN"));
  CHECK(end_set(Tri::Unknown) == kAnyObs);
}

TEST_CASE("rho agrees with sampling on every drone cell") {
  for (const char* mode : {"or", "and"}) {
    const SystemSpec spec = drone_scenario({.r_mode = mode});
    const Grid g(spec.domain, 1);
    for (const auto& [ap, region] : spec.aps)
      for (std::size_t i = 0; i < g.size(); ++i) {
        CAPTURE(ap);
        CAPTURE(i);
        CHECK(classify_box(g.cell_box(i), region) == sampled_rho(g.cell_box(i), region));
      }
  }
}

TEST_CASE("reach box") {
  Mode m;
  m.theta = 0;
  m.v = 4;
  m.ev = 0.1;
  m.etheta = 0.08;
  const Box d = displacement_box(m, 1.0, 2);
  CHECK(d[0].lo == doctest::Approx(3.9 * std::cos(0.08)));
  CHECK(d[0].hi == doctest::Approx(4.1));
  CHECK(d[1].hi == doctest::Approx(4.1 * std::sin(0.08)));
  CHECK(d[1].lo == doctest::Approx(-4.1 * std::sin(0.08)));

  // 10^4 sampled (speed, angle) pairs per heading land inside
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 1);
  for (double theta : {0.0, 0.3, std::numbers::pi / 2 - 0.05, std::numbers::pi, -2.5, 3 * std::numbers::pi / 4}) {
    m.theta = theta;
    const Box b = displacement_box(m, 1.0, 2);
    for (int i = 0; i < 10000; ++i) {
      const double v = m.v - m.ev + 2 * m.ev * u(rng), a = theta - m.etheta + 2 * m.etheta * u(rng);
      CHECK(oracle::inside(b, {v * std::cos(a), v * std::sin(a)}));
    }
  }

  SystemSpec spec = drone_scenario({.field = "uniform"});
  const Grid g(spec.domain, 1);
  for (auto& mode : spec.modes) mode.ev = mode.etheta = 0;
  const Box exact = reach_box(spec, g, cell(g, 0, 0));
  CHECK(exact[0].lo == doctest::Approx(3.5));
  CHECK(exact[0].hi == doctest::Approx(4.5));
  CHECK(exact[1].lo == doctest::Approx(-0.5));
  CHECK(exact[1].hi == doctest::Approx(0.5));
  for (auto& mode : spec.modes) mode.v = 0;
  const Box still = reach_box(spec, g, cell(g, 3, -2));
  CHECK(still[0].lo == doctest::Approx(2.5));
  CHECK(still[1].hi == doctest::Approx(-1.5));
}

TEST_CASE("drone model: size, labels and sampled successors") {
  const SystemSpec spec = drone_scenario();
  const std::vector<std::string> tracked{"b", "c", "r"};
  const SymbolicModel model = build_symbolic_model(spec, tracked);
  const Grid& g = model.grid;
  CHECK(model.size() == 1089);
  CHECK_FALSE(model.has_sink);
  CHECK(g.index(std::vector<std::int64_t>{-10, 13}) == static_cast<std::size_t>(model.initial));

  // every label lies in P_Z(q) & P_E(q'), with rho taken from sampling
  std::size_t labels = 0;
  for (std::size_t q = 0; q < model.size(); ++q)
    for (const auto& [l, q2] : model.out[q]) {
      ++labels;
      int changes = 0;
      for (std::size_t i = 0; i < tracked.size(); ++i) {
        const Region& r = spec.aps.at(tracked[i]);
        const Obs o = label_get(l, i);
        CHECK(contains(pz(sampled_rho(g.cell_box(q), r)), o));
        CHECK(contains(pe(sampled_rho(g.cell_box(static_cast<std::size_t>(q2)), r)), o));
        changes += is_change(o);
      }
      CHECK(changes <= 1);
    }
  CHECK(labels == model.transition_count());

  // sampled one-step moves end in a successor cell
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int i = 0; i < 5000; ++i) {
    const std::size_t q = rng() % g.size();
    const auto c = g.center(q);
    const Mode& m = spec.modes[q];
    const double v = m.v + 2 * m.ev * u(rng), a = m.theta + 2 * m.etheta * u(rng);
    const std::vector<double> x{c[0] + u(rng), c[1] + u(rng)};
    const std::vector<double> y{x[0] + v * std::cos(a), x[1] + v * std::sin(a)};
    const auto q2 = static_cast<int>(gamma(spec, g, y));
    bool found = false;
    for (const auto& [l, t] : model.out[q]) found = found || t == q2;
    CHECK(found);
  }
}

TEST_CASE("labels next to a region border") {
  // moving from a cell half outside p into a cell inside p
  SystemSpec s = line_system();
  s.aps["p"] = {{{0, true, 4.7}}};
  const SymbolicModel m = build_symbolic_model(s, {"p"});
  const Grid& g = m.grid;
  std::set<Obs> seen;
  for (const auto& [l, t] : m.out[g.index({5})])
    if (t == static_cast<int>(g.index({6}))) seen.insert(label_get(l, 0));
  CHECK(seen == std::set<Obs>{Obs::A, Obs::E});
  // fully inside on both ends: only A
  std::set<Obs> inside;
  for (const auto& [l, t] : m.out[g.index({7})]) inside.insert(label_get(l, 0));
  CHECK(inside == std::set<Obs>{Obs::A});
}

TEST_CASE("sink for cells leaving the domain") {
  SystemSpec s = line_system();
  s.boundary = Boundary::Sink;
  const SymbolicModel m = build_symbolic_model(s, {"p"});
  CHECK(m.has_sink);
  CHECK(m.size() == 12);
  bool to_sink = false;
  for (const auto& [l, t] : m.out[10]) to_sink = to_sink || t == 11;
  CHECK(to_sink);
  CHECK_FALSE(m.out[11].empty());
  for (const auto& [l, t] : m.out[11]) CHECK(t == 11);
  CHECK(m.has_transition(11, m.out[11].front().first, 11));
}

TEST_CASE("tau validation") {
  const SystemSpec spec = drone_scenario();
  const auto tv = validate_tau(spec, {"b", "c", "r"});
  CHECK(tv.v_max == doctest::Approx(4.1));
  CHECK(tv.pass);
  CHECK(tv.separated);
  CHECK(tv.tau_max == doctest::Approx(4.11 / 4.1));
  CHECK(tv.pairs.size() == 3);

  // c and g share the border y = 6.21
  const auto shared = validate_tau(spec, {"c", "g"});
  CHECK_FALSE(shared.separated);
  CHECK_FALSE(shared.pass);
  CHECK_THROWS_AS(require_tau(spec, {"c", "g"}), Error);

  const auto single = validate_tau(spec, {"r"});
  CHECK(single.pass);
  CHECK(std::isinf(single.tau_max));

  SystemSpec slow = spec;
  bool was_pass = false;
  for (double tau = 3.0; tau > 0.05; tau *= 0.8) {
    slow.tau = tau;
    const bool pass = validate_tau(slow, {"b", "c", "r"}).pass;
    if (was_pass) CHECK(pass);
    was_pass = was_pass || pass;
  }
  CHECK(was_pass);
  slow.tau = 10;
  CHECK_FALSE(validate_tau(slow, {"b", "c", "r"}).pass);
}

TEST_CASE("trajectory simulation") {
  SystemSpec spec = drone_scenario({.field = "uniform"});
  for (auto& m : spec.modes) m.ev = m.etheta = 0;
  spec.x_in = {-10, 0};
  const Grid g(spec.domain, spec.eta);
  const auto tr = simulate_trajectory(spec, {"r"}, 4, 1);
  REQUIRE(tr.states.size() == 5);
  CHECK_FALSE(tr.chopping_error);
  for (std::size_t k = 0; k < 5; ++k)
    CHECK(tr.states[k] == static_cast<int>(cell(g, -10 + 4 * static_cast<std::int64_t>(k), 0)));
  CHECK(tr.word.prefix.size() == 4);
  // r is left near x = -2.1 and entered again past x = 2.1
  std::string seen;
  for (const Label l : tr.word.prefix) seen += to_char(label_get(l, 0));
  CHECK(seen == "AZNE");

  const auto none = simulate_trajectory(spec, {"r"}, 0, 1);
  CHECK(none.states.size() == 1);
  CHECK(none.word.prefix.empty());

  // seeded runs are reproducible
  const SystemSpec drone = drone_scenario();
  const auto a = simulate_trajectory(drone, {"b", "c", "r"}, 20, 9);
  const auto b = simulate_trajectory(drone, {"b", "c", "r"}, 20, 9);
  CHECK(a.states == b.states);
  CHECK(a.word == b.word);
}
