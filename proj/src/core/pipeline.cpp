#include "apobs/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "apobs/error.hpp"
#include "apobs/json_io.hpp"

namespace apobs {

namespace {

using json = nlohmann::ordered_json;
constexpr double kPi = std::numbers::pi;

}  // namespace

// Clockwise square ring |.|_inf = ring. Outside the band we cut inward on a
// diagonal, inside it we cut outward. Corners turn one band width early so
// that no reach box leaves the domain; far out in a corner we head for the
// origin.
double patrol_heading(double x, double y, double ring, double band) {
  const double ax = std::fabs(x), ay = std::fabs(y);
  const double r = std::max(ax, ay);
  if (std::min(ax, ay) >= ring - band) {
    if (r > ring + band) return std::atan2(y > 0 ? -1.0 : 1.0, x > 0 ? -1.0 : 1.0);
    if (x > 0 && y > 0) return -kPi / 2;
    if (x > 0) return kPi;
    if (y < 0) return kPi / 2;
    return 0.0;
  }
  double tangent;
  if (ay > ax || (ay == ax && ((x < 0) == (y > 0)))) {
    tangent = y >= 0 ? 0.0 : kPi;  // top: east, bottom: west
  } else {
    tangent = x >= 0 ? -kPi / 2 : kPi / 2;  // right: south, left: north
  }
  if (r > ring + band) return tangent - kPi / 4;
  if (r < ring - band) return tangent + kPi / 4;
  return tangent;
}

void regenerate_field(SystemSpec& spec) {
  if (spec.field_name != "patrol" && spec.field_name != "uniform")
    throw Error(ErrorKind::Spec, "mode field '" + spec.field_name + "' cannot be regenerated");
  const json meta = spec.metadata.empty() ? json::object() : json::parse(spec.metadata);
  if (spec.dim != 2) throw Error(ErrorKind::Spec, "heading fields need a 2-D system");
  Mode base;
  base.v = meta.value("v", 4.0);
  base.ev = meta.value("ev", 0.1);
  base.etheta = meta.value("etheta", 0.08);
  const Grid grid(spec.domain, spec.eta);
  spec.modes.assign(grid.size(), base);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto c = grid.center(i);
    spec.modes[i].theta = spec.field_name == "patrol"
                              ? patrol_heading(c[0], c[1], meta.value("ring", 13.0), meta.value("band", 1.0))
                              : meta.value("heading", 0.0);
  }
}

void apply_overrides(SystemSpec& spec, std::optional<double> eta, std::optional<double> tau) {
  if (tau) {
    if (!(*tau > 0)) throw Error(ErrorKind::InvalidArgument, "tau must be positive");
    spec.tau = *tau;
  }
  if (eta && *eta != spec.eta) {
    if (!(*eta > 0)) throw Error(ErrorKind::InvalidArgument, "eta must be positive");
    spec.eta = *eta;
    regenerate_field(spec);
  }
}

SystemSpec drone_scenario(const DroneOptions& opt) {
  if (opt.r_mode != "or" && opt.r_mode != "and")
    throw Error(ErrorKind::InvalidArgument, "r_mode must be 'or' or 'and'");
  if (opt.field != "patrol" && opt.field != "uniform")
    throw Error(ErrorKind::InvalidArgument, "unknown field '" + opt.field + "'");
  SystemSpec s;
  s.dim = 2;
  s.domain = {{-16.5, 16.5}, {-16.5, 16.5}};
  s.eta = opt.eta;
  s.tau = opt.tau;
  s.x_in = {-10.0, 13.0};
  const double t = 6.21;
  s.aps["c"] = {{{1, true, t}}};
  s.aps["b"] = {{{0, true, t}, {1, true, 10.32}}};
  s.aps["p"] = {{{0, false, t}, {1, false, t}}};
  s.aps["g"] = {{{0, true, t}, {1, false, t}}};
  const double r = 2.1;
  if (opt.r_mode == "or")
    s.aps["r"] = {{{0, true, r}}, {{0, false, -r}}, {{1, true, r}}, {{1, false, -r}}};
  else
    s.aps["r"] = {{{0, true, r}, {1, true, r}},
                  {{0, true, r}, {1, false, -r}},
                  {{0, false, -r}, {1, true, r}},
                  {{0, false, -r}, {1, false, -r}}};
  json meta{{"v", 4.0}, {"ev", 0.1}, {"etheta", 0.08}, {"r_mode", opt.r_mode}};
  if (opt.field == "patrol") {
    meta["ring"] = opt.ring;
    meta["band"] = opt.band;
  } else {
    meta["heading"] = opt.heading;
  }
  s.field_name = opt.field;
  s.metadata = meta.dump();
  regenerate_field(s);
  validate_spec(s);
  return s;
}

namespace {

template <class F>
auto stage(const char* name, F&& f) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e);
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

Report verify(const SystemSpec& spec, const std::string& formula, const VerifyOptions& opt,
              VerifyArtifacts* artifacts) {
  Report r;
  r.formula = formula;
  r.repeat = std::max(1, opt.repeat);
  VerifyArtifacts local;
  VerifyArtifacts& art = artifacts ? *artifacts : local;
  for (int run = 0; run < r.repeat; ++run) {
    const auto t0 = std::chrono::steady_clock::now();
    const Nnf nnf = stage("parse", [&] { return to_nnf(formula); });
    art.automaton = stage("automaton", [&] { return formula_automaton(nnf); });
    const double t_aut = seconds_since(t0);

    const auto t1 = std::chrono::steady_clock::now();
    const auto& aps = art.automaton.nba.aps;
    stage("spec", [&] {
      validate_spec(spec);
      return 0;
    });
    art.tau = stage("tau", [&] {
      TauValidation tv = validate_tau(spec, aps);
      if (!tv.pass && !opt.allow_unsound_tau) throw Error(ErrorKind::TauValidation, tv.message);
      return tv;
    });
    art.model = stage("abstraction", [&] {
      return build_symbolic_model(spec, aps, ModelOptions{opt.single_change_filter});
    });
    const double t_model = seconds_since(t1);

    const auto t2 = std::chrono::steady_clock::now();
    art.game = stage("game", [&] { return build_game(art.model, art.automaton.nba); });
    const double t_game = seconds_since(t2);

    const auto t3 = std::chrono::steady_clock::now();
    art.solution = stage("solve", [&] { return solve_buchi(art.game); });
    const double t_solve = seconds_since(t3);

    r.automaton_time += t_aut / r.repeat;
    r.model_time += t_model / r.repeat;
    r.game_time += t_game / r.repeat;
    r.solve_time += t_solve / r.repeat;
    r.total_time += seconds_since(t0) / r.repeat;
    if (run == 0) r.nnf = to_string(nnf);
  }
  const auto& fa = art.automaton;
  r.aps = fa.nba.aps;
  r.closure_size = fa.closure_size;
  r.subformulas = fa.nontrivial_size;
  r.consistent_valuations = fa.consistent;
  r.gba_states = fa.gba.size();
  r.automaton_states = fa.nba.size();
  r.automaton_edges = fa.nba.edge_count();
  r.model_states = art.model.size();
  r.model_transitions = art.model.transition_count();
  r.model_sink = art.model.has_sink;
  r.tau = spec.tau;
  r.tau_max = art.tau.tau_max;
  r.v_max = art.tau.v_max;
  r.tau_pass = art.tau.pass;
  r.tau_overridden = !art.tau.pass;
  r.game_player = art.game.player_count();
  r.game_opponent = art.game.opponent_count();
  r.game_edges = art.game.edge_count();
  r.stuck_player = art.game.stuck_player.size();
  r.stuck_opponent = art.game.stuck_opponent.size();
  r.w0_size = art.solution.w0_size();
  r.recursive_calls = art.solution.stats.recursive_calls;
  r.attractors = art.solution.stats.attractors;
  r.verdict = art.solution.verdict ? "VERIFIED" : "INCONCLUSIVE";
  r.config_hash = fnv1a_hex(spec_to_json(spec, -1) + "\n" + r.nnf + "\n" +
                            (opt.single_change_filter ? "filter" : "nofilter") + "\n" +
                            (opt.allow_unsound_tau ? "unsound" : "sound"));
  return r;
}

const std::vector<BenchRow>& paper_bench() {
  static const std::vector<BenchRow> rows = {
      {"G r", 2, 651, 642, 0.01, 0.23, 0.35, 1.34},
      {"F p", 5, 757, 680, 0.01, 0.52, 0.46, 1.75},
      {"c U b", 7, 830, 691, 0.04, 0.69, 0.55, 2.04},
      {"b R c", 7, 814, 685, 0.04, 0.69, 0.53, 2.03},
      {"F G r", 6, 1933, 1924, 0.02, 0.60, 2.05, 3.44},
      {"G F g", 7, 4640, 2631, 0.02, 1.93, 2.48, 5.20},
      {"F (g & F p)", 33, 4856, 2687, 0.40, 8.98, 3.05, 13.19},
      {"G r & (F p & F c)", 46, 7723, 4144, 51.39, 29.66, 7.54, 89.36},
      {"G r & F (g & F p)", 49, 7279, 4030, 53.86, 25.49, 7.06, 87.18},
  };
  return rows;
}

}  // namespace apobs
