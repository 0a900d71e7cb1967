#include "apobs/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "apobs/error.hpp"
#include "apobs/pipeline.hpp"

namespace apobs {

namespace {

using json = nlohmann::ordered_json;

json region_to_json(const Region& r) {
  json out = json::array();
  for (const auto& c : r) {
    json cj = json::array();
    for (const auto& h : c) cj.push_back({{"axis", h.axis}, {"op", h.ge ? "ge" : "le"}, {"c", h.c}});
    out.push_back(cj);
  }
  return out;
}

Region region_from_json(const json& j, const std::string& name) {
  if (!j.is_array()) throw Error(ErrorKind::Spec, "AP '" + name + "' must be a list of conjunctions");
  Region r;
  for (const auto& cj : j) {
    Conjunction c;
    for (const auto& hj : cj) {
      HalfSpace h;
      h.axis = hj.at("axis").get<int>();
      const auto op = hj.at("op").get<std::string>();
      if (op == "ge" || op == ">=" || op == ">") h.ge = true;
      else if (op == "le" || op == "<=" || op == "<") h.ge = false;
      else throw Error(ErrorKind::Spec, "AP '" + name + "': unknown comparison '" + op + "'");
      h.c = hj.at("c").get<double>();
      c.push_back(h);
    }
    r.push_back(std::move(c));
  }
  return r;
}

bool same_disturbance(const std::vector<Mode>& ms) {
  for (const auto& m : ms)
    if (m.heading != ms[0].heading || m.v != ms[0].v || m.ev != ms[0].ev || m.etheta != ms[0].etheta) return false;
  return true;
}

}  // namespace

std::string spec_to_json(const SystemSpec& spec, int indent) {
  json j;
  j["dim"] = spec.dim;
  json dom = json::array();
  for (const auto& iv : spec.domain) dom.push_back({iv.lo, iv.hi});
  j["domain"] = dom;
  j["eta"] = spec.eta;
  j["tau"] = spec.tau;
  j["x_in"] = spec.x_in;
  j["boundary"] = spec.boundary == Boundary::Sink ? "sink" : "clamp";
  json modes;
  const json meta = spec.metadata.empty() ? json::object() : json::parse(spec.metadata);
  if (!spec.modes.empty() && same_disturbance(spec.modes)) {
    const Mode& m0 = spec.modes[0];
    modes["default"] = {{"v", m0.v}, {"ev", m0.ev}, {"etheta", m0.etheta}};
    json field;
    field["kind"] = "table";
    if (spec.field_name != "table") field["generator"] = spec.field_name;
    if (!meta.empty()) field["params"] = meta;
    if (m0.heading) {
      json th = json::array();
      for (const auto& m : spec.modes) th.push_back(m.theta);
      field["theta"] = th;
    } else {
      json vel = json::array();
      for (const auto& m : spec.modes) vel.push_back(m.velocity);
      field["velocity"] = vel;
    }
    modes["field"] = field;
  } else {
    json cells = json::array();
    for (const auto& m : spec.modes) {
      json c{{"v", m.v}, {"ev", m.ev}, {"etheta", m.etheta}};
      if (m.heading) c["theta"] = m.theta;
      else c["velocity"] = m.velocity;
      cells.push_back(c);
    }
    modes["field"] = {{"kind", "table"}, {"cells", cells}};
  }
  j["modes"] = modes;
  json aps = json::object();
  for (const auto& [name, r] : spec.aps) aps[name] = region_to_json(r);
  j["aps"] = aps;
  if (meta.contains("r_mode")) j["r_mode"] = meta["r_mode"];
  return j.dump(indent);
}

SystemSpec spec_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("spec JSON: ") + e.what());
  }
  SystemSpec s;
  try {
    s.dim = j.value("dim", 2);
    for (const auto& iv : j.at("domain")) s.domain.push_back({iv.at(0).get<double>(), iv.at(1).get<double>()});
    s.eta = j.at("eta").get<double>();
    s.tau = j.at("tau").get<double>();
    s.x_in = j.at("x_in").get<std::vector<double>>();
    const auto boundary = j.value("boundary", std::string("sink"));
    if (boundary == "sink") s.boundary = Boundary::Sink;
    else if (boundary == "clamp") s.boundary = Boundary::Clamp;
    else throw Error(ErrorKind::Spec, "unknown boundary policy '" + boundary + "'");
    for (const auto& [name, r] : j.at("aps").items()) s.aps[name] = region_from_json(r, name);

    const json& modes = j.at("modes");
    Mode base;
    if (modes.contains("default")) {
      const auto& d = modes["default"];
      base.v = d.value("v", 0.0);
      base.ev = d.value("ev", 0.0);
      base.etheta = d.value("etheta", 0.0);
    }
    const json& field = modes.at("field");
    if (s.domain.size() != static_cast<std::size_t>(s.dim)) throw Error(ErrorKind::Spec, "domain dimension mismatch");
    if (!(s.eta > 0)) throw Error(ErrorKind::Spec, "eta must be positive");
    const Grid grid(s.domain, s.eta);
    if (field.is_string()) {
      // generator name, parameters next to it
      json meta = modes.value("params", json::object());
      meta["generator"] = field.get<std::string>();
      meta["v"] = base.v;
      meta["ev"] = base.ev;
      meta["etheta"] = base.etheta;
      s.field_name = field.get<std::string>();
      s.metadata = meta.dump();
      regenerate_field(s);
    } else if (field.contains("cells")) {
      for (const auto& c : field["cells"]) {
        Mode m;
        m.v = c.value("v", base.v);
        m.ev = c.value("ev", base.ev);
        m.etheta = c.value("etheta", base.etheta);
        if (c.contains("velocity")) {
          m.heading = false;
          m.velocity = c["velocity"].get<std::vector<double>>();
        } else {
          m.theta = c.at("theta").get<double>();
        }
        s.modes.push_back(m);
      }
    } else if (field.contains("theta")) {
      for (const auto& t : field["theta"]) {
        Mode m = base;
        m.theta = t.get<double>();
        s.modes.push_back(m);
      }
    } else if (field.contains("velocity")) {
      for (const auto& v : field["velocity"]) {
        Mode m = base;
        m.heading = false;
        m.velocity = v.get<std::vector<double>>();
        s.modes.push_back(m);
      }
    } else {
      throw Error(ErrorKind::Spec, "mode field needs 'theta', 'velocity' or 'cells'");
    }
    if (field.is_object()) {
      if (field.contains("generator")) s.field_name = field["generator"].get<std::string>();
      if (field.contains("params")) s.metadata = field["params"].dump();
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Spec, std::string("spec JSON: ") + e.what());
  }
  validate_spec(s);
  return s;
}

std::string model_to_json(const SymbolicModel& m) {
  json j;
  j["aps"] = m.aps;
  j["states"] = m.size();
  j["cells"] = m.grid.size();
  j["has_sink"] = m.has_sink;
  j["initial"] = m.initial;
  json edges = json::array();
  for (std::size_t q = 0; q < m.size(); ++q)
    for (const auto& [l, q2] : m.out[q]) edges.push_back({{"from", q}, {"label", label_to_string(l, m.aps)}, {"to", q2}});
  j["edges"] = edges;
  return j.dump(1);
}

std::string solve_result_to_json(const SolveResult& sol) {
  json j;
  j["verdict"] = sol.verdict ? "VERIFIED" : "INCONCLUSIVE";
  j["w0_size"] = sol.w0_size();
  json st = json::array();
  for (std::size_t v = 0; v < sol.strategy.size(); ++v)
    if (sol.strategy[v] >= 0) st.push_back({{"vertex", v}, {"move", sol.strategy[v]}});
  j["strategy"] = st;
  j["stats"] = {{"recursive_calls", sol.stats.recursive_calls}, {"attractors", sol.stats.attractors}};
  return j.dump(1);
}

std::string game_to_json(const BuchiGame& g, const SolveResult* sol) {
  json j;
  j["initial"] = g.initial;
  j["player_vertices"] = g.player_count();
  j["opponent_vertices"] = g.opponent_count();
  j["losing_sink"] = g.losing_sink;
  j["winning_sink"] = g.winning_sink;
  j["stuck_player"] = g.stuck_player;
  j["stuck_opponent"] = g.stuck_opponent;
  json vs = json::array();
  for (std::size_t v = 0; v < g.size(); ++v) {
    json x;
    x["id"] = v;
    x["owner"] = g.owner[v] == 0 ? "player" : "opponent";
    if (v < g.q.size() && g.q[v] >= 0) {
      x["q"] = g.q[v];
      x["b"] = g.b[v];
      if (g.owner[v] == 0) x["o"] = g.o[v];
    }
    x["buchi"] = g.buchi[v] != 0;
    x["succ"] = g.succ[v];
    if (sol) x["win"] = sol->win0[v] != 0;
    vs.push_back(x);
  }
  j["vertices"] = vs;
  if (sol) j["solution"] = json::parse(solve_result_to_json(*sol));
  return j.dump(1);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write failed for '" + path + "'");
}

}  // namespace apobs
