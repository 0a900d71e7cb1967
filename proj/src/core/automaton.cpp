#include "apobs/automaton.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <unordered_map>

#include <json.hpp>

#include "apobs/error.hpp"

namespace apobs {

std::size_t Automaton::edge_count() const {
  std::size_t n = 0;
  for (const auto& o : out) n += o.size();
  return n;
}

// --- valuations -----------------------------------------------------------

namespace {

Connective connective(NnfOp op) {
  switch (op) {
    case NnfOp::And: return Connective::And;
    case NnfOp::Or: return Connective::Or;
    case NnfOp::Until: return Connective::Until;
    default: return Connective::Release;
  }
}

// Observations allowed for entry i given the values of its children.
ObsSet allowed(const Subformula& e, const Valuation& v) {
  switch (e.op) {
    case NnfOp::True: return obs_bit(Obs::A);
    case NnfOp::False: return obs_bit(Obs::N);
    case NnfOp::PosAtom: return kAnyObs;
    case NnfOp::NegAtom: return obs_bit(neg(v[static_cast<std::size_t>(e.positive_atom)]));
    default:
      return consistency(connective(e.op), v[static_cast<std::size_t>(e.lhs)], v[static_cast<std::size_t>(e.rhs)]);
  }
}

void enumerate(const SubformulaSet& sub, std::size_t i, Valuation& v, std::vector<Valuation>& out) {
  if (i == sub.size()) {
    out.push_back(v);
    return;
  }
  const ObsSet s = allowed(sub[i], v);
  for (Obs o : kAllObs) {
    if (!contains(s, o)) continue;
    v[i] = o;
    enumerate(sub, i + 1, v, out);
  }
}

std::uint64_t start_mask(const Valuation& v) {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (holds_at_start(v[i])) m |= std::uint64_t{1} << i;
  return m;
}

std::uint64_t end_mask(const Valuation& v) {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (holds_at_end(v[i])) m |= std::uint64_t{1} << i;
  return m;
}

}  // namespace

bool is_consistent(const SubformulaSet& sub, const Valuation& v) {
  if (v.size() != sub.size()) return false;
  for (std::size_t i = 0; i < sub.size(); ++i)
    if (!contains(allowed(sub[i], v), v[i])) return false;
  return true;
}

std::vector<Valuation> consistent_valuations(const SubformulaSet& sub, Enumeration how) {
  std::vector<Valuation> out;
  Valuation v(sub.size(), Obs::A);
  if (how == Enumeration::BottomUp) {
    enumerate(sub, 0, v, out);
    return out;
  }
  if (sub.size() > 14) throw Error(ErrorKind::Unsupported, "brute-force enumeration limited to 14 subformulas");
  const std::uint64_t total = std::uint64_t{1} << (2 * sub.size());
  for (std::uint64_t code = 0; code < total; ++code) {
    for (std::size_t i = 0; i < sub.size(); ++i)
      v[i] = static_cast<Obs>((code >> (2 * (sub.size() - 1 - i))) & 3u);
    if (is_consistent(sub, v)) out.push_back(v);
  }
  return out;
}

bool valuation_step(const Valuation& from, const Valuation& to) {
  if (from.size() != to.size()) return false;
  for (std::size_t i = 0; i < from.size(); ++i)
    if (holds_at_end(from[i]) != holds_at_start(to[i])) return false;
  return true;
}

Automaton build_gba(const SubformulaSet& sub, Enumeration how) {
  if (sub.size() > 64) throw Error(ErrorKind::Unsupported, "more than 64 subformulas");
  if (sub.aps().size() > kMaxAps) throw Error(ErrorKind::Unsupported, "more than 16 atomic propositions");
  const std::vector<Valuation> vals = consistent_valuations(sub, how);
  Automaton a;
  a.aps = sub.aps();
  const std::size_t n = vals.size() + 1;
  a.names.resize(n);
  a.valuations.resize(n);
  a.out.resize(n);
  a.names[0] = "q0";
  std::vector<Label> labels(n, 0);
  std::unordered_map<std::uint64_t, std::vector<int>> by_start;
  for (std::size_t s = 1; s < n; ++s) {
    const Valuation& v = vals[s - 1];
    a.names[s] = "v" + std::to_string(s);
    a.valuations[s] = {v};
    for (std::size_t i = 0; i < a.aps.size(); ++i)
      labels[s] = label_set(labels[s], i, v[static_cast<std::size_t>(sub.ap_entry(i))]);
    by_start[start_mask(v)].push_back(static_cast<int>(s));
  }
  const auto root = static_cast<std::size_t>(sub.root());
  for (std::size_t s = 1; s < n; ++s) {
    if (holds_at_start(vals[s - 1][root])) a.out[0].emplace_back(labels[s], static_cast<int>(s));
    const auto it = by_start.find(end_mask(vals[s - 1]));
    if (it == by_start.end()) continue;
    for (int t : it->second) a.out[s].emplace_back(labels[static_cast<std::size_t>(t)], t);
  }
  for (auto& o : a.out) std::sort(o.begin(), o.end());
  for (std::size_t i = 0; i < sub.size(); ++i) {
    const Subformula& e = sub[i];
    if (e.op != NnfOp::Until && e.op != NnfOp::Release) continue;
    std::vector<char> set(n, 0);
    for (std::size_t s = 1; s < n; ++s) {
      const Valuation& v = vals[s - 1];
      const Obs rhs = v[static_cast<std::size_t>(e.rhs)];
      set[s] = e.op == NnfOp::Until ? (rhs != Obs::N || v[i] != Obs::A) : (rhs != Obs::A || v[i] != Obs::N);
    }
    a.accepting.push_back(std::move(set));
    a.accepting_names.push_back(e.formula->key);
  }
  return a;
}

// --- graph helpers --------------------------------------------------------

std::vector<int> scc_ids(const std::vector<std::vector<int>>& succ, int* count) {
  const int n = static_cast<int>(succ.size());
  std::vector<int> index(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0),
      comp(static_cast<std::size_t>(n), -1);
  std::vector<char> on_stack(static_cast<std::size_t>(n), 0);
  std::vector<int> stack;
  std::vector<std::pair<int, std::size_t>> call;
  int next_index = 0, next_comp = 0;
  for (int root = 0; root < n; ++root) {
    if (index[static_cast<std::size_t>(root)] >= 0) continue;
    call.emplace_back(root, 0);
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      const auto uv = static_cast<std::size_t>(v);
      if (pos == 0 && index[uv] < 0) {
        index[uv] = low[uv] = next_index++;
        stack.push_back(v);
        on_stack[uv] = 1;
      }
      if (pos < succ[uv].size()) {
        const int w = succ[uv][pos++];
        const auto uw = static_cast<std::size_t>(w);
        if (index[uw] < 0) {
          call.emplace_back(w, 0);
        } else if (on_stack[uw]) {
          low[uv] = std::min(low[uv], index[uw]);
        }
        continue;
      }
      if (low[uv] == index[uv]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[static_cast<std::size_t>(w)] = 0;
          comp[static_cast<std::size_t>(w)] = next_comp;
        } while (w != v);
        ++next_comp;
      }
      const int done = v;
      call.pop_back();
      if (!call.empty()) {
        const auto up = static_cast<std::size_t>(call.back().first);
        low[up] = std::min(low[up], low[static_cast<std::size_t>(done)]);
      }
    }
  }
  if (count) *count = next_comp;
  return comp;
}

namespace {

std::vector<std::vector<int>> plain_graph(const Automaton& a) {
  std::vector<std::vector<int>> g(a.size());
  for (std::size_t s = 0; s < a.size(); ++s)
    for (const auto& [l, t] : a.out[s]) g[s].push_back(t);
  return g;
}

std::vector<char> reachable_from(const std::vector<std::vector<int>>& g, const std::vector<int>& sources) {
  std::vector<char> seen(g.size(), 0);
  std::vector<int> todo;
  for (int s : sources)
    if (!seen[static_cast<std::size_t>(s)]) {
      seen[static_cast<std::size_t>(s)] = 1;
      todo.push_back(s);
    }
  while (!todo.empty()) {
    const int s = todo.back();
    todo.pop_back();
    for (int t : g[static_cast<std::size_t>(s)])
      if (!seen[static_cast<std::size_t>(t)]) {
        seen[static_cast<std::size_t>(t)] = 1;
        todo.push_back(t);
      }
  }
  return seen;
}

std::vector<std::vector<int>> reverse(const std::vector<std::vector<int>>& g) {
  std::vector<std::vector<int>> r(g.size());
  for (std::size_t s = 0; s < g.size(); ++s)
    for (int t : g[s]) r[static_cast<std::size_t>(t)].push_back(static_cast<int>(s));
  return r;
}

// Nodes lying on a cycle that meets every set (sets given as node predicates).
template <class InSet>
std::vector<int> good_cycle_nodes(const std::vector<std::vector<int>>& g, std::size_t sets, InSet in_set) {
  int count = 0;
  const std::vector<int> comp = scc_ids(g, &count);
  std::vector<int> size(static_cast<std::size_t>(count), 0);
  std::vector<char> nontrivial(static_cast<std::size_t>(count), 0);
  for (std::size_t s = 0; s < g.size(); ++s) {
    const auto c = static_cast<std::size_t>(comp[s]);
    ++size[c];
    for (int t : g[s])
      if (t == static_cast<int>(s)) nontrivial[c] = 1;
  }
  for (std::size_t c = 0; c < size.size(); ++c)
    if (size[c] > 1) nontrivial[c] = 1;
  std::vector<std::vector<char>> hit(static_cast<std::size_t>(count), std::vector<char>(sets, 0));
  for (std::size_t s = 0; s < g.size(); ++s)
    for (std::size_t i = 0; i < sets; ++i)
      if (in_set(i, s)) hit[static_cast<std::size_t>(comp[s])][i] = 1;
  std::vector<int> out;
  for (std::size_t s = 0; s < g.size(); ++s) {
    const auto c = static_cast<std::size_t>(comp[s]);
    if (nontrivial[c] && std::all_of(hit[c].begin(), hit[c].end(), [](char h) { return h != 0; }))
      out.push_back(static_cast<int>(s));
  }
  return out;
}

// Sub-automaton on the kept states (q0 must be kept), in original order.
Automaton induced(const Automaton& a, const std::vector<char>& keep) {
  std::vector<int> map(a.size(), -1);
  Automaton b;
  b.aps = a.aps;
  b.accepting_names = a.accepting_names;
  b.accepting.resize(a.accepting.size());
  for (std::size_t s = 0; s < a.size(); ++s) {
    if (!keep[s]) continue;
    map[s] = static_cast<int>(b.names.size());
    b.names.push_back(a.names[s]);
    b.valuations.push_back(a.valuations[s]);
    for (std::size_t i = 0; i < a.accepting.size(); ++i) b.accepting[i].push_back(a.accepting[i][s]);
  }
  b.out.resize(b.names.size());
  for (std::size_t s = 0; s < a.size(); ++s) {
    if (!keep[s]) continue;
    auto& o = b.out[static_cast<std::size_t>(map[s])];
    for (const auto& [l, t] : a.out[s])
      if (keep[static_cast<std::size_t>(t)]) o.emplace_back(l, map[static_cast<std::size_t>(t)]);
  }
  return b;
}

}  // namespace

Automaton restrict_reachable(const Automaton& a) {
  return induced(a, reachable_from(plain_graph(a), {0}));
}

Automaton prune(const Automaton& a) {
  const auto g = plain_graph(a);
  const std::size_t sets = a.accepting.size();
  const std::vector<int> good =
      good_cycle_nodes(g, sets, [&](std::size_t i, std::size_t s) { return a.accepting[i][s] != 0; });
  const std::vector<char> live = reachable_from(reverse(g), good);
  const std::vector<char> reach = reachable_from(g, {0});
  std::vector<char> keep(a.size(), 0);
  for (std::size_t s = 0; s < a.size(); ++s) keep[s] = live[s] && reach[s];
  keep[0] = 1;
  return restrict_reachable(induced(a, keep));
}

Automaton minimize(const Automaton& a) {
  const std::size_t n = a.size();
  std::vector<int> block(n, 0);
  {
    std::map<std::vector<char>, int> ids;
    for (std::size_t s = 1; s < n; ++s) {
      std::vector<char> sig;
      for (const auto& set : a.accepting) sig.push_back(set[s]);
      block[s] = ids.emplace(sig, static_cast<int>(ids.size()) + 1).first->second;
    }
  }
  std::size_t blocks = 0;
  for (;;) {
    std::map<std::pair<int, std::vector<std::pair<Label, int>>>, int> ids;
    std::vector<int> next(n, 0);
    for (std::size_t s = 1; s < n; ++s) {
      std::vector<std::pair<Label, int>> sig;
      for (const auto& [l, t] : a.out[s]) sig.emplace_back(l, block[static_cast<std::size_t>(t)]);
      std::sort(sig.begin(), sig.end());
      sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
      next[s] = ids.emplace(std::make_pair(block[s], std::move(sig)), static_cast<int>(ids.size()) + 1).first->second;
    }
    block = std::move(next);
    if (ids.size() == blocks) break;
    blocks = ids.size();
  }
  // blocks numbered by first occurrence, q0 first
  std::vector<int> order(blocks + 1, -1);
  int count = 0;
  for (std::size_t s = 0; s < n; ++s) {
    auto& o = order[static_cast<std::size_t>(block[s])];
    if (o < 0) o = count++;
  }
  Automaton b;
  b.aps = a.aps;
  b.accepting_names = a.accepting_names;
  const auto m = static_cast<std::size_t>(count);
  b.names.resize(m);
  b.valuations.resize(m);
  b.out.resize(m);
  b.accepting.assign(a.accepting.size(), std::vector<char>(m, 0));
  std::vector<char> filled(m, 0);
  for (std::size_t s = 0; s < n; ++s) {
    const auto q = static_cast<std::size_t>(order[static_cast<std::size_t>(block[s])]);
    b.names[q] = "q" + std::to_string(q);
    for (const auto& v : a.valuations[s]) b.valuations[q].push_back(v);
    for (std::size_t i = 0; i < a.accepting.size(); ++i) b.accepting[i][q] = a.accepting[i][s];
    if (filled[q]) continue;
    filled[q] = 1;
    for (const auto& [l, t] : a.out[s])
      b.out[q].emplace_back(l, order[static_cast<std::size_t>(block[static_cast<std::size_t>(t)])]);
    std::sort(b.out[q].begin(), b.out[q].end());
    b.out[q].erase(std::unique(b.out[q].begin(), b.out[q].end()), b.out[q].end());
  }
  for (auto& v : b.valuations) std::sort(v.begin(), v.end());
  return b;
}

Automaton degeneralize(const Automaton& a) {
  // counter i waits for set order[i-1]; sets are visited outermost subformula first
  const std::size_t m = std::max<std::size_t>(1, a.accepting.size());
  auto member = [&](std::size_t i, std::size_t s) {
    return a.accepting.empty() ? s != 0 : a.accepting[a.accepting.size() - 1 - i][s] != 0;
  };
  std::map<std::pair<int, std::size_t>, int> ids;
  std::vector<std::pair<int, std::size_t>> states;
  auto id_of = [&](int s, std::size_t i) {
    const auto [it, fresh] = ids.emplace(std::make_pair(s, i), static_cast<int>(states.size()));
    if (fresh) states.emplace_back(s, i);
    return it->second;
  };
  id_of(0, 1);
  Automaton b;
  b.aps = a.aps;
  for (std::size_t k = 0; k < states.size(); ++k) {
    const auto [s, i] = states[k];
    const std::size_t next = member(i - 1, static_cast<std::size_t>(s)) ? i % m + 1 : i;
    std::vector<std::pair<Label, int>> o;
    for (const auto& [l, t] : a.out[static_cast<std::size_t>(s)]) o.emplace_back(l, id_of(t, next));
    std::sort(o.begin(), o.end());
    b.out.push_back(std::move(o));
  }
  b.accepting.assign(1, std::vector<char>(states.size(), 0));
  b.accepting_names = {"F"};
  for (std::size_t k = 0; k < states.size(); ++k) {
    const auto [s, i] = states[k];
    b.names.push_back(s == 0 ? "q0" : "(" + a.names[static_cast<std::size_t>(s)] + "," + std::to_string(i) + ")");
    b.valuations.push_back(a.valuations[static_cast<std::size_t>(s)]);
    b.accepting[0][k] = s != 0 && i == m && member(m - 1, static_cast<std::size_t>(s));
  }
  return b;
}

FormulaAutomaton formula_automaton(const Nnf& f, Enumeration how) {
  FormulaAutomaton fa;
  fa.formula = f;
  const SubformulaSet sub(f);
  fa.closure_size = sub.size();
  fa.nontrivial_size = sub.nontrivial_size();
  Automaton raw = build_gba(sub, how);
  fa.consistent = raw.size() - 1;
  fa.gba = minimize(prune(restrict_reachable(raw)));
  fa.nba = prune(degeneralize(fa.gba));
  return fa;
}

// --- membership -----------------------------------------------------------

Word project_word(const Word& w, const std::vector<std::string>& aps) {
  std::vector<std::size_t> idx;
  for (const auto& ap : aps) {
    const auto it = std::find(w.aps.begin(), w.aps.end(), ap);
    if (it == w.aps.end()) throw Error(ErrorKind::AlphabetMismatch, "word has no AP '" + ap + "'");
    idx.push_back(static_cast<std::size_t>(it - w.aps.begin()));
  }
  auto conv = [&](Label l) {
    Label r = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) r = label_set(r, i, label_get(l, idx[i]));
    return r;
  };
  Word out;
  out.aps = aps;
  for (Label l : w.prefix) out.prefix.push_back(conv(l));
  for (Label l : w.loop) out.loop.push_back(conv(l));
  return out;
}

bool accepts_lasso(const Automaton& a, const Word& w) {
  const WordCheck check = check_signal_word(w);
  if (!check.ok) throw Error(ErrorKind::Precondition, "not a signal word: " + check.message);
  const Word pw = project_word(w, a.aps);
  const std::size_t len = pw.size();
  // product nodes (state, position), numbered on discovery
  std::map<std::pair<int, std::size_t>, int> ids;
  std::vector<std::pair<int, std::size_t>> nodes;
  std::vector<std::vector<int>> g;
  auto id_of = [&](int s, std::size_t k) {
    const auto [it, fresh] = ids.emplace(std::make_pair(s, k), static_cast<int>(nodes.size()));
    if (fresh) {
      nodes.emplace_back(s, k);
      g.emplace_back();
    }
    return it->second;
  };
  id_of(0, 0);
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    const auto [s, k] = nodes[n];
    const Label letter = pw.at(k);
    const std::size_t nk = pw.succ(k);
    for (const auto& [l, t] : a.out[static_cast<std::size_t>(s)])
      if (l == letter) {
        const int id = id_of(t, nk);
        g[n].push_back(id);
      }
  }
  (void)len;
  const std::size_t sets = a.accepting.size();
  const auto good = good_cycle_nodes(g, sets, [&](std::size_t i, std::size_t node) {
    return a.accepting[i][static_cast<std::size_t>(nodes[node].first)] != 0;
  });
  return !good.empty();
}

// --- export ---------------------------------------------------------------

std::string to_dot(const Automaton& a) {
  std::string s = "digraph automaton {\n  rankdir=LR;\n  init [shape=point];\n";
  for (std::size_t q = 0; q < a.size(); ++q) {
    std::string sets;
    for (std::size_t i = 0; i < a.accepting.size(); ++i)
      if (a.accepting[i][q]) sets += (sets.empty() ? "" : ",") + std::to_string(i);
    const bool acc = a.accepting.size() == 1 && a.accepting[0][q];
    s += "  \"" + a.names[q] + "\" [shape=" + (acc ? "doublecircle" : "circle");
    if (a.accepting.size() > 1 && !sets.empty()) s += ", xlabel=\"{" + sets + "}\"";
    s += "];\n";
  }
  s += "  init -> \"" + a.names[0] + "\";\n";
  for (std::size_t q = 0; q < a.size(); ++q)
    for (const auto& [l, t] : a.out[q])
      s += "  \"" + a.names[q] + "\" -> \"" + a.names[static_cast<std::size_t>(t)] + "\" [label=\"" +
           label_to_string(l, a.aps) + "\"];\n";
  s += "}\n";
  return s;
}

std::string to_json(const Automaton& a) {
  nlohmann::ordered_json j;
  j["aps"] = a.aps;
  j["states"] = a.names;
  j["initial"] = a.names[0];
  auto edges = nlohmann::ordered_json::array();
  for (std::size_t q = 0; q < a.size(); ++q)
    for (const auto& [l, t] : a.out[q])
      edges.push_back({{"src", a.names[q]}, {"label", label_to_string(l, a.aps)}, {"dst", a.names[static_cast<std::size_t>(t)]}});
  j["edges"] = edges;
  auto acc = nlohmann::ordered_json::array();
  for (const auto& set : a.accepting) {
    auto names = nlohmann::ordered_json::array();
    for (std::size_t q = 0; q < a.size(); ++q)
      if (set[q]) names.push_back(a.names[q]);
    acc.push_back(names);
  }
  j["accepting"] = acc;
  j["accepting_formulas"] = a.accepting_names;
  return j.dump(2);
}

}  // namespace apobs
