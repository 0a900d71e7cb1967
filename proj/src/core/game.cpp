#include "apobs/game.hpp"

#include <algorithm>
#include <climits>
#include <deque>
#include <map>
#include <random>
#include <tuple>
#include <unordered_map>

#include "apobs/error.hpp"

namespace apobs {

std::size_t BuchiGame::player_count() const {
  std::size_t n = 0;
  for (std::size_t v = 0; v < size(); ++v)
    if (owner[v] == 0 && static_cast<int>(v) != losing_sink && static_cast<int>(v) != winning_sink) ++n;
  return n;
}

std::size_t BuchiGame::opponent_count() const {
  std::size_t n = 0;
  for (std::size_t v = 0; v < size(); ++v)
    if (owner[v] == 1 && static_cast<int>(v) != losing_sink && static_cast<int>(v) != winning_sink) ++n;
  return n;
}

std::size_t BuchiGame::edge_count() const {
  std::size_t n = 0;
  for (const auto& s : succ) n += s.size();
  return n;
}

std::size_t SolveResult::w0_size() const { return static_cast<std::size_t>(std::count(win0.begin(), win0.end(), 1)); }

// --- product --------------------------------------------------------------

BuchiGame build_game(const SymbolicModel& s, const Automaton& a) {
  if (s.aps != a.aps) throw Error(ErrorKind::AlphabetMismatch, "model and automaton track different APs");
  if (a.accepting.size() != 1) throw Error(ErrorKind::Precondition, "automaton must have exactly one accepting set");
  struct V {
    bool player;
    int q;
    Label o;
    int b;
  };
  std::vector<V> vs;
  std::vector<std::vector<int>> succ;
  std::map<std::pair<int, int>, int> opp_id;
  std::map<std::tuple<int, Label, int>, int> pl_id;
  std::deque<int> work;
  auto opp = [&](int q, int b) {
    auto [it, fresh] = opp_id.try_emplace({q, b}, static_cast<int>(vs.size()));
    if (fresh) {
      vs.push_back({false, q, 0, b});
      succ.emplace_back();
      work.push_back(it->second);
    }
    return it->second;
  };
  auto pl = [&](int q, Label o, int b) {
    auto [it, fresh] = pl_id.try_emplace({q, o, b}, static_cast<int>(vs.size()));
    if (fresh) {
      vs.push_back({true, q, o, b});
      succ.emplace_back();
      work.push_back(it->second);
    }
    return it->second;
  };
  opp(s.initial, 0);
  while (!work.empty()) {
    const int v = work.front();
    work.pop_front();
    const V cur = vs[static_cast<std::size_t>(v)];
    std::vector<int> out;
    if (!cur.player) {
      for (const auto& [o, q2] : s.out[static_cast<std::size_t>(cur.q)]) out.push_back(pl(q2, o, cur.b));
    } else {
      const auto& e = a.out[static_cast<std::size_t>(cur.b)];
      auto it = std::lower_bound(e.begin(), e.end(), std::make_pair(cur.o, INT_MIN));
      for (; it != e.end() && it->first == cur.o; ++it) out.push_back(opp(cur.q, it->second));
    }
    succ[static_cast<std::size_t>(v)] = std::move(out);
  }

  std::vector<int> order(vs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    const V& a1 = vs[static_cast<std::size_t>(x)];
    const V& b1 = vs[static_cast<std::size_t>(y)];
    return std::make_tuple(a1.q, a1.player, a1.o, a1.b) < std::make_tuple(b1.q, b1.player, b1.o, b1.b);
  });
  std::vector<int> rank(vs.size());
  for (std::size_t i = 0; i < order.size(); ++i) rank[static_cast<std::size_t>(order[i])] = static_cast<int>(i);

  BuchiGame g;
  const std::size_t n = vs.size();
  g.owner.resize(n);
  g.succ.resize(n);
  g.buchi.resize(n);
  g.q.resize(n);
  g.b.resize(n);
  g.o.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto old = static_cast<std::size_t>(order[i]);
    const V& v = vs[old];
    g.owner[i] = v.player ? 0 : 1;
    g.q[i] = v.q;
    g.b[i] = v.b;
    g.o[i] = v.o;
    g.buchi[i] = !v.player && a.in_set(0, v.b);
    for (int w : succ[old]) g.succ[i].push_back(rank[static_cast<std::size_t>(w)]);
    std::sort(g.succ[i].begin(), g.succ[i].end());
  }
  g.initial = rank[0];
  auto add_sink = [&](bool winning) {
    const int id = static_cast<int>(g.size());
    g.owner.push_back(1);
    g.succ.push_back({id});
    g.buchi.push_back(winning ? 1 : 0);
    g.q.push_back(-1);
    g.b.push_back(-1);
    g.o.push_back(0);
    return id;
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (!g.succ[v].empty()) continue;
    if (g.owner[v] == 0) {
      if (g.losing_sink < 0) g.losing_sink = add_sink(false);
      g.succ[v].push_back(g.losing_sink);
      g.stuck_player.push_back(static_cast<int>(v));
    } else {
      if (g.winning_sink < 0) g.winning_sink = add_sink(true);
      g.succ[v].push_back(g.winning_sink);
      g.stuck_opponent.push_back(static_cast<int>(v));
    }
  }
  return g;
}

// --- Zielonka -------------------------------------------------------------

namespace {

struct Solver {
  const BuchiGame& g;
  std::vector<std::vector<int>> pred;
  std::vector<int> strategy;
  SolveStats stats;

  explicit Solver(const BuchiGame& game) : g(game), pred(game.size()), strategy(game.size(), -1) {
    for (std::size_t v = 0; v < g.size(); ++v)
      for (int w : g.succ[v]) pred[static_cast<std::size_t>(w)].push_back(static_cast<int>(v));
  }

  // Attractor of `target` for `player` inside `alive`. Player 0 attractor
  // moves are written to the strategy.
  std::vector<char> attractor(const std::vector<char>& alive, const std::vector<char>& target, int player) {
    ++stats.attractors;
    const std::size_t n = g.size();
    std::vector<char> attr(n, 0);
    std::vector<int> count(n, 0);
    std::deque<int> queue;
    for (std::size_t v = 0; v < n; ++v) {
      if (!alive[v]) continue;
      for (int w : g.succ[v])
        if (alive[static_cast<std::size_t>(w)]) ++count[v];
      if (target[v]) {
        attr[v] = 1;
        queue.push_back(static_cast<int>(v));
      }
    }
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int w : pred[static_cast<std::size_t>(u)]) {
        const auto wi = static_cast<std::size_t>(w);
        if (!alive[wi] || attr[wi]) continue;
        if (g.owner[wi] == player) {
          attr[wi] = 1;
          if (player == 0) strategy[wi] = u;
          queue.push_back(w);
        } else if (--count[wi] == 0) {
          attr[wi] = 1;
          queue.push_back(w);
        }
      }
    }
    return attr;
  }

  // Winning region of the Player in the subgame `alive`. Priorities are 2 on
  // F_g and 1 elsewhere; the maximal priority seen infinitely often decides.
  std::vector<char> solve(std::vector<char> alive) {
    ++stats.recursive_calls;
    const std::size_t n = g.size();
    for (;;) {
      std::vector<char> top(n, 0);
      bool any = false;
      for (std::size_t v = 0; v < n; ++v)
        if (alive[v] && g.buchi[v]) top[v] = any = 1;
      // only priority 1 left: the Opponent wins everywhere
      if (!any) return std::vector<char>(n, 0);
      const auto a = attractor(alive, top, 0);
      for (std::size_t v = 0; v < n; ++v) {
        if (!top[v] || g.owner[v] != 0) continue;
        for (int w : g.succ[v])
          if (alive[static_cast<std::size_t>(w)]) {
            strategy[v] = w;
            break;
          }
      }
      std::vector<char> sub(n, 0);
      bool rest = false;
      for (std::size_t v = 0; v < n; ++v)
        if (alive[v] && !a[v]) sub[v] = rest = 1;
      std::vector<char> w1(n, 0);
      bool opp_wins = false;
      if (rest) {
        const auto w0 = solve(sub);
        for (std::size_t v = 0; v < n; ++v)
          if (sub[v] && !w0[v]) w1[v] = opp_wins = 1;
      }
      if (!opp_wins) return alive;
      const auto b = attractor(alive, w1, 1);
      for (std::size_t v = 0; v < n; ++v)
        if (b[v]) alive[v] = 0;
    }
  }
};

void require_total(const BuchiGame& g) {
  for (std::size_t v = 0; v < g.size(); ++v)
    if (g.succ[v].empty()) throw Error(ErrorKind::Precondition, "vertex " + std::to_string(v) + " has no successor");
}

}  // namespace

SolveResult solve_buchi(const BuchiGame& g) {
  require_total(g);
  Solver s(g);
  SolveResult r;
  r.win0 = s.solve(std::vector<char>(g.size(), 1));
  r.strategy = std::move(s.strategy);
  for (std::size_t v = 0; v < g.size(); ++v)
    if (!r.win0[v] || g.owner[v] != 0) r.strategy[v] = -1;
  r.verdict = g.size() > 0 && r.win0[static_cast<std::size_t>(g.initial)];
  r.stats = s.stats;
  return r;
}

std::vector<char> solve_buchi_fixpoint(const BuchiGame& g) {
  require_total(g);
  const std::size_t n = g.size();
  auto cpre = [&](const std::vector<char>& x) {
    std::vector<char> out(n, 0);
    for (std::size_t v = 0; v < n; ++v) {
      const auto& s = g.succ[v];
      if (g.owner[v] == 0)
        out[v] = std::any_of(s.begin(), s.end(), [&](int w) { return x[static_cast<std::size_t>(w)] != 0; });
      else
        out[v] = std::all_of(s.begin(), s.end(), [&](int w) { return x[static_cast<std::size_t>(w)] != 0; });
    }
    return out;
  };
  std::vector<char> z(n, 1);
  for (;;) {
    const auto cz = cpre(z);
    std::vector<char> y(n, 0);
    for (;;) {
      const auto cy = cpre(y);
      std::vector<char> next(n);
      for (std::size_t v = 0; v < n; ++v) next[v] = (g.buchi[v] && cz[v]) || cy[v];
      if (next == y) break;
      y = std::move(next);
    }
    if (y == z) return z;
    z = std::move(y);
  }
}

bool check_strategy(const BuchiGame& g, const std::vector<int>& strategy, int trials, std::size_t horizon,
                    std::uint64_t seed, int start) {
  if (g.size() == 0) return false;
  const int from = start < 0 ? g.initial : start;
  const std::size_t window = g.size();
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    std::unordered_map<int, int> opp_choice;  // positional, drawn lazily
    int v = from;
    std::size_t since = 0;  // steps since the last F_g visit (or the start)
    for (std::size_t step = 0; step < horizon; ++step) {
      const auto vi = static_cast<std::size_t>(v);
      if (g.buchi[vi]) since = 0;
      else if (++since > window) return false;
      int next;
      if (g.owner[vi] == 0) {
        next = vi < strategy.size() ? strategy[vi] : -1;
        if (next < 0)
          throw Error(ErrorKind::Precondition, "strategy undefined at Player vertex " + std::to_string(v));
        if (!std::binary_search(g.succ[vi].begin(), g.succ[vi].end(), next) &&
            std::find(g.succ[vi].begin(), g.succ[vi].end(), next) == g.succ[vi].end())
          return false;
      } else {
        auto [it, fresh] = opp_choice.try_emplace(v, 0);
        if (fresh) {
          std::uniform_int_distribution<std::size_t> pick(0, g.succ[vi].size() - 1);
          it->second = g.succ[vi][pick(rng)];
        }
        next = it->second;
      }
      v = next;
    }
  }
  return true;
}

}  // namespace apobs
