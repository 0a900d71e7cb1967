#pragma once

// Büchi games: product of a symbolic model with an AP-observation automaton,
// Zielonka's algorithm on the two-priority parity encoding, and a strategy
// checker.

#include <cstdint>
#include <vector>

#include "apobs/abstraction.hpp"
#include "apobs/automaton.hpp"

namespace apobs {

/// Arena plus product bookkeeping. Vertices owned by the Player (owner 0) are
/// triples (q, o, b); Opponent vertices (owner 1) are pairs (q, b). Games built
/// by hand may leave q/o/b empty.
struct BuchiGame {
  std::vector<char> owner;               // 0 Player, 1 Opponent
  std::vector<std::vector<int>> succ;    // sorted
  std::vector<char> buchi;               // F_g
  int initial = 0;

  std::vector<int> q, b;                 // per vertex, -1 for sinks
  std::vector<Label> o;                  // Player vertices only
  int losing_sink = -1;                  // target of stuck Player vertices
  int winning_sink = -1;                 // target of stuck Opponent vertices
  std::vector<int> stuck_player, stuck_opponent;

  std::size_t size() const { return succ.size(); }
  std::size_t player_count() const;      // excluding sinks
  std::size_t opponent_count() const;    // excluding sinks
  std::size_t edge_count() const;
};

/// Reachable product from (q_in, q0). Vertices are ordered by
/// (cell, kind, label, automaton state), sinks last.
BuchiGame build_game(const SymbolicModel& s, const Automaton& b);

struct SolveStats {
  std::size_t recursive_calls = 0;
  std::size_t attractors = 0;
};

struct SolveResult {
  std::vector<char> win0;          // per vertex
  std::vector<int> strategy;       // Player move per vertex in W0, -1 elsewhere
  bool verdict = false;            // initial vertex in W0
  SolveStats stats;

  std::size_t w0_size() const;
};

/// Throws Precondition if a vertex has no successor.
SolveResult solve_buchi(const BuchiGame& g);

/// Classical nested fixpoint nu Z. mu Y. (F & Cpre(Z)) | Cpre(Y); winning
/// region only. Used to cross-check solve_buchi.
std::vector<char> solve_buchi_fixpoint(const BuchiGame& g);

/// Plays `strategy` against random positional Opponent strategies starting at
/// `start` (the initial vertex if negative). Every play must visit F_g within
/// |V| steps and then at least once in every |V|-step window. Throws
/// Precondition when the strategy is undefined at a reached Player vertex.
bool check_strategy(const BuchiGame& g, const std::vector<int>& strategy, int trials, std::size_t horizon,
                    std::uint64_t seed = 1, int start = -1);

}  // namespace apobs
