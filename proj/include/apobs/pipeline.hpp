#pragma once

// End-to-end verification, the drone scenario and the benchmark formulas.

#include <optional>
#include <string>
#include <vector>

#include "apobs/abstraction.hpp"
#include "apobs/automaton.hpp"
#include "apobs/game.hpp"
#include "apobs/report.hpp"

namespace apobs {

struct DroneOptions {
  double eta = 1.0;
  double tau = 1.0;
  std::string r_mode = "or";    // "or": outside the central cross; "and": the four corner quadrants
  std::string field = "patrol";  // "patrol" or "uniform"
  double ring = 13.0;            // patrol: ring radius (infinity norm)
  double band = 1.0;             // patrol: tolerated deviation from the ring
  double heading = 0.0;          // uniform: heading of every cell
};

SystemSpec drone_scenario(const DroneOptions& opt = {});

/// Heading of the clockwise square patrol around the origin at point x.
double patrol_heading(double x, double y, double ring, double band);

/// Recomputes the per-cell modes from the generator recorded in the spec
/// (after a change of eta). Throws Spec for hand-written tables.
void regenerate_field(SystemSpec& spec);

/// Applies eta/tau overrides; the field is regenerated when eta changes.
void apply_overrides(SystemSpec& spec, std::optional<double> eta, std::optional<double> tau);

struct VerifyOptions {
  int repeat = 1;
  bool allow_unsound_tau = false;
  bool single_change_filter = true;
};

/// Intermediate results of the last run, kept for export.
struct VerifyArtifacts {
  FormulaAutomaton automaton;
  SymbolicModel model;
  BuchiGame game;
  SolveResult solution;
  TauValidation tau;
};

/// parse -> automaton -> tau check -> abstraction -> game -> solve. Errors are
/// rethrown as StageError naming the failing stage.
Report verify(const SystemSpec& spec, const std::string& formula, const VerifyOptions& opt = {},
              VerifyArtifacts* artifacts = nullptr);

struct BenchRow {
  const char* formula;
  int automaton_states;
  int game_player;
  int game_opponent;
  double automaton_time;
  double game_time;
  double solve_time;
  double total_time;
};

/// The nine benchmark rows with the published reference values (labelled
/// "paper" wherever shown).
const std::vector<BenchRow>& paper_bench();
inline constexpr double kPaperModelTime = 0.77;
inline constexpr int kPaperModelStates = 1089;

}  // namespace apobs
