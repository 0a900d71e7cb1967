#pragma once

// JSON import/export of system specs, symbolic models and games, plus small
// file helpers.

#include <string>

#include "apobs/abstraction.hpp"
#include "apobs/game.hpp"

namespace apobs {

/// {"dim","domain","eta","tau","x_in","boundary","modes":{"default","field"},"aps"}.
/// The field is a generator name ("patrol", "uniform") or a per-cell table.
std::string spec_to_json(const SystemSpec& spec, int indent = 2);
SystemSpec spec_from_json(const std::string& text);

std::string model_to_json(const SymbolicModel& m);
/// Game graph; with a solution the verdict, W0 and the strategy are included.
std::string game_to_json(const BuchiGame& g, const SolveResult* sol = nullptr);
/// {"verdict","w0_size","strategy":[{"vertex","move"}],"stats"}.
std::string solve_result_to_json(const SolveResult& sol);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace apobs
