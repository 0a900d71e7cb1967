#include "apobs/apobs.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <optional>
#include <string>

#include "apobs/error.hpp"
#include "apobs/json_io.hpp"
#include "apobs/pipeline.hpp"

struct apobs_system {
  apobs::SystemSpec spec;
};

struct apobs_report {
  apobs::Report report;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_stage;

apobs_status status_of(apobs::ErrorKind k) {
  using apobs::ErrorKind;
  switch (k) {
    case ErrorKind::Parse: return APOBS_ERR_PARSE;
    case ErrorKind::Unsupported: return APOBS_ERR_UNSUPPORTED;
    case ErrorKind::InvalidArgument: return APOBS_ERR_INVALID_ARGUMENT;
    case ErrorKind::Chopping: return APOBS_ERR_CHOPPING;
    case ErrorKind::Spec: return APOBS_ERR_SPEC;
    case ErrorKind::TauValidation: return APOBS_ERR_TAU;
    case ErrorKind::Precondition: return APOBS_ERR_PRECONDITION;
    case ErrorKind::AlphabetMismatch: return APOBS_ERR_ALPHABET;
    case ErrorKind::Io: return APOBS_ERR_IO;
    case ErrorKind::Internal: return APOBS_ERR_INTERNAL;
  }
  return APOBS_ERR_INTERNAL;
}

template <class F>
apobs_status guarded(F&& f) {
  g_error.clear();
  g_stage.clear();
  try {
    f();
    return APOBS_OK;
  } catch (const apobs::StageError& e) {
    g_error = e.what();
    g_stage = e.stage();
    return status_of(e.kind());
  } catch (const apobs::Error& e) {
    g_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_error = "out of memory";
  } catch (const std::exception& e) {
    g_error = e.what();
  } catch (...) {
    g_error = "unknown error";
  }
  return APOBS_ERR_INTERNAL;
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void need(const void* p, const char* what) {
  if (!p) throw apobs::Error(apobs::ErrorKind::InvalidArgument, std::string(what) + " must not be NULL");
}

apobs::VerifyOptions convert(const apobs_verify_options* opt) {
  apobs::VerifyOptions o;
  if (opt) {
    o.repeat = opt->repeat;
    o.allow_unsound_tau = opt->allow_unsound_tau != 0;
    o.single_change_filter = opt->single_change_filter != 0;
  }
  return o;
}

}  // namespace

extern "C" {

const char* apobs_version(void) { return "1.0.0"; }
const char* apobs_last_error(void) { return g_error.c_str(); }
const char* apobs_last_error_stage(void) { return g_stage.c_str(); }
void apobs_string_free(char* s) { std::free(s); }

void apobs_verify_options_init(apobs_verify_options* opt) {
  if (!opt) return;
  opt->repeat = 1;
  opt->allow_unsound_tau = 0;
  opt->single_change_filter = 1;
}

apobs_status apobs_scenario_json(const char* name, double eta, const char* r_mode, char** out_json) {
  return guarded([&] {
    need(name, "name");
    need(out_json, "out_json");
    if (std::strcmp(name, "drone") != 0)
      throw apobs::Error(apobs::ErrorKind::InvalidArgument, std::string("unknown scenario '") + name + "'");
    apobs::DroneOptions d;
    if (eta > 0) d.eta = eta;
    if (r_mode) d.r_mode = r_mode;
    *out_json = dup(apobs::spec_to_json(apobs::drone_scenario(d)) + "\n");
  });
}

apobs_status apobs_system_from_json(const char* json, apobs_system** out) {
  return guarded([&] {
    need(json, "json");
    need(out, "out");
    *out = new apobs_system{apobs::spec_from_json(json)};
  });
}

apobs_status apobs_system_from_file(const char* path, apobs_system** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new apobs_system{apobs::spec_from_json(apobs::read_file(path))};
  });
}

apobs_status apobs_system_override(apobs_system* sys, double eta, double tau) {
  return guarded([&] {
    need(sys, "sys");
    std::optional<double> e, t;
    if (eta > 0) e = eta;
    if (tau > 0) t = tau;
    apobs::apply_overrides(sys->spec, e, t);
  });
}

apobs_status apobs_system_to_json(const apobs_system* sys, char** out_json) {
  return guarded([&] {
    need(sys, "sys");
    need(out_json, "out_json");
    *out_json = dup(apobs::spec_to_json(sys->spec) + "\n");
  });
}

size_t apobs_system_cells(const apobs_system* sys) {
  if (!sys) return 0;
  return apobs::Grid(sys->spec.domain, sys->spec.eta).size();
}

void apobs_system_free(apobs_system* sys) { delete sys; }

apobs_status apobs_formula_automaton(const char* formula, const char* format, char** out_text, size_t* states) {
  return guarded([&] {
    need(formula, "formula");
    need(out_text, "out_text");
    const auto fa = apobs::formula_automaton(apobs::to_nnf(formula));
    const std::string fmt = format ? format : "dot";
    if (fmt == "dot") *out_text = dup(apobs::to_dot(fa.nba));
    else if (fmt == "json") *out_text = dup(apobs::to_json(fa.nba));
    else throw apobs::Error(apobs::ErrorKind::InvalidArgument, "format must be 'dot' or 'json'");
    if (states) *states = fa.nba.size();
  });
}

apobs_status apobs_verify_export(const apobs_system* sys, const char* formula, const apobs_verify_options* opt,
                                 apobs_report** out, char** automaton_dot, char** game_json) {
  return guarded([&] {
    need(sys, "sys");
    need(formula, "formula");
    need(out, "out");
    apobs::VerifyArtifacts art;
    auto* r = new apobs_report{apobs::verify(sys->spec, formula, convert(opt), &art)};
    try {
      if (automaton_dot) *automaton_dot = dup(apobs::to_dot(art.automaton.nba));
      if (game_json) *game_json = dup(apobs::game_to_json(art.game, &art.solution));
    } catch (...) {
      delete r;
      throw;
    }
    *out = r;
  });
}

apobs_status apobs_verify(const apobs_system* sys, const char* formula, const apobs_verify_options* opt,
                          apobs_report** out) {
  return apobs_verify_export(sys, formula, opt, out, nullptr, nullptr);
}

int apobs_report_verified(const apobs_report* r) { return r && r->report.verified() ? 1 : 0; }
size_t apobs_report_automaton_states(const apobs_report* r) { return r ? r->report.automaton_states : 0; }
size_t apobs_report_game_player(const apobs_report* r) { return r ? r->report.game_player : 0; }
size_t apobs_report_game_opponent(const apobs_report* r) { return r ? r->report.game_opponent : 0; }
size_t apobs_report_model_states(const apobs_report* r) { return r ? r->report.model_states : 0; }
double apobs_report_total_time(const apobs_report* r) { return r ? r->report.total_time : 0.0; }
void apobs_report_times(const apobs_report* r, double* automaton, double* model, double* game, double* solve,
                        double* total) {
  if (!r) return;
  if (automaton) *automaton = r->report.automaton_time;
  if (model) *model = r->report.model_time;
  if (game) *game = r->report.game_time;
  if (solve) *solve = r->report.solve_time;
  if (total) *total = r->report.total_time;
}
int apobs_report_tau_pass(const apobs_report* r) { return r && r->report.tau_pass ? 1 : 0; }

apobs_status apobs_report_json(const apobs_report* r, char** out_json) {
  return guarded([&] {
    need(r, "report");
    need(out_json, "out_json");
    *out_json = dup(apobs::report_to_json(r->report) + "\n");
  });
}

apobs_status apobs_report_csv_row(const apobs_report* r, int with_header, char** out_csv) {
  return guarded([&] {
    need(r, "report");
    need(out_csv, "out_csv");
    std::string s = with_header ? apobs::csv_header() + "\n" : "";
    *out_csv = dup(s + apobs::csv_row(r->report) + "\n");
  });
}

apobs_status apobs_report_from_json(const char* json, apobs_report** out) {
  return guarded([&] {
    need(json, "json");
    need(out, "out");
    *out = new apobs_report{apobs::report_from_json(json)};
  });
}

void apobs_report_free(apobs_report* r) { delete r; }

size_t apobs_bench_count(void) { return apobs::paper_bench().size(); }

const char* apobs_bench_formula(size_t i) {
  const auto& rows = apobs::paper_bench();
  return i < rows.size() ? rows[i].formula : nullptr;
}

int apobs_bench_paper_sizes(size_t i, size_t* automaton_states, size_t* game_player, size_t* game_opponent) {
  const auto& rows = apobs::paper_bench();
  if (i >= rows.size()) return 0;
  if (automaton_states) *automaton_states = static_cast<size_t>(rows[i].automaton_states);
  if (game_player) *game_player = static_cast<size_t>(rows[i].game_player);
  if (game_opponent) *game_opponent = static_cast<size_t>(rows[i].game_opponent);
  return 1;
}

int apobs_bench_paper_times(size_t i, double* automaton, double* game, double* solve, double* total) {
  const auto& rows = apobs::paper_bench();
  if (i >= rows.size()) return 0;
  if (automaton) *automaton = rows[i].automaton_time;
  if (game) *game = rows[i].game_time;
  if (solve) *solve = rows[i].solve_time;
  if (total) *total = rows[i].total_time;
  return 1;
}

}  // extern "C"
