// apobs-cli: scenario generation, verification, benchmark table and automaton
// export on top of the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "apobs/apobs.h"

namespace {

struct CStr {
  char* p = nullptr;
  ~CStr() { apobs_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

using System = std::unique_ptr<apobs_system, decltype(&apobs_system_free)>;
using ReportPtr = std::unique_ptr<apobs_report, decltype(&apobs_report_free)>;

int fail(const std::string& context) {
  std::cerr << "error";
  if (!context.empty()) std::cerr << " (" << context << ")";
  std::cerr << ": " << apobs_last_error() << "\n";
  return 1;
}

bool write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return true;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "error: cannot write '" << path << "'\n";
    return false;
  }
  return true;
}

std::optional<std::string> read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

System load_system(const std::string& path, double eta, double tau) {
  apobs_system* raw = nullptr;
  if (path.empty()) {
    CStr json;
    if (apobs_scenario_json("drone", 0, nullptr, &json.p) != APOBS_OK) return System(nullptr, apobs_system_free);
    if (apobs_system_from_json(json.p, &raw) != APOBS_OK) return System(nullptr, apobs_system_free);
  } else if (apobs_system_from_file(path.c_str(), &raw) != APOBS_OK) {
    return System(nullptr, apobs_system_free);
  }
  System sys(raw, apobs_system_free);
  if (apobs_system_override(sys.get(), eta, tau) != APOBS_OK) return System(nullptr, apobs_system_free);
  return sys;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous-time LTL verification with AP-observation automata"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(apobs_version()));

  // scenario
  auto* scen = app.add_subcommand("scenario", "Write a built-in system spec as JSON");
  std::string scen_name, scen_out, r_mode = "or";
  double scen_eta = 0;
  scen->add_option("name", scen_name, "Scenario name (drone)")->required();
  scen->add_option("--eta", scen_eta, "Grid pitch");
  scen->add_option("--r-mode", r_mode, "Region of r: 'or' (outside the cross) or 'and' (corner quadrants)");
  scen->add_option("-o,--out", scen_out, "Output file (default stdout)");

  // verify
  auto* ver = app.add_subcommand("verify", "Verify a system against a formula");
  std::string system_path, formula, out_path, export_aut, export_game;
  double eta = 0, tau = 0;
  int repeat = 10;
  bool unsound = false, no_filter = false, quiet = false;
  ver->add_option("--system", system_path, "System spec JSON")->required();
  ver->add_option("--formula", formula, "LTL formula")->required();
  ver->add_option("--eta", eta, "Override the grid pitch");
  ver->add_option("--tau", tau, "Override the sampling period");
  ver->add_option("--repeat", repeat, "Runs to average timings over")->check(CLI::PositiveNumber);
  ver->add_option("--out", out_path, "Write the report (JSON, or CSV for *.csv)");
  ver->add_option("--export-automaton", export_aut, "Write the automaton as DOT");
  ver->add_option("--export-game", export_game, "Write the solved game as JSON");
  ver->add_flag("--allow-unsound-tau", unsound, "Continue when the tau bound fails");
  ver->add_flag("--no-single-change-filter", no_filter, "Keep labels where two APs change in one step");
  ver->add_flag("-q,--quiet", quiet, "Only print the verdict");

  // bench
  auto* bench = app.add_subcommand("bench", "Regenerate the benchmark table");
  std::string bench_system, formulas_path, csv_path;
  int bench_repeat = 10;
  bool strict_tau = false;
  bench->add_option("--system", bench_system, "System spec JSON (default: drone scenario)");
  bench->add_option("--formulas", formulas_path, "File with one formula per line");
  bench->add_option("--repeat", bench_repeat, "Runs to average timings over")->check(CLI::PositiveNumber);
  bench->add_option("--csv", csv_path, "Write all reports as CSV");
  bench->add_flag("--strict-tau", strict_tau, "Fail rows whose tau bound does not hold");

  // automaton
  auto* aut = app.add_subcommand("automaton", "Print the automaton of a formula");
  std::string aut_formula, aut_format = "dot", aut_out;
  aut->add_option("--formula", aut_formula, "LTL formula")->required();
  aut->add_option("--format", aut_format, "dot or json")->check(CLI::IsMember({"dot", "json"}));
  aut->add_option("-o,--out", aut_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (*scen) {
    CStr json;
    if (apobs_scenario_json(scen_name.c_str(), scen_eta, r_mode.c_str(), &json.p) != APOBS_OK) return fail("scenario");
    if (!write_text(scen_out, json.str())) return 1;
    if (!scen_out.empty()) std::cerr << "wrote " << scen_out << "\n";
    return 0;
  }

  if (*aut) {
    CStr text;
    size_t states = 0;
    if (apobs_formula_automaton(aut_formula.c_str(), aut_format.c_str(), &text.p, &states) != APOBS_OK)
      return fail("automaton");
    if (!aut_out.empty()) std::cerr << states << " states\n";
    return write_text(aut_out, text.str()) ? 0 : 1;
  }

  if (*ver) {
    System sys = load_system(system_path, eta, tau);
    if (!sys) return fail("system");
    apobs_verify_options opt;
    apobs_verify_options_init(&opt);
    opt.repeat = repeat;
    opt.allow_unsound_tau = unsound;
    opt.single_change_filter = !no_filter;
    apobs_report* raw = nullptr;
    CStr dot, game;
    if (apobs_verify_export(sys.get(), formula.c_str(), &opt, &raw, export_aut.empty() ? nullptr : &dot.p,
                            export_game.empty() ? nullptr : &game.p) != APOBS_OK) {
      std::string stage = apobs_last_error_stage();
      return fail(stage.empty() ? "verify" : "stage " + stage);
    }
    ReportPtr rep(raw, apobs_report_free);
    const bool ok = apobs_report_verified(rep.get()) != 0;
    if (!export_aut.empty() && !write_text(export_aut, dot.str())) return 1;
    if (!export_game.empty() && !write_text(export_game, game.str())) return 1;
    if (!out_path.empty()) {
      CStr text;
      const bool csv = out_path.size() > 4 && out_path.substr(out_path.size() - 4) == ".csv";
      const apobs_status st =
          csv ? apobs_report_csv_row(rep.get(), 1, &text.p) : apobs_report_json(rep.get(), &text.p);
      if (st != APOBS_OK) return fail("report");
      if (!write_text(out_path, text.str())) return 1;
    }
    if (quiet) {
      std::cout << (ok ? "VERIFIED" : "INCONCLUSIVE") << "\n";
    } else {
      CStr text;
      if (apobs_report_json(rep.get(), &text.p) != APOBS_OK) return fail("report");
      std::cout << text.str();
      if (!apobs_report_tau_pass(rep.get())) std::cerr << "warning: tau bound not satisfied (unsound override)\n";
    }
    return ok ? 0 : 2;
  }

  if (*bench) {
    System sys = load_system(bench_system, 0, 0);
    if (!sys) return fail("system");
    std::vector<std::string> formulas;
    const bool reference = formulas_path.empty();
    if (reference) {
      for (size_t i = 0; i < apobs_bench_count(); ++i) formulas.push_back(apobs_bench_formula(i));
    } else {
      const auto text = read_text(formulas_path);
      if (!text) {
        std::cerr << "error: cannot read '" << formulas_path << "'\n";
        return 1;
      }
      std::istringstream in(*text);
      for (std::string line; std::getline(in, line);) {
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#') continue;
        formulas.push_back(line.substr(b, line.find_last_not_of(" \t\r") - b + 1));
      }
    }
    std::string csv;
    std::printf("%-22s %9s %9s %21s %21s %8s %8s %8s %8s  %s\n", "formula", "B_phi", "paper", "game P+O", "paper P+O",
                "t_B", "t_game", "t_solve", "t_total", "verdict");
    int status = 0;
    for (size_t i = 0; i < formulas.size(); ++i) {
      apobs_verify_options opt;
      apobs_verify_options_init(&opt);
      opt.repeat = bench_repeat;
      apobs_report* raw = nullptr;
      apobs_status st = apobs_verify(sys.get(), formulas[i].c_str(), &opt, &raw);
      if (st == APOBS_ERR_TAU && !strict_tau) {
        opt.allow_unsound_tau = 1;
        st = apobs_verify(sys.get(), formulas[i].c_str(), &opt, &raw);
      }
      if (st != APOBS_OK) {
        std::printf("%-22s error: %s\n", formulas[i].c_str(), apobs_last_error());
        status = 1;
        continue;
      }
      ReportPtr rep(raw, apobs_report_free);
      CStr row;
      if (apobs_report_csv_row(rep.get(), csv.empty(), &row.p) != APOBS_OK) return fail("report");
      csv += row.str();
      std::string paper_b = "-", paper_g = "-";
      size_t pb = 0, pp = 0, po = 0;
      if (reference && apobs_bench_paper_sizes(i, &pb, &pp, &po)) {
        paper_b = std::to_string(pb);
        paper_g = std::to_string(pp) + "+" + std::to_string(po);
      }
      std::string ours_g =
          std::to_string(apobs_report_game_player(rep.get())) + "+" + std::to_string(apobs_report_game_opponent(rep.get()));
      double t_b = 0, t_g = 0, t_s = 0, t_t = 0;
      apobs_report_times(rep.get(), &t_b, nullptr, &t_g, &t_s, &t_t);
      std::printf("%-22s %9zu %9s %21s %21s %8s %8s %8s %8s  %s%s\n", formulas[i].c_str(),
                  apobs_report_automaton_states(rep.get()), paper_b.c_str(), ours_g.c_str(), paper_g.c_str(),
                  fmt("%.2f", t_b).c_str(), fmt("%.2f", t_g).c_str(), fmt("%.2f", t_s).c_str(), fmt("%.2f", t_t).c_str(),
                  apobs_report_verified(rep.get()) ? "VERIFIED" : "INCONCLUSIVE",
                  apobs_report_tau_pass(rep.get()) ? "" : " (unsound tau)");
    }
    std::printf("symbolic model: %zu cells (paper: 1089)\n", apobs_system_cells(sys.get()));
    if (reference) std::printf("paper columns: published reference values, not measured here\n");
    std::printf(bench_repeat == 1 ? "timings: single run, not averaged\n" : "timings: averaged over %d runs\n",
                bench_repeat);
    if (!csv_path.empty() && !write_text(csv_path, csv)) return 1;
    return status;
  }
  return 1;
}
