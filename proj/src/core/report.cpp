#include "apobs/report.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <cstdio>
#include <type_traits>

#include <json.hpp>

#include "apobs/error.hpp"

namespace apobs {

namespace {

using json = nlohmann::ordered_json;

// Every serialized field, in column order.
template <class R, class F>
void visit(R& r, F&& f) {
  f("schema", r.schema);
  f("formula", r.formula);
  f("nnf", r.nnf);
  f("aps", r.aps);
  f("verdict", r.verdict);
  f("closure_size", r.closure_size);
  f("subformulas", r.subformulas);
  f("consistent_valuations", r.consistent_valuations);
  f("gba_states", r.gba_states);
  f("automaton_states", r.automaton_states);
  f("automaton_edges", r.automaton_edges);
  f("model_states", r.model_states);
  f("model_transitions", r.model_transitions);
  f("model_sink", r.model_sink);
  f("tau_pass", r.tau_pass);
  f("tau_overridden", r.tau_overridden);
  f("tau", r.tau);
  f("tau_max", r.tau_max);
  f("v_max", r.v_max);
  f("game_player", r.game_player);
  f("game_opponent", r.game_opponent);
  f("game_edges", r.game_edges);
  f("stuck_player", r.stuck_player);
  f("stuck_opponent", r.stuck_opponent);
  f("w0_size", r.w0_size);
  f("recursive_calls", r.recursive_calls);
  f("attractors", r.attractors);
  f("automaton_time", r.automaton_time);
  f("model_time", r.model_time);
  f("game_time", r.game_time);
  f("solve_time", r.solve_time);
  f("total_time", r.total_time);
  f("repeat", r.repeat);
  f("config_hash", r.config_hash);
}

std::string format_double(double d) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, res.ptr);
}

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

template <class T>
std::string field_text(const T& v) {
  if constexpr (std::is_same_v<T, std::string>) {
    return v;
  } else if constexpr (std::is_same_v<T, std::vector<std::string>>) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + v[i];
    return s;
  } else if constexpr (std::is_same_v<T, bool>) {
    return v ? "true" : "false";
  } else if constexpr (std::is_same_v<T, double>) {
    return format_double(v);
  } else {
    return std::to_string(v);
  }
}

template <class T>
void parse_field(const std::string& name, const std::string& text, T& v) {
  auto bad = [&] { throw Error(ErrorKind::Parse, "bad CSV value '" + text + "' for " + name); };
  if constexpr (std::is_same_v<T, std::string>) {
    v = text;
  } else if constexpr (std::is_same_v<T, std::vector<std::string>>) {
    v.clear();
    std::size_t start = 0;
    while (!text.empty() && start <= text.size()) {
      const auto end = text.find(';', start);
      v.push_back(text.substr(start, end == std::string::npos ? std::string::npos : end - start));
      if (end == std::string::npos) break;
      start = end + 1;
    }
  } else if constexpr (std::is_same_v<T, bool>) {
    if (text == "true") v = true;
    else if (text == "false") v = false;
    else bad();
  } else {
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) bad();
  }
}

// RFC 4180 records.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = any = true;
    } else if (c == ',') {
      row.push_back(std::move(cell));
      cell.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !cell.empty()) {
        row.push_back(std::move(cell));
        rows.push_back(std::move(row));
      }
      row.clear();
      cell.clear();
      any = false;
    } else {
      cell += c;
      any = true;
    }
  }
  if (quoted) throw Error(ErrorKind::Parse, "unterminated quote in CSV");
  if (any || !cell.empty()) {
    row.push_back(std::move(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

bool operator==(const Report& a, const Report& b) {
  return report_to_json(a, -1) == report_to_json(b, -1);
}

std::string report_to_json(const Report& r, int indent) {
  json j;
  visit(r, [&](const char* name, const auto& v) {
    using T = std::decay_t<decltype(v)>;
    if constexpr (std::is_same_v<T, double>) {
      if (!std::isfinite(v)) {
        j[name] = nullptr;  // infinite bound (no AP pairs)
        return;
      }
    }
    j[name] = v;
  });
  return j.dump(indent);
}

Report report_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("report JSON: ") + e.what());
  }
  Report r;
  try {
    visit(r, [&](const char* name, auto& v) {
      using T = std::decay_t<decltype(v)>;
      const auto& x = j.at(name);
      if constexpr (std::is_same_v<T, double>) {
        if (x.is_null()) {
          v = std::numeric_limits<double>::infinity();
          return;
        }
      }
      x.get_to(v);
    });
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("report JSON: ") + e.what());
  }
  if (r.schema != kReportSchema) throw Error(ErrorKind::Parse, "unknown report schema '" + r.schema + "'");
  return r;
}

std::string csv_header() {
  std::string s;
  Report r;
  visit(r, [&](const char* name, const auto&) { s += (s.empty() ? "" : ",") + std::string(name); });
  return s;
}

std::string csv_row(const Report& r) {
  std::string s;
  bool first = true;
  visit(r, [&](const char*, const auto& v) {
    if (!first) s += ',';
    first = false;
    s += quote_csv(field_text(v));
  });
  return s;
}

std::string reports_to_csv(const std::vector<Report>& rs) {
  std::string s = csv_header() + "\n";
  for (const auto& r : rs) s += csv_row(r) + "\n";
  return s;
}

std::vector<Report> reports_from_csv(const std::string& text) {
  const auto rows = parse_csv(text);
  if (rows.empty()) throw Error(ErrorKind::Parse, "empty CSV");
  const auto& header = rows[0];
  std::vector<Report> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() != header.size()) throw Error(ErrorKind::Parse, "CSV row " + std::to_string(i) + " has wrong width");
    Report r;
    visit(r, [&](const char* name, auto& v) {
      std::size_t col = 0;
      while (col < header.size() && header[col] != name) ++col;
      if (col == header.size()) throw Error(ErrorKind::Parse, std::string("CSV lacks column ") + name);
      parse_field(name, row[col], v);
    });
    out.push_back(std::move(r));
  }
  return out;
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace apobs
