#include "apobs/observation.hpp"

#include <algorithm>

#include "apobs/error.hpp"

namespace apobs {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Chopping: return "chopping";
    case ErrorKind::Spec: return "spec";
    case ErrorKind::TauValidation: return "tau-validation";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::AlphabetMismatch: return "alphabet-mismatch";
    case ErrorKind::Io: return "io";
    case ErrorKind::Internal: return "internal";
  }
  return "unknown";
}

ObsSet neg(ObsSet s) {
  ObsSet out = 0;
  for (Obs o : kAllObs)
    if (contains(s, o)) out |= obs_bit(neg(o));
  return out;
}

char to_char(Obs o) { return "AZEN"[static_cast<unsigned>(o)]; }

Obs obs_from_char(char c) {
  switch (c) {
    case 'A': return Obs::A;
    case 'Z': return Obs::Z;
    case 'E': return Obs::E;
    case 'N': return Obs::N;
    default: throw Error(ErrorKind::InvalidArgument, std::string("not an observation: '") + c + "'");
  }
}

std::string to_string(ObsSet s) {
  std::string out;
  for (Obs o : kAllObs)
    if (contains(s, o)) out += to_char(o);
  return out;
}

namespace {

constexpr ObsSet A = obs_bit(Obs::A), Z = obs_bit(Obs::Z), E = obs_bit(Obs::E), N = obs_bit(Obs::N);

// rows: psi1, columns: psi2, both in A Z E N order
constexpr ObsSet kAnd[4][4] = {
    {A, Z, E, N},
    {Z, Z, N, N},
    {E, N, E, N},
    {N, N, N, N},
};

constexpr ObsSet kUntil[4][4] = {
    {A, A | Z, A, A | N},
    {A, Z, A, N},
    {A, A | Z, E, E | N},
    {A, Z, E, N},
};

}  // namespace

ObsSet consistency(Connective op, Obs o1, Obs o2) {
  const auto i = static_cast<unsigned>(o1), j = static_cast<unsigned>(o2);
  switch (op) {
    case Connective::And: return kAnd[i][j];
    case Connective::Until: return kUntil[i][j];
    case Connective::Or: return neg(consistency(Connective::And, neg(o1), neg(o2)));
    case Connective::Release: return neg(consistency(Connective::Until, neg(o1), neg(o2)));
  }
  return 0;
}

std::string label_to_string(Label l, const std::vector<std::string>& aps) {
  std::string out;
  for (std::size_t i = 0; i < aps.size(); ++i) {
    if (i) out += ',';
    out += aps[i];
    out += ':';
    out += to_char(label_get(l, i));
  }
  return out;
}

Label label_from_string(const std::string& text, const std::vector<std::string>& aps) {
  Label l = 0;
  std::vector<bool> seen(aps.size(), false);
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string::npos) end = text.size();
    const std::string item = text.substr(pos, end - pos);
    const auto colon = item.find(':');
    if (colon == std::string::npos || colon + 2 != item.size())
      throw Error(ErrorKind::InvalidArgument, "bad label entry '" + item + "'");
    const auto it = std::find(aps.begin(), aps.end(), item.substr(0, colon));
    if (it == aps.end())
      throw Error(ErrorKind::AlphabetMismatch, "unknown AP in label '" + item + "'");
    const auto i = static_cast<std::size_t>(it - aps.begin());
    l = label_set(l, i, obs_from_char(item[colon + 1]));
    seen[i] = true;
    pos = end + 1;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end())
    throw Error(ErrorKind::AlphabetMismatch, "label '" + text + "' does not cover every AP");
  return l;
}

bool operator==(const Word& a, const Word& b) {
  return a.aps == b.aps && a.prefix == b.prefix && a.loop == b.loop;
}

WordCheck check_signal_word(const Word& w) {
  if (w.loop.empty()) return {false, 0, "empty loop"};
  for (std::size_t k = 0; k < w.size(); ++k) {
    const Label cur = w.at(k);
    const Label nxt = w.at(w.succ(k));
    int changes = 0;
    for (std::size_t i = 0; i < w.aps.size(); ++i) {
      if (holds_at_end(label_get(cur, i)) != holds_at_start(label_get(nxt, i)))
        return {false, k, "AP '" + w.aps[i] + "' breaks the slice transition rule at position " + std::to_string(k)};
      if (is_change(label_get(cur, i))) ++changes;
    }
    if (changes > 1)
      return {false, k, "more than one AP changes in slice " + std::to_string(k)};
  }
  return {};
}

Word normalize(Word w) {
  // shortest period of the loop
  const std::size_t n = w.loop.size();
  for (std::size_t p = 1; p < n; ++p) {
    if (n % p) continue;
    bool periodic = true;
    for (std::size_t i = p; i < n && periodic; ++i) periodic = w.loop[i] == w.loop[i - p];
    if (periodic) {
      w.loop.resize(p);
      break;
    }
  }
  // fold the prefix into the loop while they agree
  while (!w.prefix.empty() && w.prefix.back() == w.loop.back()) {
    std::rotate(w.loop.rbegin(), w.loop.rbegin() + 1, w.loop.rend());
    w.prefix.pop_back();
  }
  return w;
}

}  // namespace apobs
