#include "apobs/ltl.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "apobs/error.hpp"

namespace apobs {

FormulaPtr make_true() { return std::make_shared<const Formula>(Formula{Op::True, {}, {}, {}}); }
FormulaPtr make_false() { return std::make_shared<const Formula>(Formula{Op::False, {}, {}, {}}); }

FormulaPtr make_atom(std::string name) {
  return std::make_shared<const Formula>(Formula{Op::Atom, std::move(name), {}, {}});
}

FormulaPtr make_unary(Op op, FormulaPtr child) {
  return std::make_shared<const Formula>(Formula{op, {}, std::move(child), {}});
}

FormulaPtr make_binary(Op op, FormulaPtr lhs, FormulaPtr rhs) {
  return std::make_shared<const Formula>(Formula{op, {}, std::move(lhs), std::move(rhs)});
}

namespace {

enum class Tok { End, Not, And, Or, LParen, RParen, Until, Release, Finally, Globally, Next, True, False, Ident };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (c == '!' || c == '~') {
      out.push_back({Tok::Not, "!", start});
      ++i;
    } else if (c == '&') {
      i += (i + 1 < s.size() && s[i + 1] == '&') ? 2 : 1;
      out.push_back({Tok::And, "&", start});
    } else if (c == '|') {
      i += (i + 1 < s.size() && s[i + 1] == '|') ? 2 : 1;
      out.push_back({Tok::Or, "|", start});
    } else if (c == '(') {
      out.push_back({Tok::LParen, "(", start});
      ++i;
    } else if (c == ')') {
      out.push_back({Tok::RParen, ")", start});
      ++i;
    } else if (is_ident_start(c)) {
      while (i < s.size() && is_ident_char(s[i])) ++i;
      std::string word(s.substr(start, i - start));
      if (word == "U") {
        out.push_back({Tok::Until, word, start});
      } else if (word == "R") {
        out.push_back({Tok::Release, word, start});
      } else if (word == "true") {
        out.push_back({Tok::True, word, start});
      } else if (word == "false") {
        out.push_back({Tok::False, word, start});
      } else if (std::all_of(word.begin(), word.end(),
                             [](char ch) { return ch == 'F' || ch == 'G' || ch == 'X'; })) {
        // "GF", "FG", ... are read as stacked unary operators.
        for (std::size_t k = 0; k < word.size(); ++k) {
          const Tok t = word[k] == 'F' ? Tok::Finally : word[k] == 'G' ? Tok::Globally : Tok::Next;
          out.push_back({t, std::string(1, word[k]), start + k});
        }
      } else {
        out.push_back({Tok::Ident, std::move(word), start});
      }
    } else {
      throw ParseError(start, std::string("unknown token '") + c + "'");
    }
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

  FormulaPtr parse() {
    FormulaPtr f = parse_or();
    if (peek().kind != Tok::End) throw ParseError(peek().pos, "unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  FormulaPtr parse_or() {
    FormulaPtr f = parse_and();
    while (peek().kind == Tok::Or) {
      next();
      f = make_binary(Op::Or, f, parse_and());
    }
    return f;
  }

  FormulaPtr parse_and() {
    FormulaPtr f = parse_binary();
    while (peek().kind == Tok::And) {
      next();
      f = make_binary(Op::And, f, parse_binary());
    }
    return f;
  }

  FormulaPtr parse_binary() {
    FormulaPtr lhs = parse_unary();
    if (peek().kind == Tok::Until || peek().kind == Tok::Release) {
      const Op op = next().kind == Tok::Until ? Op::Until : Op::Release;
      return make_binary(op, lhs, parse_binary());
    }
    return lhs;
  }

  FormulaPtr parse_unary() {
    switch (peek().kind) {
      case Tok::Not: next(); return make_unary(Op::Not, parse_unary());
      case Tok::Finally: next(); return make_unary(Op::Finally, parse_unary());
      case Tok::Globally: next(); return make_unary(Op::Globally, parse_unary());
      case Tok::Next: next(); return make_unary(Op::Next, parse_unary());
      default: return parse_atom();
    }
  }

  FormulaPtr parse_atom() {
    const Token& t = next();
    switch (t.kind) {
      case Tok::True: return make_true();
      case Tok::False: return make_false();
      case Tok::Ident: return make_atom(t.text);
      case Tok::LParen: {
        FormulaPtr f = parse_or();
        if (peek().kind != Tok::RParen) throw ParseError(peek().pos, "expected ')'");
        next();
        return f;
      }
      case Tok::End: throw ParseError(t.pos, "unexpected end of formula");
      default: throw ParseError(t.pos, "unexpected '" + t.text + "'");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

const char* binary_symbol(Op op) {
  switch (op) {
    case Op::And: return " & ";
    case Op::Or: return " | ";
    case Op::Until: return " U ";
    case Op::Release: return " R ";
    default: return " ? ";
  }
}

}  // namespace

FormulaPtr parse_ltl(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const Formula& f) {
  switch (f.op) {
    case Op::True: return "true";
    case Op::False: return "false";
    case Op::Atom: return f.name;
    case Op::Not: return "!" + to_string(*f.lhs);
    case Op::Next: return "X " + to_string(*f.lhs);
    case Op::Finally: return "F " + to_string(*f.lhs);
    case Op::Globally: return "G " + to_string(*f.lhs);
    default: return "(" + to_string(*f.lhs) + binary_symbol(f.op) + to_string(*f.rhs) + ")";
  }
}

bool contains_next(const Formula& f) {
  if (f.op == Op::Next) return true;
  return (f.lhs && contains_next(*f.lhs)) || (f.rhs && contains_next(*f.rhs));
}

// --- NNF ------------------------------------------------------------------

namespace {

const char* nnf_symbol(NnfOp op) {
  switch (op) {
    case NnfOp::And: return " & ";
    case NnfOp::Or: return " | ";
    case NnfOp::Until: return " U ";
    case NnfOp::Release: return " R ";
    default: return " ? ";
  }
}

}  // namespace

Nnf nnf_true() {
  static const Nnf t = std::make_shared<const NnfNode>(NnfNode{NnfOp::True, {}, {}, {}, "true", 0});
  return t;
}

Nnf nnf_false() {
  static const Nnf f = std::make_shared<const NnfNode>(NnfNode{NnfOp::False, {}, {}, {}, "false", 0});
  return f;
}

Nnf nnf_atom(std::string name, bool negated) {
  std::string key = negated ? "!" + name : name;
  return std::make_shared<const NnfNode>(
      NnfNode{negated ? NnfOp::NegAtom : NnfOp::PosAtom, std::move(name), {}, {}, std::move(key), 0});
}

Nnf nnf_binary(NnfOp op, Nnf lhs, Nnf rhs) {
  std::string key = "(" + lhs->key + nnf_symbol(op) + rhs->key + ")";
  const int depth = 1 + std::max(lhs->depth, rhs->depth);
  return std::make_shared<const NnfNode>(
      NnfNode{op, {}, std::move(lhs), std::move(rhs), std::move(key), depth});
}

bool operator==(const NnfNode& a, const NnfNode& b) { return a.key == b.key; }

namespace {

Nnf nnf_rec(const Formula& f, bool neg) {
  switch (f.op) {
    case Op::True: return neg ? nnf_false() : nnf_true();
    case Op::False: return neg ? nnf_true() : nnf_false();
    case Op::Atom: return nnf_atom(f.name, neg);
    case Op::Not: return nnf_rec(*f.lhs, !neg);
    case Op::And:
      return nnf_binary(neg ? NnfOp::Or : NnfOp::And, nnf_rec(*f.lhs, neg), nnf_rec(*f.rhs, neg));
    case Op::Or:
      return nnf_binary(neg ? NnfOp::And : NnfOp::Or, nnf_rec(*f.lhs, neg), nnf_rec(*f.rhs, neg));
    case Op::Until:
      return nnf_binary(neg ? NnfOp::Release : NnfOp::Until, nnf_rec(*f.lhs, neg),
                        nnf_rec(*f.rhs, neg));
    case Op::Release:
      return nnf_binary(neg ? NnfOp::Until : NnfOp::Release, nnf_rec(*f.lhs, neg),
                        nnf_rec(*f.rhs, neg));
    case Op::Finally:  // F a = true U a,  !F a = false R !a
      return neg ? nnf_binary(NnfOp::Release, nnf_false(), nnf_rec(*f.lhs, true))
                 : nnf_binary(NnfOp::Until, nnf_true(), nnf_rec(*f.lhs, false));
    case Op::Globally:  // G a = false R a,  !G a = true U !a
      return neg ? nnf_binary(NnfOp::Until, nnf_true(), nnf_rec(*f.lhs, true))
                 : nnf_binary(NnfOp::Release, nnf_false(), nnf_rec(*f.lhs, false));
    case Op::Next:
      throw Error(ErrorKind::Unsupported,
                  "discrete-time operator X is not supported for continuous-time LTL");
  }
  throw Error(ErrorKind::Internal, "unknown operator");
}

}  // namespace

Nnf to_nnf(const Formula& f) { return nnf_rec(f, false); }

Nnf to_nnf(std::string_view text) { return to_nnf(*parse_ltl(text)); }

FormulaPtr from_nnf(const Nnf& f) {
  switch (f->op) {
    case NnfOp::True: return make_true();
    case NnfOp::False: return make_false();
    case NnfOp::PosAtom: return make_atom(f->name);
    case NnfOp::NegAtom: return make_unary(Op::Not, make_atom(f->name));
    case NnfOp::And: return make_binary(Op::And, from_nnf(f->lhs), from_nnf(f->rhs));
    case NnfOp::Or: return make_binary(Op::Or, from_nnf(f->lhs), from_nnf(f->rhs));
    case NnfOp::Until: return make_binary(Op::Until, from_nnf(f->lhs), from_nnf(f->rhs));
    case NnfOp::Release: return make_binary(Op::Release, from_nnf(f->lhs), from_nnf(f->rhs));
  }
  return make_true();
}

std::string to_string(const Nnf& f) { return f->key; }

// --- closure --------------------------------------------------------------

SubformulaSet::SubformulaSet(const Nnf& root) {
  add(root);
  for (const auto& e : entries_) {
    if (e.op == NnfOp::PosAtom) aps_.push_back(e.atom);
  }
  std::sort(aps_.begin(), aps_.end());
  ap_entries_.reserve(aps_.size());
  for (const auto& ap : aps_) ap_entries_.push_back(*index_of(nnf_atom(ap)));
}

int SubformulaSet::add(const Nnf& f) {
  if (auto existing = index_of(f)) return *existing;
  Subformula s{f, f->op, f->name, -1, -1, -1};
  if (f->op == NnfOp::NegAtom) {
    s.positive_atom = add(nnf_atom(f->name));
  } else if (f->lhs) {
    s.lhs = add(f->lhs);
    s.rhs = add(f->rhs);
  }
  entries_.push_back(std::move(s));
  return static_cast<int>(entries_.size()) - 1;
}

std::optional<int> SubformulaSet::index_of(const Nnf& f) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].formula->key == f->key) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::size_t SubformulaSet::nontrivial_size() const {
  return static_cast<std::size_t>(std::count_if(entries_.begin(), entries_.end(), [](const Subformula& s) {
    return s.op != NnfOp::True && s.op != NnfOp::False;
  }));
}

}  // namespace apobs
