#include "gr/formula.hpp"

#include <cctype>
#include <functional>

namespace gr {

static size_t mix(size_t a, size_t b) {
  a ^= b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2);
  return a;
}

Formula Formula::make(FKind k, std::string name, Formula l, Formula r) {
  Node n;
  n.kind = k;
  n.name = std::move(name);
  size_t h = static_cast<size_t>(k) * 1315423911u;
  if (k == FKind::Atom) h = mix(h, std::hash<std::string>{}(n.name));
  size_t d = 0;
  if (!l.is_null()) {
    h = mix(h, l.hash());
    d += l.degree();
    n.left = l.node_;
  }
  if (!r.is_null()) {
    h = mix(h, r.hash());
    d += r.degree();
    n.right = r.node_;
  }
  if (k != FKind::Atom && k != FKind::Bottom) d += 1;
  n.degree = d;
  n.hash = h;
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::atom(const std::string& name) {
  if (name.empty()) throw std::invalid_argument("empty atom name");
  return make(FKind::Atom, name, {}, {});
}
Formula Formula::bottom() { return make(FKind::Bottom, "", {}, {}); }
Formula Formula::neg(Formula a) { return make(FKind::Neg, "", a, {}); }
Formula Formula::conj(Formula a, Formula b) { return make(FKind::And, "", a, b); }
Formula Formula::boxg(Formula a) { return make(FKind::BoxG, "", a, {}); }
Formula Formula::boxr(Formula a) { return make(FKind::BoxR, "", a, {}); }

Formula Formula::impl(Formula a, Formula b) { return neg(conj(a, neg(b))); }
Formula Formula::disj(Formula a, Formula b) { return neg(conj(neg(a), neg(b))); }
Formula Formula::diam(Formula a) { return neg(boxg(neg(a))); }

bool Formula::operator==(const Formula& o) const { return cmp(*this, o) == 0; }

int Formula::cmp(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return 0;
  if (a.is_null()) return b.is_null() ? 0 : -1;
  if (b.is_null()) return 1;
  if (a.hash() != b.hash() && a.kind() == b.kind() && a.kind() != FKind::Atom) {
    // fall through to structural compare; hash only short-circuits equality
  }
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case FKind::Atom: {
      int c = a.name().compare(b.name());
      return c < 0 ? -1 : c > 0 ? 1 : 0;
    }
    case FKind::Bottom: return 0;
    case FKind::Neg:
    case FKind::BoxG:
    case FKind::BoxR: return cmp(a.left(), b.left());
    case FKind::And: {
      int c = cmp(a.left(), b.left());
      return c != 0 ? c : cmp(a.right(), b.right());
    }
  }
  return 0;
}

std::string Formula::str() const {
  switch (kind()) {
    case FKind::Atom: return name();
    case FKind::Bottom: return "false";
    case FKind::Neg: return "-" + left().str();
    case FKind::And: return "(" + left().str() + " /\\ " + right().str() + ")";
    case FKind::BoxG: return "[g]" + left().str();
    case FKind::BoxR: return "[r]" + left().str();
  }
  return "?";
}

Formula substitute(const Formula& f, const std::vector<std::pair<std::string, Formula>>& map) {
  switch (f.kind()) {
    case FKind::Atom:
      for (auto& [n, g] : map)
        if (n == f.name()) return g;
      return f;
    case FKind::Bottom: return f;
    case FKind::Neg: return Formula::neg(substitute(f.left(), map));
    case FKind::And:
      return Formula::conj(substitute(f.left(), map), substitute(f.right(), map));
    case FKind::BoxG: return Formula::boxg(substitute(f.left(), map));
    case FKind::BoxR: return Formula::boxr(substitute(f.left(), map));
  }
  return f;
}

// ---- parser ----------------------------------------------------------------
// atoms [a-z][a-zA-Z0-9_]*, `false`, prefix - [g] [r] <g>, infix /\ \/ ->
// (right associative, -> lowest), parentheses. Longest-token match.

namespace {

struct Lexer {
  const std::string& s;
  size_t i = 0;
  explicit Lexer(const std::string& str) : s(str) {}

  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) i++;
  }
  bool eof() {
    skip_ws();
    return i >= s.size();
  }
  bool peek(const char* tok) {
    skip_ws();
    size_t n = std::string(tok).size();
    return s.compare(i, n, tok) == 0;
  }
  bool eat(const char* tok) {
    if (!peek(tok)) return false;
    i += std::string(tok).size();
    return true;
  }
};

Formula parse_impl_level(Lexer& lx);

Formula parse_primary(Lexer& lx) {
  lx.skip_ws();
  if (lx.i >= lx.s.size()) throw SyntaxError("unexpected end of formula", lx.i);
  char c = lx.s[lx.i];
  if (lx.eat("(")) {
    Formula f = parse_impl_level(lx);
    if (!lx.eat(")")) throw SyntaxError("expected ')'", lx.i);
    return f;
  }
  if (lx.eat("[g]")) return Formula::boxg(parse_primary(lx));
  if (lx.eat("[r]")) return Formula::boxr(parse_primary(lx));
  if (lx.eat("<g>")) return Formula::diam(parse_primary(lx));
  if (c == '-') {
    // `-` only when not `-->` or `->`: negation binds a primary, and the
    // sequent arrow / implication arrows are longer tokens.
    if (lx.s.compare(lx.i, 3, "-->") != 0 && lx.s.compare(lx.i, 2, "->") != 0) {
      lx.i += 1;
      return Formula::neg(parse_primary(lx));
    }
    throw SyntaxError("unexpected arrow", lx.i);
  }
  if (std::islower(static_cast<unsigned char>(c))) {
    size_t j = lx.i + 1;
    while (j < lx.s.size() &&
           (std::isalnum(static_cast<unsigned char>(lx.s[j])) || lx.s[j] == '_'))
      j++;
    std::string name = lx.s.substr(lx.i, j - lx.i);
    lx.i = j;
    if (name == "false") return Formula::bottom();
    return Formula::atom(name);
  }
  throw SyntaxError("unexpected character", lx.i);
}

Formula parse_and_level(Lexer& lx) {
  Formula a = parse_primary(lx);
  lx.skip_ws();
  if (lx.eat("/\\")) return Formula::conj(a, parse_and_level(lx));
  return a;
}

Formula parse_or_level(Lexer& lx) {
  Formula a = parse_and_level(lx);
  lx.skip_ws();
  if (lx.eat("\\/")) return Formula::disj(a, parse_or_level(lx));
  return a;
}

Formula parse_impl_level(Lexer& lx) {
  Formula a = parse_or_level(lx);
  lx.skip_ws();
  // `->` but not `-->`
  if (lx.peek("->") && !lx.peek("-->")) {
    lx.eat("->");
    return Formula::impl(a, parse_impl_level(lx));
  }
  return a;
}

}  // namespace

Formula parse_formula(const std::string& text) {
  Lexer lx(text);
  Formula f = parse_impl_level(lx);
  if (!lx.eof()) throw SyntaxError("trailing input", lx.i);
  return f;
}

}  // namespace gr
