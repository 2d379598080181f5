#include "gr/sequent.hpp"

#include <algorithm>
#include <cctype>

namespace gr {

static std::atomic<ComponentId> g_next_id{1};
ComponentId fresh_component_id() { return g_next_id.fetch_add(1); }

std::string Sequent::str() const {
  std::string out;
  for (size_t i = 0; i < ante.size(); i++) {
    if (i) out += ", ";
    out += ante[i].str();
  }
  out += kind == SeqKind::Arrow ? (ante.empty() ? "-->" : " -->") : (ante.empty() ? "==>" : " ==>");
  for (size_t i = 0; i < succ.size(); i++) {
    out += i ? ", " : " ";
    out += succ[i].str();
  }
  return out;
}

std::string Hyper::str() const {
  std::string out;
  for (size_t i = 0; i < comps.size(); i++) {
    if (i) out += " | ";
    out += comps[i].seq.str();
  }
  return out;
}

Hyper Hyper::of(std::vector<Sequent> seqs) {
  Hyper h;
  for (auto& s : seqs) h.comps.push_back({fresh_component_id(), std::move(s)});
  return h;
}

static std::vector<Formula> sorted(std::vector<Formula> v) {
  std::sort(v.begin(), v.end(), FormulaLess{});
  return v;
}

bool multiset_eq(const std::vector<Formula>& a, const std::vector<Formula>& b) {
  if (a.size() != b.size()) return false;
  auto sa = sorted(a), sb = sorted(b);
  for (size_t i = 0; i < sa.size(); i++)
    if (sa[i] != sb[i]) return false;
  return true;
}

static int vec_cmp(const std::vector<Formula>& a, const std::vector<Formula>& b) {
  auto sa = sorted(a), sb = sorted(b);
  if (sa.size() != sb.size()) return sa.size() < sb.size() ? -1 : 1;
  for (size_t i = 0; i < sa.size(); i++) {
    int c = Formula::cmp(sa[i], sb[i]);
    if (c != 0) return c;
  }
  return 0;
}

bool seq_eq(const Sequent& a, const Sequent& b) {
  return a.kind == b.kind && multiset_eq(a.ante, b.ante) && multiset_eq(a.succ, b.succ);
}

int seq_cmp(const Sequent& a, const Sequent& b) {
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  int c = vec_cmp(a.ante, b.ante);
  if (c != 0) return c;
  return vec_cmp(a.succ, b.succ);
}

bool hs_equal(const Hyper& a, const Hyper& b) {
  if (a.size() != b.size()) return false;
  std::vector<const Sequent*> sa, sb;
  for (auto& c : a.comps) sa.push_back(&c.seq);
  for (auto& c : b.comps) sb.push_back(&c.seq);
  auto lt = [](const Sequent* x, const Sequent* y) { return seq_cmp(*x, *y) < 0; };
  std::sort(sa.begin(), sa.end(), lt);
  std::sort(sb.begin(), sb.end(), lt);
  for (size_t i = 0; i < sa.size(); i++)
    if (seq_cmp(*sa[i], *sb[i]) != 0) return false;
  return true;
}

static Formula big_and(const std::vector<Formula>& v) {
  if (v.empty()) return Formula::neg(Formula::bottom());
  Formula acc = v[0];
  for (size_t i = 1; i < v.size(); i++) acc = Formula::conj(acc, v[i]);
  return acc;
}

static Formula big_or(const std::vector<Formula>& v) {
  if (v.empty()) return Formula::bottom();
  Formula acc = v[0];
  for (size_t i = 1; i < v.size(); i++) acc = Formula::disj(acc, v[i]);
  return acc;
}

Formula formula_image(const Sequent& s) {
  Formula body = Formula::impl(big_and(s.ante), big_or(s.succ));
  return s.kind == SeqKind::Arrow ? body : Formula::boxg(body);
}

Formula formula_image(const Hyper& h) {
  if (h.comps.empty()) return Formula::bottom();
  Formula acc = formula_image(h.comps[0].seq);
  for (size_t i = 1; i < h.comps.size(); i++)
    acc = Formula::disj(acc, formula_image(h.comps[i].seq));
  return acc;
}

Sequent dot_merge(const Sequent& s, const Sequent& t) {
  if (s.kind != t.kind) throw KindMismatch("dot_merge: turnstile kinds differ");
  Sequent out;
  out.kind = s.kind;
  out.ante = s.ante;
  out.ante.insert(out.ante.end(), t.ante.begin(), t.ante.end());
  out.succ = s.succ;
  out.succ.insert(out.succ.end(), t.succ.begin(), t.succ.end());
  return out;
}

Sequent dot_collapse(const Hyper& h) {
  if (h.comps.empty()) throw KindMismatch("dot_collapse: empty hypersequent");
  Sequent acc = h.comps[0].seq;
  for (size_t i = 1; i < h.comps.size(); i++) acc = dot_merge(acc, h.comps[i].seq);
  return acc;
}

// ---- parsing ----------------------------------------------------------------

namespace {

// Splits on a top-level token (never inside parens; formula syntax has no
// '|' or turnstiles, so scanning is enough).
size_t find_tok(const std::string& s, const char* tok, size_t from) {
  size_t n = std::string(tok).size();
  for (size_t i = from; i + n <= s.size(); i++) {
    if (s.compare(i, n, tok) == 0) {
      if (std::string(tok) == "-->" || std::string(tok) == "==>") return i;
      return i;
    }
  }
  return std::string::npos;
}

std::vector<Formula> parse_list(const std::string& s, size_t base_off) {
  std::vector<Formula> out;
  size_t start = 0;
  int depth = 0;
  auto flush = [&](size_t end) {
    std::string part = s.substr(start, end - start);
    bool blank = true;
    for (char c : part)
      if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
    if (blank) {
      if (!out.empty() || end != s.size())
        throw SyntaxError("empty formula in list", base_off + start);
      return;
    }
    out.push_back(parse_formula(part));
  };
  bool any_content = false;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) any_content = true;
  if (!any_content) return out;
  for (size_t i = 0; i < s.size(); i++) {
    if (s[i] == '(') depth++;
    if (s[i] == ')') depth--;
    if (s[i] == ',' && depth == 0) {
      flush(i);
      start = i + 1;
    }
  }
  flush(s.size());
  return out;
}

}  // namespace

Sequent parse_sequent(const std::string& text) {
  size_t a = find_tok(text, "-->", 0);
  size_t d = find_tok(text, "==>", 0);
  Sequent s;
  size_t pos;
  if (a != std::string::npos && (d == std::string::npos || a < d)) {
    s.kind = SeqKind::Arrow;
    pos = a;
  } else if (d != std::string::npos) {
    s.kind = SeqKind::DoubleArrow;
    pos = d;
  } else {
    throw SyntaxError("sequent needs --> or ==>", 0);
  }
  s.ante = parse_list(text.substr(0, pos), 0);
  s.succ = parse_list(text.substr(pos + 3), pos + 3);
  return s;
}

Hyper parse_hyper(const std::string& text) {
  Hyper h;
  size_t start = 0;
  for (size_t i = 0; i <= text.size(); i++) {
    if (i == text.size() || text[i] == '|') {
      h.comps.push_back({fresh_component_id(), parse_sequent(text.substr(start, i - start))});
      start = i + 1;
    }
  }
  return h;
}

}  // namespace gr
