#include "gr/hilbert.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "gr/fixtures.hpp"
#include "gr/taut.hpp"
#include "json.hpp"

namespace gr {

namespace {

// structural match of f against a schema whose atoms named "A"/"B" are
// metavariables
bool match_schema(const Formula& f, const Formula& schema,
                  std::map<std::string, Formula>& bind) {
  if (schema.kind() == FKind::Atom &&
      (schema.name() == "A" || schema.name() == "B")) {
    auto it = bind.find(schema.name());
    if (it != bind.end()) return it->second == f;
    bind[schema.name()] = f;
    return true;
  }
  if (f.kind() != schema.kind()) return false;
  switch (f.kind()) {
    case FKind::Atom: return f.name() == schema.name();
    case FKind::Bottom: return true;
    case FKind::Neg:
    case FKind::BoxG:
    case FKind::BoxR: return match_schema(f.child(), schema.child(), bind);
    case FKind::And:
      return match_schema(f.left(), schema.left(), bind) &&
             match_schema(f.right(), schema.right(), bind);
  }
  return false;
}

Formula axiom_schema(int k) {
  Formula A = Formula::atom("A"), B = Formula::atom("B");
  using F = Formula;
  switch (k) {
    case 2: return F::impl(F::boxg(F::impl(A, B)), F::impl(F::boxg(A), F::boxg(B)));
    case 3: return F::impl(F::boxg(F::impl(F::boxg(A), A)), F::boxg(A));
    case 4: return F::impl(F::boxr(A), F::boxg(A));
    case 5: return F::impl(F::boxg(A), F::boxg(F::boxr(A)));
    case 6: return F::impl(F::boxg(A), F::disj(F::boxg(F::bottom()), F::boxr(A)));
    case 7: return F::impl(F::diam(F::boxr(A)), F::diam(A));
    default: throw std::invalid_argument("axiom index");
  }
}

std::optional<std::map<std::string, Formula>> axiom_bindings(int k, const Formula& f) {
  std::map<std::string, Formula> bind;
  if (match_schema(f, axiom_schema(k), bind)) return bind;
  return std::nullopt;
}

}  // namespace

bool matches_axiom(int axiom, const Formula& f) {
  return axiom_bindings(axiom, f).has_value();
}

AxReport check_ax_proof(const AxProof& p) {
  AxReport rep;
  auto bad = [&](size_t i, const char* what) {
    rep.ok = false;
    rep.errors.push_back("step " + std::to_string(i) + ": " + what);
  };
  for (size_t i = 0; i < p.steps.size(); i++) {
    const AxStep& s = p.steps[i];
    switch (s.kind) {
      case JustKind::Axiom:
        if (s.axiom == 1) {
          if (!is_tautology(s.formula)) bad(i, "BadAxiomInstance");
        } else if (s.axiom >= 2 && s.axiom <= 7) {
          if (!matches_axiom(s.axiom, s.formula)) bad(i, "BadAxiomInstance");
        } else {
          bad(i, "BadAxiomInstance");
        }
        break;
      case JustKind::MP: {
        if (s.from < 0 || s.imp < 0 || s.from >= static_cast<int>(i) ||
            s.imp >= static_cast<int>(i)) {
          bad(i, "BadMP");
          break;
        }
        Formula want = Formula::impl(p.steps[s.from].formula, s.formula);
        if (!(p.steps[s.imp].formula == want)) bad(i, "BadMP");
        break;
      }
      case JustKind::Nec:
        if (s.from < 0 || s.from >= static_cast<int>(i) ||
            !(s.formula == Formula::boxg(p.steps[s.from].formula)))
          bad(i, "BadNec");
        break;
      case JustKind::Refl:
        if (s.from < 0 || s.from >= static_cast<int>(i) ||
            !(p.steps[s.from].formula == Formula::boxg(s.formula)))
          bad(i, "BadRefl");
        break;
    }
  }
  return rep;
}

namespace {

// fold the succedent into the single formula d (a tree of expanded
// disjunctions over the succedent members)
ProofPtr fold_succ_to(ProofPtr p, const Formula& d) {
  const auto& succ = p->conclusion[0].succ;
  if (succ.size() == 1 && succ[0] == d) return p;
  if (find_in(succ, d) >= 0 && succ.size() == 1) return p;
  // d = -(-(e1) /\ -(e2)) : expanded disjunction
  if (!(d.kind() == FKind::Neg && d.child().kind() == FKind::And &&
        d.child().left().kind() == FKind::Neg && d.child().right().kind() == FKind::Neg))
    throw TranslationFailure("fold_succ_to: target is not a disjunction: " + d.str());
  Formula e1 = d.child().left().child(), e2 = d.child().right().child();
  if (find_in(p->conclusion[0].succ, e1) < 0) p = fold_succ_to(std::move(p), e1);
  if (find_in(p->conclusion[0].succ, e2) < 0) p = fold_succ_to(std::move(p), e2);
  int p1 = find_in(p->conclusion[0].succ, e1);
  p = b_neg_l(std::move(p), 0, p1);  // -e1 at ante front
  int p2 = find_in(p->conclusion[0].succ, e2);
  p = b_neg_l(std::move(p), 0, p2);  // -e2 at ante front
  int a1 = find_in(p->conclusion[0].ante, Formula::neg(e1));
  int a2 = -1;
  for (size_t k = 0; k < p->conclusion[0].ante.size(); k++)
    if (static_cast<int>(k) != a1 && p->conclusion[0].ante[k] == Formula::neg(e2)) {
      a2 = static_cast<int>(k);
      break;
    }
  p = b_and_l_both(std::move(p), 0, a1, a2);  // (-e1 /\ -e2)
  int ax = find_in(p->conclusion[0].ante, d.child());
  p = b_neg_r(std::move(p), 0, ax);
  return p;
}

// derive `--> F` from a single-component proof of `X1..Xm --> ...` where
// F = X1 -> (X2 -> ... -> D) and D folds the succedent
ProofPtr to_thesis(ProofPtr p, const Formula& f) {
  std::vector<Formula> ants;
  Formula core = f;
  size_t m = p->conclusion[0].ante.size();
  for (size_t i = 0; i < m; i++) {
    if (!(core.kind() == FKind::Neg && core.child().kind() == FKind::And &&
          core.child().right().kind() == FKind::Neg))
      throw TranslationFailure("to_thesis: thesis shape mismatch: " + f.str());
    ants.push_back(core.child().left());
    core = core.child().right().child();
  }
  p = fold_succ_to(std::move(p), core);
  // peel antecedents innermost-first
  for (size_t i = ants.size(); i-- > 0;) {
    Formula x = ants[i];
    Formula d = p->conclusion[0].succ.at(0);
    p = b_neg_l(std::move(p), 0, 0);  // -d, ... -->
    int np = find_in(p->conclusion[0].ante, Formula::neg(d));
    int xp = -1;
    for (size_t k = 0; k < p->conclusion[0].ante.size(); k++)
      if (static_cast<int>(k) != np && p->conclusion[0].ante[k] == x) {
        xp = static_cast<int>(k);
        break;
      }
    p = b_and_l_both(std::move(p), 0, xp, np);  // (x /\ -d) -->
    int cp = find_in(p->conclusion[0].ante, Formula::conj(x, Formula::neg(d)));
    p = b_neg_r(std::move(p), 0, cp);  // --> -(x /\ -d)
  }
  if (!(p->conclusion.size() == 1 && p->conclusion[0].succ.size() == 1 &&
        p->conclusion[0].succ[0] == f && p->conclusion[0].ante.empty()))
    throw TranslationFailure("to_thesis: did not reach --> " + f.str());
  return p;
}

// axiom 7 is wrapped through its contrapositive: the figure proves
// [g]-A --> [g]-[r]A while the axiom reads <g>[r]A -> <g>A
ProofPtr thesis_ax7(ProofPtr p, const Formula& f) {
  p = b_neg_l(std::move(p), 0, 0);   // -v, u -->
  int up = static_cast<int>(p->conclusion[0].ante.size()) - 1;
  p = b_neg_r(std::move(p), 0, up);  // -v --> -u
  p = b_neg_l(std::move(p), 0, 0);   // --u, -v -->
  p = b_and_l_both(std::move(p), 0, 1, 0);  // (-v /\ --u) -->
  p = b_neg_r(std::move(p), 0, 0);   // --> -(-v /\ --u)
  if (!(p->conclusion[0].succ.size() == 1 && p->conclusion[0].succ[0] == f))
    throw TranslationFailure("axiom 7 thesis shape mismatch");
  return p;
}

ProofPtr axiom_thesis(int k, const Formula& f) {
  auto bind = axiom_bindings(k, f);
  if (!bind) throw TranslationFailure("axiom instance mismatch");
  Formula A = bind->count("A") ? (*bind)["A"] : Formula::atom("a");
  switch (k) {
    case 2: return to_thesis(fx_ax2(A, (*bind)["B"]), f);
    case 3: return to_thesis(fx_ax3(A), f);
    case 4: return to_thesis(fx_ax4(A), f);
    case 5: return to_thesis(fx_ax5(A), f);
    case 6: return to_thesis(fx_ax6(A), f);
    case 7: return thesis_ax7(fx_ax7(A), f);
    default: throw TranslationFailure("axiom index");
  }
}

}  // namespace

ProofPtr translate_ax_to_hyper(const AxProof& p) {
  AxReport rep = check_ax_proof(p);
  if (!rep.ok)
    throw TranslationFailure("invalid axiomatic proof: " +
                             (rep.errors.empty() ? "?" : rep.errors[0]));
  std::vector<ProofPtr> done;
  for (const AxStep& s : p.steps) {
    switch (s.kind) {
      case JustKind::Axiom: {
        if (s.axiom == 1) {
          Sequent goal;
          goal.kind = SeqKind::Arrow;
          goal.succ.push_back(s.formula);
          auto q = pl_prove(goal);
          if (!q) throw TranslationFailure("axiom 1 step is not a tautology");
          done.push_back(*q);
        } else {
          done.push_back(axiom_thesis(s.axiom, s.formula));
        }
        break;
      }
      case JustKind::MP: {
        Formula a = p.steps[s.from].formula;
        Formula b = s.formula;
        Formula imp = Formula::impl(a, b);
        Sequent glue;
        glue.kind = SeqKind::Arrow;
        glue.ante = {imp, a};
        glue.succ = {b};
        auto k = pl_prove(glue);
        if (!k) throw TranslationFailure("MP glue not provable");
        int ip = find_in((*k)->conclusion[0].ante, imp);
        ProofPtr c1 = b_cut(done[s.imp], *k, 0, 0, 0, ip, imp);  // A --> B
        int ap = find_in(c1->conclusion[0].ante, a);
        done.push_back(b_cut(done[s.from], c1, 0, 0, 0, ap, a));  // --> B
        break;
      }
      case JustKind::Nec: done.push_back(fx_nec(done[s.from])); break;
      case JustKind::Refl: done.push_back(fx_refl(done[s.from])); break;
    }
  }
  return done.back();
}

// ---- JSON -------------------------------------------------------------------

using nlohmann::json;

AxProof axproof_from_json(const std::string& text) {
  json j = json::parse(text);
  AxProof p;
  for (auto& js : j) {
    AxStep s;
    s.formula = parse_formula(js.at("formula").get<std::string>());
    const json& jj = js.at("just");
    std::string kind = jj.at("kind").get<std::string>();
    if (kind == "axiom") {
      s.kind = JustKind::Axiom;
      s.axiom = jj.at("axiom").get<int>();
    } else if (kind == "mp") {
      s.kind = JustKind::MP;
      s.from = jj.at("from").get<int>();
      s.imp = jj.at("imp").get<int>();
    } else if (kind == "nec") {
      s.kind = JustKind::Nec;
      s.from = jj.at("from").get<int>();
    } else if (kind == "refl") {
      s.kind = JustKind::Refl;
      s.from = jj.at("from").get<int>();
    } else {
      throw std::runtime_error("unknown justification kind: " + kind);
    }
    p.steps.push_back(std::move(s));
  }
  return p;
}

std::string axproof_to_json(const AxProof& p) {
  json j = json::array();
  for (auto& s : p.steps) {
    json js;
    js["formula"] = s.formula.str();
    json jj;
    switch (s.kind) {
      case JustKind::Axiom:
        jj["kind"] = "axiom";
        jj["axiom"] = s.axiom;
        break;
      case JustKind::MP:
        jj["kind"] = "mp";
        jj["from"] = s.from;
        jj["imp"] = s.imp;
        break;
      case JustKind::Nec:
        jj["kind"] = "nec";
        jj["from"] = s.from;
        break;
      case JustKind::Refl:
        jj["kind"] = "refl";
        jj["from"] = s.from;
        break;
    }
    js["just"] = jj;
    j.push_back(js);
  }
  return j.dump(1);
}

AxProof load_axproof_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open axiomatic proof file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return axproof_from_json(ss.str());
}

}  // namespace gr
