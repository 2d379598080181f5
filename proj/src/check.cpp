#include "gr/check.hpp"

#include <algorithm>

namespace gr {

namespace {

[[noreturn]] void fail(ErrCode c, const std::string& clause) { throw CheckFail{{c, clause}}; }

void need(bool cond, ErrCode c, const std::string& clause) {
  if (!cond) fail(c, clause);
}

const Component& comp_at(const Hyper& h, int i, const char* what) {
  if (i < 0 || static_cast<size_t>(i) >= h.comps.size())
    fail(ErrCode::IndexOutOfRange, std::string(what) + ": component index out of range");
  return h.comps[i];
}

Formula f_at(const std::vector<Formula>& v, int i, const char* what) {
  if (i < 0 || static_cast<size_t>(i) >= v.size())
    fail(ErrCode::IndexOutOfRange, std::string(what) + ": formula index out of range");
  return v[i];
}

std::vector<Formula> erase_at(std::vector<Formula> v, int i) {
  v.erase(v.begin() + i);
  return v;
}

Hyper drop_comp(Hyper h, int i) {
  h.comps.erase(h.comps.begin() + i);
  return h;
}

// --- conclusion-indexed rules: build the expected premise -------------------

Hyper expected_premise(RuleId rule, const RuleApp& app, const Hyper& concl) {
  Hyper h = concl;
  switch (rule) {
    case RuleId::AndL1:
    case RuleId::AndL2: {
      auto& c = comp_at(h, app.comp, "AndL");
      Formula f = f_at(c.seq.ante, app.pos, "AndL principal");
      need(f.kind() == FKind::And, ErrCode::RuleMismatch,
           "AndL: principal formula must be a conjunction");
      h.comps[app.comp].seq.ante[app.pos] =
          rule == RuleId::AndL1 ? f.left() : f.right();
      return h;
    }
    case RuleId::NegL: {
      auto& c = comp_at(h, app.comp, "NegL");
      Formula f = f_at(c.seq.ante, app.pos, "NegL principal");
      need(f.kind() == FKind::Neg, ErrCode::RuleMismatch,
           "NegL: principal formula must be a negation");
      h.comps[app.comp].seq.ante = erase_at(h.comps[app.comp].seq.ante, app.pos);
      h.comps[app.comp].seq.succ.push_back(f.child());
      return h;
    }
    case RuleId::NegR: {
      auto& c = comp_at(h, app.comp, "NegR");
      Formula f = f_at(c.seq.succ, app.pos, "NegR principal");
      need(f.kind() == FKind::Neg, ErrCode::RuleMismatch,
           "NegR: principal formula must be a negation");
      h.comps[app.comp].seq.succ = erase_at(h.comps[app.comp].seq.succ, app.pos);
      h.comps[app.comp].seq.ante.push_back(f.child());
      return h;
    }
    case RuleId::ContrL: {
      auto& c = comp_at(h, app.comp, "ContrL");
      Formula f = f_at(c.seq.ante, app.pos, "ContrL kept occurrence");
      h.comps[app.comp].seq.ante.push_back(f);
      return h;
    }
    case RuleId::ContrR: {
      auto& c = comp_at(h, app.comp, "ContrR");
      Formula f = f_at(c.seq.succ, app.pos, "ContrR kept occurrence");
      h.comps[app.comp].seq.succ.push_back(f);
      return h;
    }
    case RuleId::WeakL: {
      auto& c = comp_at(h, app.comp, "WeakL");
      f_at(c.seq.ante, app.pos, "WeakL introduced occurrence");
      h.comps[app.comp].seq.ante = erase_at(h.comps[app.comp].seq.ante, app.pos);
      return h;
    }
    case RuleId::WeakR: {
      auto& c = comp_at(h, app.comp, "WeakR");
      f_at(c.seq.succ, app.pos, "WeakR introduced occurrence");
      h.comps[app.comp].seq.succ = erase_at(h.comps[app.comp].seq.succ, app.pos);
      return h;
    }
    case RuleId::EW: {
      comp_at(h, app.comp, "EW");
      return drop_comp(h, app.comp);
    }
    case RuleId::Split: {
      auto& a = comp_at(h, app.comp, "Split");
      auto& b = comp_at(h, app.comp2, "Split");
      need(app.comp != app.comp2, ErrCode::IndexOutOfRange,
           "Split: the two result components must be distinct");
      need(a.seq.kind == SeqKind::Arrow && b.seq.kind == SeqKind::Arrow,
           ErrCode::KindMismatch, "Split: both result components must be --> sequents");
      Sequent merged = dot_merge(a.seq, b.seq);
      int lo = std::min(app.comp, app.comp2), hi = std::max(app.comp, app.comp2);
      h.comps[lo].seq = merged;
      h.comps.erase(h.comps.begin() + hi);
      return h;
    }
    default: fail(ErrCode::RuleMismatch, "internal: not a conclusion-indexed rule");
  }
}

// --- premise-indexed rules: build the computed conclusion -------------------

Hyper computed_conclusion(RuleId rule, const RuleApp& app,
                          const std::vector<const Hyper*>& prems) {
  auto p0 = [&]() -> const Hyper& { return *prems[0]; };
  auto p1 = [&]() -> const Hyper& { return *prems[1]; };
  switch (rule) {
    case RuleId::AndR: {
      const auto& lc = comp_at(p0(), app.lcomp, "AndR left");
      const auto& rc = comp_at(p1(), app.rcomp, "AndR right");
      Formula a = f_at(lc.seq.succ, app.lpos, "AndR left auxiliary");
      Formula b = f_at(rc.seq.succ, app.rpos, "AndR right auxiliary");
      need(lc.seq.kind == rc.seq.kind, ErrCode::KindMismatch,
           "AndR: the displayed sequents must share one turnstile kind");
      Hyper h = drop_comp(p0(), app.lcomp);
      Hyper g = drop_comp(p1(), app.rcomp);
      for (auto& c : g.comps) h.comps.push_back(c);
      Sequent m;
      m.kind = lc.seq.kind;
      m.ante = lc.seq.ante;
      m.ante.insert(m.ante.end(), rc.seq.ante.begin(), rc.seq.ante.end());
      m.succ = erase_at(lc.seq.succ, app.lpos);
      auto rs = erase_at(rc.seq.succ, app.rpos);
      m.succ.insert(m.succ.end(), rs.begin(), rs.end());
      m.succ.push_back(Formula::conj(a, b));
      h.comps.push_back({fresh_component_id(), std::move(m)});
      return h;
    }
    case RuleId::Cut: {
      need(app.cut_formula.has_value(), ErrCode::RuleMismatch,
           "Cut: cut_formula is required");
      Formula a = *app.cut_formula;
      const auto& lc = comp_at(p0(), app.lcomp, "Cut left");
      const auto& rc = comp_at(p1(), app.rcomp, "Cut right");
      need(f_at(lc.seq.succ, app.lpos, "Cut left occurrence") == a, ErrCode::RuleMismatch,
           "Cut: left premise succedent occurrence must equal the cut formula");
      need(f_at(rc.seq.ante, app.rpos, "Cut right occurrence") == a, ErrCode::RuleMismatch,
           "Cut: right premise antecedent occurrence must equal the cut formula");
      need(lc.seq.kind == rc.seq.kind, ErrCode::KindMismatch,
           "Cut: the displayed sequents must share one turnstile kind");
      Hyper h = drop_comp(p0(), app.lcomp);
      Hyper g = drop_comp(p1(), app.rcomp);
      for (auto& c : g.comps) h.comps.push_back(c);
      Sequent m;
      m.kind = lc.seq.kind;
      m.ante = lc.seq.ante;
      auto ra = erase_at(rc.seq.ante, app.rpos);
      m.ante.insert(m.ante.end(), ra.begin(), ra.end());
      m.succ = erase_at(lc.seq.succ, app.lpos);
      m.succ.insert(m.succ.end(), rc.seq.succ.begin(), rc.seq.succ.end());
      h.comps.push_back({fresh_component_id(), std::move(m)});
      return h;
    }
    case RuleId::Merge: {
      const auto& a = comp_at(p0(), app.comp, "Merge");
      const auto& b = comp_at(p0(), app.comp2, "Merge");
      need(app.comp != app.comp2, ErrCode::IndexOutOfRange,
           "Merge: the two merged components must be distinct");
      need(a.seq.kind == b.seq.kind, ErrCode::KindMismatch,
           "Merge: merged components must share one turnstile kind");
      Hyper h = p0();
      int lo = std::min(app.comp, app.comp2), hi = std::max(app.comp, app.comp2);
      h.comps[lo].seq = dot_merge(h.comps[app.comp].seq, h.comps[app.comp2].seq);
      h.comps[lo].id = h.comps[app.comp].id;
      h.comps.erase(h.comps.begin() + hi);
      return h;
    }
    case RuleId::BotRule: {
      const auto& del = comp_at(p0(), app.comp, "BotRule deleted component");
      const auto& ctx = comp_at(p0(), app.comp2, "BotRule witness component");
      need(app.comp != app.comp2, ErrCode::IndexOutOfRange,
           "BotRule: deleted and witness components must be distinct");
      need(del.seq.kind == SeqKind::Arrow && del.seq.empty_both(), ErrCode::RuleMismatch,
           "BotRule: deleted component must be an empty --> sequent");
      need(ctx.seq.kind == SeqKind::DoubleArrow, ErrCode::KindMismatch,
           "BotRule: witness component must be a ==> sequent");
      return drop_comp(p0(), app.comp);
    }
    case RuleId::K:
    case RuleId::Four:
    case RuleId::KBlack:
    case RuleId::FourBlack: {
      const auto& c = comp_at(p0(), app.comp, "modal rule");
      need(c.seq.kind == SeqKind::DoubleArrow, ErrCode::KindMismatch,
           "K/4 rules: the active component must be a ==> sequent");
      Formula aux = f_at(c.seq.ante, app.pos, "modal rule auxiliary");
      Formula nf;
      if (rule == RuleId::K) nf = Formula::boxg(aux);
      else if (rule == RuleId::KBlack) nf = Formula::boxr(aux);
      else if (rule == RuleId::Four) {
        need(aux.kind() == FKind::BoxG, ErrCode::RuleMismatch,
             "4: auxiliary formula must be [g]-prefixed");
        nf = aux;
      } else {
        need(aux.kind() == FKind::BoxR, ErrCode::RuleMismatch,
             "4#: auxiliary formula must be [r]-prefixed");
        nf = aux;
      }
      Hyper h = p0();
      h.comps[app.comp].seq.ante = erase_at(h.comps[app.comp].seq.ante, app.pos);
      Sequent nc;
      nc.kind = SeqKind::Arrow;
      nc.ante.push_back(nf);
      h.comps.insert(h.comps.begin() + app.comp, {fresh_component_id(), std::move(nc)});
      return h;
    }
    case RuleId::BoxRight:
    case RuleId::BlackR1: {
      const auto& c = comp_at(p0(), app.comp, "diagonal rule");
      need(c.seq.kind == SeqKind::DoubleArrow, ErrCode::KindMismatch,
           "BoxRight/BlackR1: the active component must be a ==> sequent");
      need(c.seq.ante.size() == 1 && c.seq.succ.size() == 1, ErrCode::RuleMismatch,
           "BoxRight/BlackR1: premise component must be exactly [g]A ==> A");
      need(c.seq.ante[0].kind() == FKind::BoxG && c.seq.ante[0].child() == c.seq.succ[0],
           ErrCode::RuleMismatch,
           "BoxRight/BlackR1: premise component must carry the diagonal formula [g]A");
      Formula a = c.seq.succ[0];
      Hyper h = p0();
      Sequent out;
      out.kind = SeqKind::Arrow;
      out.succ.push_back(rule == RuleId::BoxRight ? Formula::boxg(a) : Formula::boxr(a));
      h.comps[app.comp].seq = std::move(out);
      h.comps[app.comp].id = fresh_component_id();
      if (rule == RuleId::BlackR1) {
        Sequent empty;
        empty.kind = SeqKind::DoubleArrow;
        h.comps.insert(h.comps.begin() + app.comp + 1,
                       {fresh_component_id(), std::move(empty)});
      }
      return h;
    }
    case RuleId::BlackL: {
      const auto& c = comp_at(p0(), app.comp, "BlackL");
      need(c.seq.kind == SeqKind::DoubleArrow, ErrCode::KindMismatch,
           "BlackL: the active component must be a ==> sequent");
      need(c.seq.ante.size() == 1 && c.seq.succ.empty(), ErrCode::RuleMismatch,
           "BlackL: premise component must be exactly A ==>");
      Hyper h = p0();
      h.comps[app.comp].seq.ante[0] = Formula::boxr(c.seq.ante[0]);
      return h;
    }
    case RuleId::BlackR2: {
      const auto& c = comp_at(p0(), app.comp, "BlackR2");
      need(c.seq.kind == SeqKind::DoubleArrow, ErrCode::KindMismatch,
           "BlackR2: the active component must be a ==> sequent");
      need(c.seq.ante.empty() && c.seq.succ.size() == 1, ErrCode::RuleMismatch,
           "BlackR2: premise component must be exactly ==> A");
      Hyper h = p0();
      h.comps[app.comp].seq.succ[0] = Formula::boxr(c.seq.succ[0]);
      return h;
    }
    case RuleId::ToDouble: {
      need(p0().size() == 1, ErrCode::RuleMismatch,
           "ToDouble: premise must be a single-component hypersequent");
      need(p0()[0].kind == SeqKind::Arrow, ErrCode::KindMismatch,
           "ToDouble: premise component must be a --> sequent");
      Hyper h = p0();
      h.comps[0].seq.kind = SeqKind::DoubleArrow;
      h.comps[0].id = fresh_component_id();
      return h;
    }
    case RuleId::ToArrow: {
      need(p0().size() == 1, ErrCode::RuleMismatch,
           "ToArrow: premise must be a single-component hypersequent");
      need(p0()[0].kind == SeqKind::DoubleArrow, ErrCode::KindMismatch,
           "ToArrow: premise component must be a ==> sequent");
      Hyper h = p0();
      h.comps[0].seq.kind = SeqKind::Arrow;
      h.comps[0].id = fresh_component_id();
      return h;
    }
    default: fail(ErrCode::RuleMismatch, "internal: not a premise-indexed rule");
  }
}

bool is_conclusion_indexed(RuleId r) {
  switch (r) {
    case RuleId::AndL1:
    case RuleId::AndL2:
    case RuleId::NegL:
    case RuleId::NegR:
    case RuleId::ContrL:
    case RuleId::ContrR:
    case RuleId::WeakL:
    case RuleId::WeakR:
    case RuleId::EW:
    case RuleId::Split: return true;
    default: return false;
  }
}

size_t premise_arity(RuleId r) {
  switch (r) {
    case RuleId::Init:
    case RuleId::InitBot: return 0;
    case RuleId::AndR:
    case RuleId::Cut: return 2;
    default: return 1;
  }
}

void check_initial(RuleId rule, const Hyper& concl) {
  need(concl.size() == 1, ErrCode::RuleMismatch,
       "initial sequents carry no environment");
  const Sequent& s = concl[0];
  need(s.kind == SeqKind::Arrow, ErrCode::KindMismatch,
       "initial sequents are --> sequents");
  if (rule == RuleId::Init) {
    need(s.ante.size() == 1 && s.succ.size() == 1 && s.ante[0] == s.succ[0],
         ErrCode::RuleMismatch, "Init: conclusion must be A --> A");
  } else {
    need(s.ante.size() == 1 && s.ante[0].kind() == FKind::Bottom && s.succ.empty(),
         ErrCode::RuleMismatch, "InitBot: conclusion must be false -->");
  }
}

}  // namespace

Hyper rule_conclusion(RuleId rule, const RuleApp& app,
                      const std::vector<const Hyper*>& premises, const Hyper* stated) {
  if (premise_arity(rule) != premises.size())
    fail(ErrCode::RuleMismatch, "wrong number of premises for this rule");
  if (premise_arity(rule) == 0) {
    need(stated != nullptr, ErrCode::RuleMismatch, "initial sequent needs a conclusion");
    check_initial(rule, *stated);
    return *stated;
  }
  if (is_conclusion_indexed(rule)) {
    need(stated != nullptr, ErrCode::RuleMismatch, "rule needs a stated conclusion");
    Hyper want = expected_premise(rule, app, *stated);
    if (!hs_equal(want, *premises[0]))
      fail(ErrCode::RuleMismatch, std::string(rule_name(rule)) +
                                      ": premise does not match the rule schema");
    return *stated;
  }
  return computed_conclusion(rule, app, premises);
}

CheckResult check_rule(const Hyper& conclusion, const RuleApp& app,
                       const std::vector<const Hyper*>& premises) {
  try {
    Hyper computed = rule_conclusion(app.rule, app, premises, &conclusion);
    if (!is_conclusion_indexed(app.rule) && premise_arity(app.rule) > 0) {
      if (!hs_equal(computed, conclusion))
        return {false, CheckError{ErrCode::RuleMismatch,
                                  std::string(rule_name(app.rule)) +
                                      ": conclusion does not match the rule schema"}};
    }
    if (app.rule != RuleId::Cut && app.cut_formula.has_value())
      return {false, CheckError{ErrCode::RuleMismatch,
                                "cut_formula is only allowed on Cut"}};
    return {true, std::nullopt};
  } catch (const CheckFail& f) {
    return {false, f.err};
  }
}

static void check_node(const ProofPtr& p, Report& rep, NodePath& path) {
  rep.nodes++;
  rep.rules[p->app.rule]++;
  if (p->app.rule == RuleId::Cut) rep.cut_count++;
  std::vector<const Hyper*> prems;
  for (auto& q : p->premises) prems.push_back(&q->conclusion);
  CheckResult r = check_rule(p->conclusion, p->app, prems);
  if (!r.ok && !rep.first_error) rep.first_error = {path, *r.error};
  for (size_t i = 0; i < p->premises.size(); i++) {
    path.push_back(static_cast<int>(i));
    check_node(p->premises[i], rep, path);
    path.pop_back();
  }
}

Report check_proof(const ProofPtr& p) {
  Report rep;
  if (!p) {
    rep.valid = false;
    return rep;
  }
  NodePath path;
  check_node(p, rep, path);
  rep.valid = !rep.first_error.has_value();
  return rep;
}

}  // namespace gr
