#include "gr/normalize.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace gr {

bool is_target_rule(RuleId r) {
  return r == RuleId::BoxRight || r == RuleId::BlackR1 || r == RuleId::BlackR2 ||
         r == RuleId::BlackL;
}

namespace {

bool is_prop_rule(RuleId r) {
  switch (r) {
    case RuleId::AndL1:
    case RuleId::AndL2:
    case RuleId::AndR:
    case RuleId::NegL:
    case RuleId::NegR: return true;
    default: return false;
  }
}

bool is_k_rule(RuleId r) {
  return r == RuleId::K || r == RuleId::Four || r == RuleId::KBlack ||
         r == RuleId::FourBlack;
}

// conclusion component the rule acts in (produces/modifies); -1 if none fits
int active_concl_comp(const ProofNode& n, LineageCache& lc) {
  switch (n.app.rule) {
    case RuleId::AndL1:
    case RuleId::AndL2:
    case RuleId::NegL:
    case RuleId::NegR:
    case RuleId::ContrL:
    case RuleId::ContrR:
    case RuleId::WeakL:
    case RuleId::WeakR:
    case RuleId::EW: return n.app.comp;
    case RuleId::AndR:
    case RuleId::Cut:
    case RuleId::Merge:
      for (size_t c = 0; c < n.conclusion.size(); c++)
        if (comp_parents(n, static_cast<int>(c), lc).size() == 2)
          return static_cast<int>(c);
      return -1;
    case RuleId::K:
    case RuleId::Four:
    case RuleId::KBlack:
    case RuleId::FourBlack: {
      // the ==> component the auxiliary formula was consumed from
      for (size_t c = 0; c < n.conclusion.size(); c++) {
        auto ps = comp_parents(n, static_cast<int>(c), lc);
        if (ps.size() == 1 && ps[0].second == n.app.comp &&
            n.conclusion[c].kind == SeqKind::DoubleArrow)
          return static_cast<int>(c);
      }
      return -1;
    }
    case RuleId::BlackL:
    case RuleId::BlackR2: {
      for (size_t c = 0; c < n.conclusion.size(); c++) {
        auto ps = comp_parents(n, static_cast<int>(c), lc);
        if (ps.size() == 1 && ps[0].second == n.app.comp) return static_cast<int>(c);
      }
      return -1;
    }
    default: return -1;
  }
}

struct Walker {
  LineageCache& lc;
  std::set<std::pair<const ProofNode*, int>> seen;
  TauAnnotation ann;
  std::vector<RuleId> deep_intros;
  bool cut_barrier = false;

  // classify a labeled ==> component c of n's conclusion and continue upward
  void visit(const ProofNode* n, int c, bool deep) {
    if (!seen.insert({n, c}).second) return;
    RuleId r = n->app.rule;
    if (turnstile_introduced(*n, c, lc)) {
      deep_intros.push_back(r);
      if (!deep) {
        ann.nodes.push_back({n, c, PathClass::Start});
        ann.starts.push_back(n);
      }
      if (r == RuleId::EW) ann.has_ew_start = true;
      if (r == RuleId::BlackR1) ann.has_blackr1_start = true;
      return;
    }
    int ac = active_concl_comp(*n, lc);
    bool on_comp = ac == c;
    if ((r == RuleId::BlackL || r == RuleId::BlackR2) && on_comp) {
      // labeling cuts off here; introducer analysis continues above
      if (!deep) {
        ann.nodes.push_back({n, c, PathClass::Start});
        ann.starts.push_back(n);
      }
      for (auto& [pi, pc] : comp_parents(*n, c, lc))
        visit(n->premises[pi].get(), pc, true);
      return;
    }
    if (r == RuleId::Cut && on_comp) {
      // Lemma 2 machinery presupposes cut-free paths; record the barrier and
      // stop labeling here
      cut_barrier = true;
      if (!deep) ann.nodes.push_back({n, c, PathClass::Start});
      return;
    }
    PathClass cls = PathClass::Removable;
    if (on_comp) {
      if (is_prop_rule(r) || r == RuleId::ContrL || r == RuleId::ContrR ||
          r == RuleId::WeakL || r == RuleId::WeakR)
        cls = PathClass::Natural1;
      else if (is_k_rule(r))
        cls = PathClass::Natural2;
      else
        cls = PathClass::Removable;  // merge and anything unexpected
    }
    if (!deep) ann.nodes.push_back({n, c, cls});
    for (auto& [pi, pc] : comp_parents(*n, c, lc))
      visit(n->premises[pi].get(), pc, deep);
  }
};

const ProofNode* parent_of(const ProofPtr& root, const ProofNode* n) {
  if (root.get() == n) return nullptr;
  const ProofNode* found = nullptr;
  std::function<void(const ProofNode*)> go = [&](const ProofNode* cur) {
    if (found) return;
    for (auto& q : cur->premises) {
      if (q.get() == n) {
        found = cur;
        return;
      }
      go(q.get());
    }
  };
  go(root.get());
  return found;
}

}  // namespace

TauAnnotation label_tau_paths(const ProofPtr& root, const ProofNode* target,
                              LineageCache& lc) {
  if (!is_target_rule(target->app.rule))
    throw NotATarget("label_tau_paths: node is not a [g]:r / [r]:r1 / [r]:r2 / [r]:l application");
  Walker w{lc, {}, {}, {}, false};
  // the labeled turnstile: the target's premise component
  const ProofNode* prem = target->premises.at(0).get();
  w.visit(prem, target->app.comp, false);
  w.ann.cut_barrier = w.cut_barrier;
  (void)root;
  return w.ann;
}

namespace {

TauAnnotation deep_annotation(const ProofNode* target, LineageCache& lc) {
  Walker w{lc, {}, {}, {}, false};
  const ProofNode* prem = target->premises.at(0).get();
  w.visit(prem, target->app.comp, false);
  w.ann.cut_barrier = w.cut_barrier;
  // run the cutoff continuations too (visit already does, with deep=true)
  return w.ann;
}

// -- generic re-application ---------------------------------------------------

// optional redirection of premise components: id -> candidate ids in the new
// premise (used when permuting past a merge, whose parts both stand for the
// merged component)
using CompAlias = std::map<ComponentId, std::vector<ComponentId>>;

int comp_by_premise_id(const ProofNode* orig, int prem_idx, int prem_comp,
                       const Hyper& now, const CompAlias* alias,
                       const Formula* need = nullptr, Side side = Side::Ante) {
  ComponentId id = orig->premises[prem_idx]->conclusion.comps.at(prem_comp).id;
  auto has = [&](int ci) {
    if (ci < 0 || !need) return ci >= 0;
    const auto& v = side == Side::Ante ? now[ci].ante : now[ci].succ;
    return find_in(v, *need) >= 0;
  };
  int direct = comp_of_id(now, id);
  if (has(direct)) return direct;
  if (alias) {
    auto it = alias->find(id);
    if (it != alias->end())
      for (ComponentId cand : it->second) {
        int ci = comp_of_id(now, cand);
        if (has(ci)) return ci;
      }
  }
  return need ? -1 : direct;
}

int need_comp(int c, const char* what) {
  if (c < 0) throw NoPermutationCase(std::string("reapply: lost component for ") + what);
  return c;
}

int need_pos(const std::vector<Formula>& v, const Formula& f, const char* what) {
  int p = find_in(v, f);
  if (p < 0) throw NoPermutationCase(std::string("reapply: lost formula for ") + what);
  return p;
}

Sequent target_premise_shape(const ProofNode* t) {
  return t->premises[0]->conclusion[t->app.comp];
}

// re-applies orig's rule to new premises, locating components by id and
// formulas by content
ProofPtr reapply(const ProofNode* orig, std::vector<ProofPtr> np, LineageCache& lc,
                 const CompAlias* alias = nullptr) {
  const RuleApp& a = orig->app;
  switch (a.rule) {
    case RuleId::Init:
    case RuleId::InitBot:
      throw NoPermutationCase("reapply: initial sequent");
    case RuleId::AndL1:
    case RuleId::AndL2: {
      int pc = comp_parents(*orig, a.comp, lc).at(0).second;
      Formula f = orig->conclusion[a.comp].ante[a.pos];
      Formula aux = a.rule == RuleId::AndL1 ? f.left() : f.right();
      int c = need_comp(
          comp_by_premise_id(orig, 0, pc, np[0]->conclusion, alias, &aux, Side::Ante),
          "AndL");
      int pos = need_pos(np[0]->conclusion[c].ante, aux, "AndL");
      return a.rule == RuleId::AndL1 ? b_and_l1(np[0], c, pos, f.right())
                                     : b_and_l2(np[0], c, pos, f.left());
    }
    case RuleId::NegL:
    case RuleId::NegR: {
      bool left = a.rule == RuleId::NegL;
      int pc = comp_parents(*orig, a.comp, lc).at(0).second;
      Formula f = left ? orig->conclusion[a.comp].ante[a.pos]
                       : orig->conclusion[a.comp].succ[a.pos];
      Formula aux = f.child();
      int c = need_comp(comp_by_premise_id(orig, 0, pc, np[0]->conclusion, alias, &aux,
                                           left ? Side::Succ : Side::Ante),
                        "Neg");
      int pos = need_pos(left ? np[0]->conclusion[c].succ : np[0]->conclusion[c].ante,
                         aux, "Neg");
      return left ? b_neg_l(np[0], c, pos) : b_neg_r(np[0], c, pos);
    }
    case RuleId::ContrL:
    case RuleId::ContrR: {
      bool left = a.rule == RuleId::ContrL;
      int pc = comp_parents(*orig, a.comp, lc).at(0).second;
      Formula f = left ? orig->conclusion[a.comp].ante[a.pos]
                       : orig->conclusion[a.comp].succ[a.pos];
      int c = need_comp(comp_by_premise_id(orig, 0, pc, np[0]->conclusion, alias, &f,
                                           left ? Side::Ante : Side::Succ),
                        "Contr");
      const auto& v = left ? np[0]->conclusion[c].ante : np[0]->conclusion[c].succ;
      int p1 = need_pos(v, f, "Contr");
      int p2 = -1;
      for (size_t k = p1 + 1; k < v.size(); k++)
        if (v[k] == f) {
          p2 = static_cast<int>(k);
          break;
        }
      if (p2 < 0) throw NoPermutationCase("reapply: contraction copies split apart");
      return left ? b_contr_l(np[0], c, p1, p2) : b_contr_r(np[0], c, p1, p2);
    }
    case RuleId::WeakL:
    case RuleId::WeakR: {
      bool left = a.rule == RuleId::WeakL;
      int pc = comp_parents(*orig, a.comp, lc).at(0).second;
      int c = need_comp(comp_by_premise_id(orig, 0, pc, np[0]->conclusion, alias), "Weak");
      Formula f = left ? orig->conclusion[a.comp].ante[a.pos]
                       : orig->conclusion[a.comp].succ[a.pos];
      return left ? b_weak_l(np[0], c, f) : b_weak_r(np[0], c, f);
    }
    case RuleId::EW: return b_ew(np[0], orig->conclusion[a.comp]);
    case RuleId::Split: {
      int pc = comp_parents(*orig, a.comp, lc).at(0).second;
      int c = need_comp(comp_by_premise_id(orig, 0, pc, np[0]->conclusion, alias), "Split");
      const Sequent& want2 = orig->conclusion[a.comp2];
      std::vector<int> a2, s2;
      const Sequent& cur = np[0]->conclusion[c];
      std::vector<bool> usedA(cur.ante.size(), false), usedS(cur.succ.size(), false);
      for (auto& f : want2.ante)
        for (size_t i = 0; i < cur.ante.size(); i++)
          if (!usedA[i] && cur.ante[i] == f) {
            usedA[i] = true;
            a2.push_back(static_cast<int>(i));
            break;
          }
      for (auto& f : want2.succ)
        for (size_t i = 0; i < cur.succ.size(); i++)
          if (!usedS[i] && cur.succ[i] == f) {
            usedS[i] = true;
            s2.push_back(static_cast<int>(i));
            break;
          }
      return b_split(np[0], c, a2, s2);
    }
    case RuleId::Merge: {
      int c1 = need_comp(comp_by_premise_id(orig, 0, a.comp, np[0]->conclusion, alias), "Merge");
      int c2 = need_comp(comp_by_premise_id(orig, 0, a.comp2, np[0]->conclusion, alias), "Merge");
      return b_merge(np[0], c1, c2);
    }
    case RuleId::BotRule: {
      int c1 = need_comp(comp_by_premise_id(orig, 0, a.comp, np[0]->conclusion, alias), "BotRule");
      int c2 = need_comp(comp_by_premise_id(orig, 0, a.comp2, np[0]->conclusion, alias), "BotRule");
      return b_bot_rule(np[0], c1, c2);
    }
    case RuleId::K:
    case RuleId::Four:
    case RuleId::KBlack:
    case RuleId::FourBlack: {
      Formula aux = orig->premises[0]->conclusion[a.comp].ante[a.pos];
      int c = need_comp(
          comp_by_premise_id(orig, 0, a.comp, np[0]->conclusion, alias, &aux, Side::Ante),
          "K");
      int pos = need_pos(np[0]->conclusion[c].ante, aux, "K aux");
      return b_modal(np[0], a.rule, c, pos);
    }
    case RuleId::BoxRight:
    case RuleId::BlackR1:
    case RuleId::BlackL:
    case RuleId::BlackR2: {
      int c = need_comp(comp_by_premise_id(orig, 0, a.comp, np[0]->conclusion, alias), "target");
      Sequent want = target_premise_shape(orig);
      ComponentId id = np[0]->conclusion.comps[c].id;
      ProofPtr q = np[0];
      if (!seq_eq(q->conclusion[c], want)) {
        q = b_adjust_comp(q, id, want);
        c = comp_of_id(q->conclusion, id);
      }
      switch (a.rule) {
        case RuleId::BoxRight: return b_box_right(q, c);
        case RuleId::BlackR1: return b_black_r1(q, c);
        case RuleId::BlackL: return b_black_l(q, c);
        default: return b_black_r2(q, c);
      }
    }
    case RuleId::ToDouble:
    case RuleId::ToArrow: {
      if (np[0]->conclusion.size() != 1)
        throw NoPermutationCase("reapply: turnstile rule premise not a singleton");
      return a.rule == RuleId::ToDouble ? b_to_double(np[0]) : b_to_arrow(np[0]);
    }
    case RuleId::AndR:
    case RuleId::Cut: {
      bool cut = a.rule == RuleId::Cut;
      Formula la = orig->premises[0]->conclusion[a.lcomp].succ[a.lpos];
      Formula ra = cut ? *a.cut_formula
                       : orig->premises[1]->conclusion[a.rcomp].succ[a.rpos];
      int lc2 = need_comp(comp_by_premise_id(orig, 0, a.lcomp, np[0]->conclusion, alias,
                                             &la, Side::Succ),
                          "AndR/Cut");
      int rc = need_comp(comp_by_premise_id(orig, 1, a.rcomp, np[1]->conclusion, alias,
                                            &ra, cut ? Side::Ante : Side::Succ),
                         "AndR/Cut");
      int lp = need_pos(np[0]->conclusion[lc2].succ, la, "AndR/Cut left");
      int rp = need_pos(cut ? np[1]->conclusion[rc].ante : np[1]->conclusion[rc].succ,
                        ra, "AndR/Cut right");
      return cut ? b_cut(np[0], np[1], lc2, lp, rc, rp, la)
                 : b_and_r(np[0], np[1], lc2, lp, rc, rp);
    }
  }
  throw NoPermutationCase("reapply: unhandled rule");
}

// premise index of `lower` that holds `upper`
int premise_index_of(const ProofNode* lower, const ProofNode* upper) {
  for (size_t i = 0; i < lower->premises.size(); i++)
    if (lower->premises[i].get() == upper) return static_cast<int>(i);
  return -1;
}

// duplication case: upper is a Merge whose merged component is the premise
// component of a target-rule `lower`
ProofPtr duplicate_target(const ProofNode* upper, const ProofNode* lower) {
  ProofPtr g = upper->premises[0];
  int c1 = upper->app.comp, c2 = upper->app.comp2;
  Sequent want = target_premise_shape(lower);
  for (int part : {c1, c2}) {
    // parts may contain only restrictions of the target shape
    const Sequent& s = g->conclusion[part];
    for (auto& f : s.ante)
      if (find_in(want.ante, f) < 0)
        throw NoPermutationCase("duplicate_target: stray antecedent formula");
    for (auto& f : s.succ)
      if (find_in(want.succ, f) < 0)
        throw NoPermutationCase("duplicate_target: stray succedent formula");
  }
  ComponentId id1 = g->conclusion.comps[c1].id, id2 = g->conclusion.comps[c2].id;
  std::vector<ComponentId> prods1, prods2;
  auto apply_part = [&](ProofPtr q, ComponentId id,
                        std::vector<ComponentId>& prods) -> ProofPtr {
    q = b_adjust_comp(q, id, want);
    int c = comp_of_id(q->conclusion, id);
    switch (lower->app.rule) {
      case RuleId::BoxRight: q = b_box_right(q, c); break;
      case RuleId::BlackR1: q = b_black_r1(q, c); break;
      case RuleId::BlackL: q = b_black_l(q, c); break;
      default: q = b_black_r2(q, c); break;
    }
    prods.push_back(q->conclusion.comps[c].id);
    if (lower->app.rule == RuleId::BlackR1)
      prods.push_back(q->conclusion.comps[c + 1].id);
    return q;
  };
  ProofPtr q = apply_part(g, id1, prods1);
  q = apply_part(q, id2, prods2);
  // close the duplication with merge + contraction per product pair
  for (size_t k = 0; k < prods1.size(); k++) {
    int a = comp_of_id(q->conclusion, prods1[k]);
    int b = comp_of_id(q->conclusion, prods2[k]);
    q = b_merge(q, a, b);
    int m = comp_of_id(q->conclusion, prods1[k]);
    const Sequent& s = q->conclusion[m];
    if (s.ante.size() == 2) q = b_contr_l(q, m, 0, 1);
    m = comp_of_id(q->conclusion, prods1[k]);
    if (q->conclusion[m].succ.size() == 2) q = b_contr_r(q, m, 0, 1);
  }
  return q;
}

ProofPtr permute_pair(const ProofPtr& root, const ProofNode* upper,
                      const ProofNode* lower, LineageCache& lc) {
  int k = premise_index_of(lower, upper);
  if (k < 0) throw NotAdjacent("permute_down: nodes are not adjacent");
  ProofPtr swapped;
  if (is_target_rule(lower->app.rule) && upper->app.rule == RuleId::Merge) {
    // is the merged component the target's premise component?
    int merged_at = std::min(upper->app.comp, upper->app.comp2);
    if (merged_at == lower->app.comp) {
      swapped = duplicate_target(upper, lower);
      return graft(root, lower, std::move(swapped));
    }
  }
  // generic: apply lower's rule inside upper's premise, then upper's rule
  // below. lower's other premises (if two-premise) stay.
  // pick the premise of upper that carries lower's active material: for a
  // single-premise upper this is 0; for AndR/Cut it is the side holding the
  // component lower acts on.
  int side = 0;
  if (upper->premises.size() == 2) {
    int lower_active = active_concl_comp(*lower, lc);
    int in_upper;
    if (lower_active >= 0 && !is_target_rule(lower->app.rule)) {
      auto ps = comp_parents(*lower, lower_active, lc);
      in_upper = ps.empty() ? -1 : ps[0].second;
    } else {
      in_upper = lower->app.comp;  // target rules: premise component index
    }
    if (in_upper < 0) throw NoPermutationCase("permute: cannot locate active component");
    auto ups = comp_parents(*upper, in_upper, lc);
    if (ups.size() != 1)
      throw NoPermutationCase("permute: active component not in a single premise of upper");
    side = ups[0].first;
  }
  // components of upper's conclusion may stand for several premise parts
  // (merge); record the candidates so lower's actives can be relocated
  CompAlias alias;
  for (size_t c = 0; c < upper->conclusion.size(); c++) {
    std::vector<ComponentId> cands;
    for (auto& [pi, pc] : comp_parents(*upper, static_cast<int>(c), lc))
      if (pi == side) cands.push_back(upper->premises[pi]->conclusion.comps[pc].id);
    if (!cands.empty()) alias[upper->conclusion.comps[c].id] = cands;
  }
  std::vector<ProofPtr> lower_prem;
  for (auto& q : lower->premises) lower_prem.push_back(q);
  lower_prem[k] = upper->premises[side];
  ProofPtr inner = reapply(lower, lower_prem, lc, &alias);
  std::vector<ProofPtr> upper_prem;
  for (auto& q : upper->premises) upper_prem.push_back(q);
  upper_prem[side] = inner;
  ProofPtr outer = reapply(upper, upper_prem, lc);
  if (!hs_equal(outer->conclusion, lower->conclusion))
    throw NoPermutationCase("permute: exchanged pair changes the hypersequent");
  return graft(root, lower, std::move(outer));
}

}  // namespace

ProofPtr permute_down(const ProofPtr& root, const ProofNode* upper,
                      const ProofNode* lower) {
  LineageCache lc;
  return permute_pair(root, upper, lower, lc);
}

// ---- standard form ----------------------------------------------------------

namespace {

bool is_nabla_comp(const Sequent& s) {
  return s.kind == SeqKind::Arrow && s.succ.empty() && s.ante.size() == 1 &&
         (s.ante[0].kind() == FKind::BoxG || s.ante[0].kind() == FKind::BoxR);
}

// product components of a target application in its conclusion
std::vector<int> product_comps(const ProofNode* t) {
  switch (t->app.rule) {
    case RuleId::BoxRight:
    case RuleId::BlackL:
    case RuleId::BlackR2: return {t->app.comp};
    case RuleId::BlackR1: return {t->app.comp, t->app.comp + 1};
    default: return {};
  }
}

// the iw-chain check for the environment-K form: the content of the target's
// premise component comes from weakenings only (the chain may be interleaved
// with applications on other components)
bool envk_chain(const ProofNode* t, LineageCache& lc) {
  const ProofNode* n = t->premises[0].get();
  int c = t->app.comp;
  for (int side = 0; side < 2; side++) {
    const auto& v = side == 0 ? n->conclusion[c].ante : n->conclusion[c].succ;
    for (size_t i = 0; i < v.size(); i++) {
      Occ o{c, side == 0 ? Side::Ante : Side::Succ, static_cast<int>(i)};
      for (auto& site : find_introducers(n, o, lc)) {
        RuleId r = site.node->app.rule;
        if (r != RuleId::WeakL && r != RuleId::WeakR) return false;
      }
    }
  }
  return true;
}

}  // namespace

std::optional<StandardFormKind> is_standard(const ProofPtr& root, const ProofNode* target) {
  if (!is_target_rule(target->app.rule)) return std::nullopt;
  LineageCache lc;
  auto prods = product_comps(target);
  bool plain_shape = true;
  for (size_t c = 0; c < target->conclusion.size(); c++) {
    if (std::find(prods.begin(), prods.end(), static_cast<int>(c)) != prods.end())
      continue;
    if (!is_nabla_comp(target->conclusion[c])) plain_shape = false;
  }
  TauAnnotation ann = deep_annotation(target, lc);
  (void)root;
  if (ann.cut_barrier) return std::nullopt;
  if (target->app.rule == RuleId::BoxRight) {
    if (ann.has_ew_start) return std::nullopt;  // condition 1
    if (plain_shape && !ann.has_blackr1_start) return StandardFormKind::BoxR_Plain;
    if (ann.has_blackr1_start && envk_chain(target, lc))
      return StandardFormKind::BoxR_EnvK;  // condition 2
    return std::nullopt;
  }
  // [r] targets: the proper form needs only the =>-rule as introducer and a
  // nabla-shaped environment (condition 3). When ew or [r]:r1 feeds the
  // turnstile the application is in the environment-K situation, which the
  // paper reduces to ew/iw and so never obstructs anything; it is reported
  // under its plain kind.
  bool ksituation = ann.has_ew_start || ann.has_blackr1_start;
  if (!ksituation && !plain_shape) return std::nullopt;
  switch (target->app.rule) {
    case RuleId::BlackR1: return StandardFormKind::BlackR1_Plain;
    case RuleId::BlackR2: return StandardFormKind::BlackR2_Plain;
    default: return StandardFormKind::BlackL_Plain;
  }
}

std::vector<Formula> standard_nabla(const ProofPtr& root, const ProofNode* target) {
  (void)root;
  std::vector<Formula> out;
  auto prods = product_comps(target);
  for (size_t c = 0; c < target->conclusion.size(); c++) {
    if (std::find(prods.begin(), prods.end(), static_cast<int>(c)) != prods.end())
      continue;
    if (is_nabla_comp(target->conclusion[c])) out.push_back(target->conclusion[c].ante[0]);
  }
  return out;
}

// ---- standardize ------------------------------------------------------------

namespace {

std::vector<const ProofNode*> all_targets_topmost_first(const ProofPtr& root) {
  std::vector<std::pair<size_t, const ProofNode*>> found;
  std::function<void(const ProofNode*, size_t)> go = [&](const ProofNode* n, size_t d) {
    if (is_target_rule(n->app.rule)) found.push_back({d, n});
    for (auto& q : n->premises) go(q.get(), d + 1);
  };
  go(root.get(), 0);
  std::stable_sort(found.begin(), found.end(),
                   [](auto& a, auto& b) { return a.first > b.first; });
  std::vector<const ProofNode*> out;
  for (auto& [d, n] : found) out.push_back(n);
  return out;
}

// the path node that consumes `m`'s conclusion, when it is itself in the path
// or is the target
const ProofNode* path_consumer(const TauAnnotation& ann, const ProofNode* target,
                               const ProofNode* m, const ProofPtr& root) {
  const ProofNode* par = parent_of(root, m);
  if (!par) return nullptr;
  if (par == target) return par;
  for (auto& tn : ann.nodes)
    if (tn.node == par) return par;
  return nullptr;
}

// finalization for a target whose paths have an ew or [r]:r1 introducer:
// replay the subproof above the target with the tau component emptied or
// dropped, then pad back to the target's conclusion.
ProofPtr finalize_nonplain(const ProofPtr& root, const ProofNode* target,
                           const TauAnnotation& ann, LineageCache& lc, bool ew_case) {
  ReplayCtx ctx;
  LineageCache rlc;
  ctx.lineage = &rlc;
  for (auto& tn : ann.nodes) {
    if (tn.cls == PathClass::Start && tn.node->app.rule == RuleId::EW && ew_case) {
      TopRepl tr;
      tr.proof = tn.node->premises[0];
      for (size_t c = 0; c < tn.node->conclusion.size(); c++) {
        if (static_cast<int>(c) == tn.node->app.comp) continue;  // dropped tau comp
        auto ps = comp_parents(*tn.node, static_cast<int>(c), lc);
        if (ps.empty()) continue;
        tr.comp_map[static_cast<int>(c)] = {
            tr.proof->conclusion.comps[ps[0].second].id};
      }
      ctx.tops[tn.node] = std::move(tr);
    }
    if (!ew_case && tn.cls == PathClass::Natural1 &&
        (tn.node->app.rule == RuleId::WeakL || tn.node->app.rule == RuleId::WeakR))
      ctx.skip_weak.insert(tn.node);
    if (!ew_case && tn.cls == PathClass::Natural1 &&
        (tn.node->app.rule == RuleId::ContrL || tn.node->app.rule == RuleId::ContrR))
      ctx.skip_contr.insert(tn.node);
  }
  ReplayRes res = replay(target->premises[0], ctx);
  ProofPtr q = res.proof;
  if (ew_case) {
    // everything the target concluded is recovered by ew/iw padding
    q = conform(std::move(q), target->conclusion);
    return graft(root, target, std::move(q));
  }
  // environment-K handling: tau component is empty; 'K' is everything else
  Hyper kenv;
  auto prods = product_comps(target);
  for (size_t c = 0; c < target->conclusion.size(); c++)
    if (std::find(prods.begin(), prods.end(), static_cast<int>(c)) == prods.end())
      kenv.comps.push_back(target->conclusion.comps[c]);
  Sequent empty_seq;
  empty_seq.kind = SeqKind::DoubleArrow;
  Hyper kenv_plus = kenv;
  kenv_plus.comps.push_back({fresh_component_id(), empty_seq});
  std::vector<std::pair<ComponentId, int>> pins;
  {
    // pin the replayed tau component onto the fresh empty ==> slot
    auto& img = res.image.at(target->app.comp);
    if (!img.empty() && comp_of_id(q->conclusion, img[0]) >= 0)
      pins.push_back({img[0], static_cast<int>(kenv_plus.comps.size()) - 1});
  }
  q = conform(std::move(q), kenv_plus, pins);
  int ec = -1;
  for (size_t c = 0; c < q->conclusion.size(); c++)
    if (q->conclusion[c].kind == SeqKind::DoubleArrow && q->conclusion[c].empty_both())
      ec = static_cast<int>(c);
  if (ec < 0) throw NoPermutationCase("finalize: lost the empty ==> component");
  ComponentId eid = q->conclusion.comps[ec].id;
  switch (target->app.rule) {
    case RuleId::BoxRight: {
      q = b_adjust_comp(std::move(q), eid, target_premise_shape(target));
      int at = comp_of_id(q->conclusion, eid);
      q = b_box_right(std::move(q), at);
      break;
    }
    case RuleId::BlackR1: {
      // reduced to ew per the paper: K | --> [r]B | ==>  from  K | ==>
      Formula rb = target->conclusion[target->app.comp].succ.at(0);
      Sequent s;
      s.kind = SeqKind::Arrow;
      s.succ.push_back(rb);
      q = b_ew(std::move(q), s);
      break;
    }
    case RuleId::BlackR2: {
      Formula rb = target->conclusion[target->app.comp].succ.at(0);
      q = b_weak_r(std::move(q), ec, rb);
      break;
    }
    default: {  // BlackL: reduced to iw
      Formula rb = target->conclusion[target->app.comp].ante.at(0);
      q = b_weak_l(std::move(q), ec, rb);
      break;
    }
  }
  q = conform(std::move(q), target->conclusion);
  return graft(root, target, std::move(q));
}

}  // namespace

ProofPtr standardize(const ProofPtr& p, TraceSink* trace, size_t fuel_factor) {
  ProofPtr root = p;
  size_t fuel = fuel_factor * proof_size(p) * proof_size(p) + 100;
  while (true) {
    if (fuel-- == 0) throw FuelExhausted("standardize: permutation fuel exhausted");
    LineageCache lc;
    auto targets = all_targets_topmost_first(root);
    const ProofNode* t = nullptr;
    for (auto* cand : targets) {
      if (is_standard(root, cand)) continue;
      // targets whose paths run through a cut are outside the lemma's scope
      TauAnnotation probe = label_tau_paths(root, cand, lc);
      if (probe.cut_barrier) continue;
      t = cand;
      break;
    }
    if (!t) return root;
    TauAnnotation ann = label_tau_paths(root, t, lc);
    // property (*): sink removable applications below the target
    const ProofNode* m = nullptr;
    const ProofNode* consumer = nullptr;
    for (auto& tn : ann.nodes) {
      if (tn.cls != PathClass::Removable) continue;
      const ProofNode* x = path_consumer(ann, t, tn.node, root);
      if (!x) continue;
      if (x != t) {
        PathClass xc = PathClass::Removable;
        for (auto& o : ann.nodes)
          if (o.node == x) xc = o.cls;
        if (xc == PathClass::Removable || xc == PathClass::Start) continue;
      }
      m = tn.node;
      consumer = x;
      break;
    }
    if (m) {
      std::string what = "permute " + std::string(rule_name(m->app.rule)) + " [" +
                         m->conclusion.str() + "] below " +
                         rule_name(consumer->app.rule) + " [" +
                         consumer->conclusion.str() + "]";
      try {
        root = permute_pair(root, m, consumer, lc);
        if (trace) trace->step(what, root);
      } catch (const NoPermutationCase&) {
        // cross-part contraction: sink the blocking application instead
        const ProofNode* blocker = consumer;
        const ProofNode* below = parent_of(root, blocker);
        if (!below) throw;
        root = permute_pair(root, blocker, below, lc);
        if (trace) trace->step("sink blocked application", root);
      }
      continue;
    }
    // property (**): natural-1 applications above natural-2 ones
    bool moved = false;
    for (auto& tn : ann.nodes) {
      if (tn.cls != PathClass::Natural2) continue;
      const ProofNode* x = path_consumer(ann, t, tn.node, root);
      if (!x || x == t) continue;
      PathClass xc = PathClass::Removable;
      for (auto& o : ann.nodes)
        if (o.node == x) xc = o.cls;
      if (xc != PathClass::Natural1) continue;
      root = permute_pair(root, tn.node, x, lc);
      if (trace) trace->step("sort natural-2 below natural-1", root);
      moved = true;
      break;
    }
    if (moved) continue;
    // finalization: ew deletion or environment-K reduction
    if (ann.has_ew_start) {
      root = finalize_nonplain(root, t, ann, lc, true);
      if (trace) trace->step("delete target with an ew start", root);
      continue;
    }
    if (ann.has_blackr1_start) {
      root = finalize_nonplain(root, t, ann, lc, false);
      if (trace) trace->step("reduce target to the environment-K form", root);
      continue;
    }
    // plain case: after (*) and (**) the shape must be standard already
    if (!is_standard(root, t))
      throw NoPermutationCase("standardize: plain target failed to normalize");
  }
}

}  // namespace gr
