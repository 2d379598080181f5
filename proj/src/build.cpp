#include "gr/build.hpp"

#include <algorithm>
#include <map>

namespace gr {

namespace {

ProofPtr node1(RuleId rule, RuleApp app, ProofPtr p, const Hyper* stated = nullptr) {
  app.rule = rule;
  Hyper concl = rule_conclusion(rule, app, {&p->conclusion}, stated);
  return mk_node(std::move(concl), std::move(app), {std::move(p)});
}

ProofPtr node2(RuleId rule, RuleApp app, ProofPtr l, ProofPtr r) {
  app.rule = rule;
  Hyper concl = rule_conclusion(rule, app, {&l->conclusion, &r->conclusion}, nullptr);
  return mk_node(std::move(concl), std::move(app), {std::move(l), std::move(r)});
}

// Conclusion-indexed rules need the conclusion up front; build it here and
// let rule_conclusion re-validate it against the premise.
ProofPtr node_c(RuleId rule, RuleApp app, ProofPtr p, Hyper concl) {
  app.rule = rule;
  Hyper out = rule_conclusion(rule, app, {&p->conclusion}, &concl);
  return mk_node(std::move(out), std::move(app), {std::move(p)});
}

}  // namespace

ProofPtr b_init(const Formula& a) {
  Sequent s;
  s.kind = SeqKind::Arrow;
  s.ante.push_back(a);
  s.succ.push_back(a);
  Hyper h = Hyper::of({s});
  RuleApp app;
  app.rule = RuleId::Init;
  rule_conclusion(RuleId::Init, app, {}, &h);
  return mk_node(std::move(h), app, {});
}

ProofPtr b_init_bot() {
  Sequent s;
  s.kind = SeqKind::Arrow;
  s.ante.push_back(Formula::bottom());
  Hyper h = Hyper::of({s});
  RuleApp app;
  app.rule = RuleId::InitBot;
  return mk_node(std::move(h), app, {});
}

ProofPtr b_and_l1(ProofPtr p, int comp, int pos, const Formula& right) {
  Hyper concl = p->conclusion;
  Formula a = concl.comps.at(comp).seq.ante.at(pos);
  concl.comps[comp].seq.ante[pos] = Formula::conj(a, right);
  RuleApp app;
  app.comp = comp;
  app.pos = pos;
  return node_c(RuleId::AndL1, app, std::move(p), std::move(concl));
}

ProofPtr b_and_l2(ProofPtr p, int comp, int pos, const Formula& left) {
  Hyper concl = p->conclusion;
  Formula b = concl.comps.at(comp).seq.ante.at(pos);
  concl.comps[comp].seq.ante[pos] = Formula::conj(left, b);
  RuleApp app;
  app.comp = comp;
  app.pos = pos;
  return node_c(RuleId::AndL2, app, std::move(p), std::move(concl));
}

ProofPtr b_and_r(ProofPtr l, ProofPtr r, int lcomp, int lpos, int rcomp, int rpos) {
  RuleApp app;
  app.lcomp = lcomp;
  app.lpos = lpos;
  app.rcomp = rcomp;
  app.rpos = rpos;
  // conclusion index fields are filled for the record
  app.comp = -1;
  return node2(RuleId::AndR, app, std::move(l), std::move(r));
}

ProofPtr b_neg_l(ProofPtr p, int comp, int succ_pos) {
  Hyper concl = p->conclusion;
  Formula a = concl.comps.at(comp).seq.succ.at(succ_pos);
  auto& s = concl.comps[comp].seq;
  s.succ.erase(s.succ.begin() + succ_pos);
  s.ante.insert(s.ante.begin(), Formula::neg(a));
  RuleApp app;
  app.comp = comp;
  app.pos = 0;
  return node_c(RuleId::NegL, app, std::move(p), std::move(concl));
}

ProofPtr b_neg_r(ProofPtr p, int comp, int ante_pos) {
  Hyper concl = p->conclusion;
  Formula a = concl.comps.at(comp).seq.ante.at(ante_pos);
  auto& s = concl.comps[comp].seq;
  s.ante.erase(s.ante.begin() + ante_pos);
  s.succ.push_back(Formula::neg(a));
  RuleApp app;
  app.comp = comp;
  app.pos = static_cast<int>(s.succ.size()) - 1;
  return node_c(RuleId::NegR, app, std::move(p), std::move(concl));
}

ProofPtr b_contr_l(ProofPtr p, int comp, int pos1, int pos2) {
  if (pos1 > pos2) std::swap(pos1, pos2);
  Hyper concl = p->conclusion;
  auto& s = concl.comps.at(comp).seq;
  if (s.ante.at(pos1) != s.ante.at(pos2)) throw CheckFail{{ErrCode::RuleMismatch, "ContrL: occurrences differ"}};
  s.ante.erase(s.ante.begin() + pos2);
  RuleApp app;
  app.comp = comp;
  app.pos = pos1;
  return node_c(RuleId::ContrL, app, std::move(p), std::move(concl));
}

ProofPtr b_contr_r(ProofPtr p, int comp, int pos1, int pos2) {
  if (pos1 > pos2) std::swap(pos1, pos2);
  Hyper concl = p->conclusion;
  auto& s = concl.comps.at(comp).seq;
  if (s.succ.at(pos1) != s.succ.at(pos2)) throw CheckFail{{ErrCode::RuleMismatch, "ContrR: occurrences differ"}};
  s.succ.erase(s.succ.begin() + pos2);
  RuleApp app;
  app.comp = comp;
  app.pos = pos1;
  return node_c(RuleId::ContrR, app, std::move(p), std::move(concl));
}

ProofPtr b_weak_l(ProofPtr p, int comp, const Formula& f) {
  Hyper concl = p->conclusion;
  auto& s = concl.comps.at(comp).seq;
  s.ante.insert(s.ante.begin(), f);
  RuleApp app;
  app.comp = comp;
  app.pos = 0;
  return node_c(RuleId::WeakL, app, std::move(p), std::move(concl));
}

ProofPtr b_weak_r(ProofPtr p, int comp, const Formula& f) {
  Hyper concl = p->conclusion;
  auto& s = concl.comps.at(comp).seq;
  s.succ.push_back(f);
  RuleApp app;
  app.comp = comp;
  app.pos = static_cast<int>(s.succ.size()) - 1;
  return node_c(RuleId::WeakR, app, std::move(p), std::move(concl));
}

ProofPtr b_cut(ProofPtr l, ProofPtr r, int lcomp, int lpos, int rcomp, int rpos,
               const Formula& a) {
  RuleApp app;
  app.lcomp = lcomp;
  app.lpos = lpos;
  app.rcomp = rcomp;
  app.rpos = rpos;
  app.cut_formula = a;
  return node2(RuleId::Cut, app, std::move(l), std::move(r));
}

ProofPtr b_ew(ProofPtr p, Sequent s) {
  Hyper concl = p->conclusion;
  concl.comps.push_back({fresh_component_id(), std::move(s)});
  RuleApp app;
  app.comp = static_cast<int>(concl.comps.size()) - 1;
  return node_c(RuleId::EW, app, std::move(p), std::move(concl));
}

ProofPtr b_split(ProofPtr p, int comp, const std::vector<int>& ante_second,
                 const std::vector<int>& succ_second) {
  Hyper concl = p->conclusion;
  const Sequent& src = concl.comps.at(comp).seq;
  if (src.kind != SeqKind::Arrow)
    throw CheckFail{{ErrCode::KindMismatch, "Split: component must be a --> sequent"}};
  Sequent first, second;
  first.kind = second.kind = SeqKind::Arrow;
  auto pick = [](const std::vector<Formula>& v, const std::vector<int>& idx,
                 std::vector<Formula>& in, std::vector<Formula>& out) {
    std::vector<bool> take(v.size(), false);
    for (int i : idx) take.at(i) = true;
    for (size_t i = 0; i < v.size(); i++) (take[i] ? in : out).push_back(v[i]);
  };
  pick(src.ante, ante_second, second.ante, first.ante);
  pick(src.succ, succ_second, second.succ, first.succ);
  concl.comps[comp].seq = first;
  concl.comps.insert(concl.comps.begin() + comp + 1, {fresh_component_id(), second});
  RuleApp app;
  app.comp = comp;
  app.comp2 = comp + 1;
  return node_c(RuleId::Split, app, std::move(p), std::move(concl));
}

ProofPtr b_merge(ProofPtr p, int c1, int c2) {
  RuleApp app;
  app.comp = c1;
  app.comp2 = c2;
  return node1(RuleId::Merge, app, std::move(p));
}

ProofPtr b_bot_rule(ProofPtr p, int deleted, int witness) {
  RuleApp app;
  app.comp = deleted;
  app.comp2 = witness;
  return node1(RuleId::BotRule, app, std::move(p));
}

ProofPtr b_modal(ProofPtr p, RuleId which, int comp, int pos) {
  RuleApp app;
  app.comp = comp;
  app.pos = pos;
  return node1(which, app, std::move(p));
}

ProofPtr b_box_right(ProofPtr p, int comp) {
  RuleApp app;
  app.comp = comp;
  return node1(RuleId::BoxRight, app, std::move(p));
}

ProofPtr b_black_r1(ProofPtr p, int comp) {
  RuleApp app;
  app.comp = comp;
  return node1(RuleId::BlackR1, app, std::move(p));
}

ProofPtr b_black_l(ProofPtr p, int comp) {
  RuleApp app;
  app.comp = comp;
  return node1(RuleId::BlackL, app, std::move(p));
}

ProofPtr b_black_r2(ProofPtr p, int comp) {
  RuleApp app;
  app.comp = comp;
  return node1(RuleId::BlackR2, app, std::move(p));
}

ProofPtr b_to_double(ProofPtr p) { return node1(RuleId::ToDouble, {}, std::move(p)); }
ProofPtr b_to_arrow(ProofPtr p) { return node1(RuleId::ToArrow, {}, std::move(p)); }

// -- compound helpers ---------------------------------------------------------

int find_in(const std::vector<Formula>& v, const Formula& f) {
  for (size_t i = 0; i < v.size(); i++)
    if (v[i] == f) return static_cast<int>(i);
  return -1;
}

int comp_of_id(const Hyper& h, ComponentId id) {
  for (size_t i = 0; i < h.comps.size(); i++)
    if (h.comps[i].id == id) return static_cast<int>(i);
  return -1;
}

ProofPtr b_and_l_both(ProofPtr p, int comp, int posA, int posB) {
  Formula a = p->conclusion.comps.at(comp).seq.ante.at(posA);
  Formula b = p->conclusion.comps.at(comp).seq.ante.at(posB);
  ProofPtr q = b_and_l1(std::move(p), comp, posA, b);  // A -> A/\B
  // posB unchanged: only posA was replaced in place
  q = b_and_l2(std::move(q), comp, posB, a);           // B -> A/\B
  return b_contr_l(std::move(q), comp, posA, posB);
}

ProofPtr b_merge_fold(ProofPtr p, std::vector<int> comps) {
  if (comps.size() < 2) return p;
  // address by id so indices survive the merges
  std::vector<ComponentId> ids;
  for (int c : comps) ids.push_back(p->conclusion.comps.at(c).id);
  ComponentId target = ids[0];
  for (size_t i = 1; i < ids.size(); i++) {
    int t = comp_of_id(p->conclusion, target);
    int s = comp_of_id(p->conclusion, ids[i]);
    p = b_merge(std::move(p), t, s);
    target = p->conclusion.comps.at(std::min(t, s)).id;
  }
  return p;
}

ProofPtr b_adjust_comp(ProofPtr p, ComponentId id, const Sequent& target) {
  auto counts = [](const std::vector<Formula>& v) {
    std::map<Formula, int, FormulaLess> m;
    for (auto& f : v) m[f]++;
    return m;
  };
  for (bool ante : {true, false}) {
    int c = comp_of_id(p->conclusion, id);
    if (c < 0) throw CheckFail{{ErrCode::IndexOutOfRange, "b_adjust_comp: component vanished"}};
    auto cur = counts(ante ? p->conclusion.comps[c].seq.ante : p->conclusion.comps[c].seq.succ);
    auto want = counts(ante ? target.ante : target.succ);
    for (auto& [f, n] : cur) {
      int w = want.count(f) ? want[f] : 0;
      if (w == 0 && n > 0)
        throw CheckFail{{ErrCode::RuleMismatch, "b_adjust_comp: formula not in target"}};
      while (n > w) {
        c = comp_of_id(p->conclusion, id);
        auto& v = ante ? p->conclusion.comps[c].seq.ante : p->conclusion.comps[c].seq.succ;
        int i = find_in(v, f);
        int j = -1;
        for (size_t k = i + 1; k < v.size(); k++)
          if (v[k] == f) { j = static_cast<int>(k); break; }
        p = ante ? b_contr_l(std::move(p), c, i, j) : b_contr_r(std::move(p), c, i, j);
        n--;
      }
    }
    for (auto& [f, w] : want) {
      int n = cur.count(f) ? cur[f] : 0;
      while (n < w) {
        c = comp_of_id(p->conclusion, id);
        p = ante ? b_weak_l(std::move(p), c, f) : b_weak_r(std::move(p), c, f);
        n++;
      }
    }
  }
  return p;
}

ProofPtr conform(ProofPtr p, const Hyper& target,
                 const std::vector<std::pair<ComponentId, int>>& pins) {
  // Assign each current component to a target component: same kind, formula
  // support included in the target's. Exact matches claim their target first.
  size_t n = p->conclusion.size(), m = target.size();
  std::vector<int> assign(n, -1);
  std::vector<bool> claimed(m, false);
  auto support_ok = [](const Sequent& from, const Sequent& to) {
    if (from.kind != to.kind) return false;
    for (auto& f : from.ante)
      if (find_in(to.ante, f) < 0) return false;
    for (auto& f : from.succ)
      if (find_in(to.succ, f) < 0) return false;
    return true;
  };
  for (auto& [id, tj] : pins) {
    int i = comp_of_id(p->conclusion, id);
    if (i < 0 || tj < 0 || static_cast<size_t>(tj) >= m)
      throw CheckFail{{ErrCode::IndexOutOfRange, "conform: bad pin"}};
    assign[i] = tj;
    claimed[tj] = true;
  }
  for (size_t i = 0; i < n; i++)
    for (size_t j = 0; j < m; j++)
      if (assign[i] < 0 && !claimed[j] && seq_eq(p->conclusion[i], target[j])) {
        assign[i] = static_cast<int>(j);
        claimed[j] = true;
        break;
      }
  for (size_t i = 0; i < n; i++) {
    if (assign[i] >= 0) continue;
    // prefer an already-claimed exact twin (fold), then any compatible target
    for (size_t j = 0; j < m && assign[i] < 0; j++)
      if (seq_eq(p->conclusion[i], target[j])) assign[i] = static_cast<int>(j);
    for (size_t j = 0; j < m && assign[i] < 0; j++)
      if (support_ok(p->conclusion[i], target[j])) assign[i] = static_cast<int>(j);
    if (assign[i] < 0)
      throw CheckFail{{ErrCode::RuleMismatch,
                       "conform: component " + p->conclusion[i].str() +
                           " fits no target component of " + target.str()}};
  }
  // Fold groups, then adjust each to the exact target content.
  std::vector<ComponentId> group_id(m, 0);
  for (size_t j = 0; j < m; j++) {
    std::vector<int> group;
    for (size_t i = 0; i < n; i++)
      if (assign[i] == static_cast<int>(j)) group.push_back(static_cast<int>(i));
    if (group.empty()) continue;
    std::vector<ComponentId> ids;
    for (int g : group) ids.push_back(p->conclusion.comps[g].id);
    if (ids.size() > 1) {
      std::vector<int> cur;
      for (auto id : ids) cur.push_back(comp_of_id(p->conclusion, id));
      p = b_merge_fold(std::move(p), cur);
    }
    group_id[j] = ids[0];
  }
  for (size_t j = 0; j < m; j++) {
    if (group_id[j] == 0) {
      p = b_ew(std::move(p), target[j]);
      continue;
    }
    p = b_adjust_comp(std::move(p), group_id[j], target[j]);
  }
  if (!hs_equal(p->conclusion, target))
    throw CheckFail{{ErrCode::RuleMismatch, "conform: failed to reach target"}};
  return p;
}

ProofPtr substitute_proof(const ProofPtr& p,
                          const std::vector<std::pair<std::string, Formula>>& map) {
  std::vector<ProofPtr> prem;
  for (auto& q : p->premises) prem.push_back(substitute_proof(q, map));
  Hyper concl = p->conclusion;
  for (auto& c : concl.comps) {
    for (auto& f : c.seq.ante) f = substitute(f, map);
    for (auto& f : c.seq.succ) f = substitute(f, map);
  }
  RuleApp app = p->app;
  if (app.cut_formula) app.cut_formula = substitute(*app.cut_formula, map);
  return mk_node(std::move(concl), std::move(app), std::move(prem));
}

}  // namespace gr
