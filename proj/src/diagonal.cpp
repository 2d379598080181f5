#include "gr/diagonal.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace gr {

namespace {

ProofPtr owning_ptr(const ProofPtr& root, const ProofNode* n) {
  if (root.get() == n) return root;
  ProofPtr found;
  std::function<void(const ProofPtr&)> go = [&](const ProofPtr& cur) {
    if (found) return;
    for (auto& q : cur->premises) {
      if (q.get() == n) {
        found = q;
        return;
      }
      go(q);
    }
  };
  go(root);
  return found;
}

const ProofNode* parent_node(const ProofPtr& root, const ProofNode* n) {
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

// conclusion component of a K-type node holding the ==> sequent it acted in
int k_sigma_comp(const ProofNode* k, LineageCache& lc) {
  for (size_t c = 0; c < k->conclusion.size(); c++) {
    auto ps = comp_parents(*k, static_cast<int>(c), lc);
    if (ps.size() == 1 && ps[0].second == k->app.comp &&
        k->conclusion[c].kind == SeqKind::DoubleArrow)
      return static_cast<int>(c);
  }
  return -1;
}

// conclusion component of a K-type node holding the new `box A -->` product
int k_product_comp(const ProofNode* k, LineageCache& lc) {
  for (size_t c = 0; c < k->conclusion.size(); c++)
    if (comp_parents(*k, static_cast<int>(c), lc).empty() &&
        k->conclusion[c].kind == SeqKind::Arrow)
      return static_cast<int>(c);
  return -1;
}

// follows a component downward from `from` to its consumer chain; returns the
// node that consumes it via BoxRight/BlackR1 together with nothing else
const ProofNode* find_M(const ProofPtr& root, const ProofNode* from, int comp,
                        LineageCache& lc) {
  const ProofNode* cur = from;
  int c = comp;
  while (true) {
    const ProofNode* par = parent_node(root, cur);
    if (!par) return nullptr;
    int pi = -1;
    for (size_t i = 0; i < par->premises.size(); i++)
      if (par->premises[i].get() == cur) pi = static_cast<int>(i);
    // locate the conclusion comp of par fed by (pi, c)
    int next = -1;
    for (size_t cc = 0; cc < par->conclusion.size(); cc++)
      for (auto& [qi, qc] : comp_parents(*par, static_cast<int>(cc), lc))
        if (qi == pi && qc == c) next = static_cast<int>(cc);
    if (next < 0) {
      // consumed: the only legal consumers here are the diagonal-introducing
      // rules (the =>-rule is impossible beside the [g]B --> component)
      if ((par->app.rule == RuleId::BoxRight || par->app.rule == RuleId::BlackR1) &&
          par->app.comp == c)
        return par;
      if (par->app.rule == RuleId::ToArrow)
        throw StructuralViolation(
            "diagonal: the ==> component is consumed by the -->-rule");
      throw StructuralViolation("diagonal: the ==> component vanished unexpectedly");
    }
    cur = par;
    c = next;
  }
}

std::vector<Formula> nabla_of(const ProofNode* target) {
  std::vector<Formula> out;
  std::vector<int> prods;
  switch (target->app.rule) {
    case RuleId::BoxRight:
    case RuleId::BlackL:
    case RuleId::BlackR2: prods = {target->app.comp}; break;
    case RuleId::BlackR1: prods = {target->app.comp, target->app.comp + 1}; break;
    default: break;
  }
  for (size_t c = 0; c < target->conclusion.size(); c++) {
    if (std::find(prods.begin(), prods.end(), static_cast<int>(c)) != prods.end())
      continue;
    out.push_back(target->conclusion[c].ante[0]);
  }
  return out;
}

struct DiagEngine {
  ProofPtr premise_sub;  // the subproof above I0's premise
  Formula B;             // diagonal base
  std::vector<Formula> nabla;  // I0's nabla-Lambda formulas
  std::vector<DiagonalLeg> legs;
  std::vector<ProofPtr> leg_M;  // owning pointers
  TraceSink* trace = nullptr;
  size_t cap = 16;
  std::map<uint32_t, ProofPtr> memo;  // R fragments per active-leg set

  Hyper r_target(uint32_t S) {
    Hyper h;
    for (auto& f : nabla) {
      Sequent s;
      s.kind = SeqKind::Arrow;
      s.ante.push_back(f);
      h.comps.push_back({fresh_component_id(), s});
    }
    Sequent t;
    t.kind = SeqKind::DoubleArrow;
    for (size_t p = 0; p < legs.size(); p++)
      if (S & (1u << p)) t.ante.push_back(Formula::boxg(legs[p].C));
    t.succ.push_back(B);
    h.comps.push_back({fresh_component_id(), t});
    return h;
  }

  // pull nabla-shaped extras out of the ==> component and conform to target
  ProofPtr settle(ProofPtr q, uint32_t S) {
    Hyper target = r_target(S);
    const Sequent& tseq = target.comps.back().seq;
    // find the ==> component carrying B in the succedent
    int tc = -1;
    for (size_t c = 0; c < q->conclusion.size(); c++)
      if (q->conclusion[c].kind == SeqKind::DoubleArrow &&
          find_in(q->conclusion[c].succ, B) >= 0)
        tc = static_cast<int>(c);
    if (tc < 0) throw StructuralViolation("diagonal: lost the => B component");
    ComponentId tid = q->conclusion.comps[tc].id;
    // contract duplicates down to: tseq content plus one copy of each extra
    std::map<Formula, int, FormulaLess> want;
    for (auto& f : tseq.ante) want[f]++;
    Sequent mid;
    mid.kind = SeqKind::DoubleArrow;
    std::map<Formula, int, FormulaLess> seen;
    for (auto& f : q->conclusion[tc].ante) {
      seen[f]++;
      int keep = want.count(f) ? want[f] : 1;  // extras: one copy
      if (seen[f] <= keep) mid.ante.push_back(f);
    }
    for (auto& f : q->conclusion[tc].succ) {
      if (f == B && !mid.succ.empty()) continue;  // single B
      if (f == B) mid.succ.push_back(f);
    }
    if (mid.succ.empty()) mid.succ.push_back(B);
    q = b_adjust_comp(std::move(q), tid, mid);
    // extract extras by 4 / 4#
    while (true) {
      int c = comp_of_id(q->conclusion, tid);
      int pos = -1;
      Formula extra;
      std::map<Formula, int, FormulaLess> have;
      for (auto& f : q->conclusion[c].ante) have[f]++;
      for (auto& [f, n] : have) {
        int w = want.count(f) ? want[f] : 0;
        if (n > w) {
          if (f.kind() != FKind::BoxG && f.kind() != FKind::BoxR)
            throw StructuralViolation("diagonal: non-modal extra in the fragment end");
          extra = f;
          pos = find_in(q->conclusion[c].ante, f);
          break;
        }
      }
      if (pos < 0) break;
      q = b_modal(std::move(q), extra.kind() == FKind::BoxG ? RuleId::Four : RuleId::FourBlack,
                  c, pos);
    }
    return conform(std::move(q), target);
  }

  ProofPtr R_build(uint32_t S) {
    auto it = memo.find(S);
    if (it != memo.end()) return it->second;
    LineageCache lc;
    ReplayCtx ctx;
    ctx.lineage = &lc;
    for (size_t i = 0; i < legs.size(); i++) {
      TopRepl tr = q_build(i, S);
      ctx.tops[legs[i].M] = std::move(tr);
    }
    ReplayRes res = replay(premise_sub, ctx);
    ProofPtr out = settle(res.proof, S);
    if (trace) trace->step("diagonal fragment rebuilt (legs=" + std::to_string(S) + ")", out);
    memo[S] = out;
    return out;
  }

  // replacement proof for M_i's conclusion with the tracked [g]B replaced by
  // the formulas of the active set S
  TopRepl q_build(size_t i, uint32_t S) {
    const DiagonalLeg& leg = legs[i];
    LineageCache lc;
    // where the tracked [g]B occurrence sits in M_i's conclusion
    Occ bocc = leg_b_occ(i, lc);
    std::vector<Formula> vec;
    for (size_t p = 0; p < legs.size(); p++)
      if (S & (1u << p)) vec.push_back(Formula::boxg(legs[p].C));
    Hyper target = leg.M->conclusion;
    {
      auto& v = target.comps[bocc.comp].seq.ante;
      v.erase(v.begin() + bocc.pos);
      for (auto& f : vec) v.push_back(f);
    }
    ProofPtr q;
    if (S & (1u << i)) {
      // Lemma 3 seed, padded to the target
      Formula C = leg.C;
      ProofPtr s = b_to_double(b_init(C));
      s = b_modal(s, RuleId::K, 0, 0);          // [g]C --> | ==> C
      s = b_weak_l(s, 1, Formula::boxg(C));     // [g]C --> | [g]C ==> C
      s = leg.M->app.rule == RuleId::BoxRight ? b_box_right(s, 1) : b_black_r1(s, 1);
      q = conform(std::move(s), target);
    } else {
      // Lemma 5: cut the extended fragment against L_i's premise subproof
      ProofPtr R = R_build(S | (1u << i));
      ProofPtr lp = owning_ptr(premise_sub, leg.L)->premises[0];
      int rcomp = static_cast<int>(R->conclusion.size()) - 1;
      int rpos = find_in(R->conclusion[rcomp].succ, B);
      ProofPtr cut = b_cut(R, lp, rcomp, rpos, leg.L->app.comp, leg.L->app.pos, B);
      // pull the companions (p != i) out as components via 4
      ComponentId mid = cut->conclusion.comps.back().id;
      std::vector<ComponentId> pulled;
      for (size_t p = 0; p < legs.size(); p++) {
        if (p == i || !(S & (1u << p))) continue;
        int c = comp_of_id(cut->conclusion, mid);
        int pos = find_in(cut->conclusion[c].ante, Formula::boxg(legs[p].C));
        if (pos < 0) throw StructuralViolation("diagonal: lost a companion formula");
        cut = b_modal(std::move(cut), RuleId::Four, c, pos);
        int pc = comp_of_id(cut->conclusion, mid) - 1;
        pulled.push_back(cut->conclusion.comps[pc].id);
      }
      // replay the interior of Q_i (from L_i's conclusion down through M_i)
      LineageCache lc2;
      ReplayCtx ctx;
      ctx.lineage = &lc2;
      TopRepl tr;
      tr.proof = cut;
      // L_i product component -> pulled companions; sigma component -> merged
      int prod = k_product_comp(leg.L, lc2);
      int sigma = k_sigma_comp(leg.L, lc2);
      if (prod < 0 || sigma < 0)
        throw StructuralViolation("diagonal: cannot align the K introducer");
      tr.comp_map[prod] = pulled;
      tr.comp_map[sigma] = {mid};
      // environment components of L_i map onto the ids surviving the cut
      for (size_t c = 0; c < leg.L->conclusion.size(); c++) {
        if (static_cast<int>(c) == prod || static_cast<int>(c) == sigma) continue;
        auto ps = comp_parents(*leg.L, static_cast<int>(c), lc2);
        if (ps.empty()) continue;
        ComponentId id = leg.L->premises[0]->conclusion.comps[ps[0].second].id;
        if (comp_of_id(cut->conclusion, id) >= 0) tr.comp_map[static_cast<int>(c)] = {id};
      }
      ctx.tops[leg.L] = std::move(tr);
      ProofPtr msub = owning_ptr(premise_sub, leg.M);
      ReplayRes res = replay(msub, ctx);
      q = conform(res.proof, append_nabla(target));
    }
    // build the component map for the outer replay
    TopRepl out;
    out.proof = q;
    std::vector<bool> used(q->conclusion.size(), false);
    for (size_t c = 0; c < leg.M->conclusion.size(); c++) {
      for (size_t x = 0; x < q->conclusion.size(); x++) {
        if (used[x]) continue;
        if (seq_cmp(q->conclusion[x], target.comps[c].seq) == 0) {
          out.comp_map[static_cast<int>(c)] = {q->conclusion.comps[x].id};
          used[x] = true;
          break;
        }
      }
    }
    return out;
  }

  Hyper append_nabla(const Hyper& base) {
    Hyper h = base;
    for (auto& f : nabla) {
      Sequent s;
      s.kind = SeqKind::Arrow;
      s.ante.push_back(f);
      h.comps.push_back({fresh_component_id(), s});
    }
    return h;
  }

  Occ leg_b_occ(size_t i, LineageCache& lc) {
    // the [g]B occurrence introduced by L_i, traced down to M_i's conclusion
    const ProofNode* cur = legs[i].L;
    int c = k_product_comp(cur, lc);
    Occ o{c, Side::Ante, 0};
    while (cur != legs[i].M) {
      const ProofNode* par = parent_node(premise_sub, cur);
      if (!par) throw StructuralViolation("diagonal: introducer lost its consumer");
      int pi = -1;
      for (size_t k = 0; k < par->premises.size(); k++)
        if (par->premises[k].get() == cur) pi = static_cast<int>(k);
      // find the occurrence in par's conclusion whose parents include (pi, o)
      Occ next{-1, Side::Ante, -1};
      for (size_t cc = 0; cc < par->conclusion.size(); cc++)
        for (size_t pos = 0; pos < par->conclusion[cc].ante.size(); pos++) {
          Occ cand{static_cast<int>(cc), Side::Ante, static_cast<int>(pos)};
          for (auto& [qi, qo] : occ_parents(*par, cand, lc))
            if (qi == pi && qo == o) next = cand;
        }
      if (next.comp < 0)
        throw StructuralViolation("diagonal: lost the introduced occurrence");
      cur = par;
      o = next;
    }
    return o;
  }
};

}  // namespace

DiagonalContext build_context(const ProofPtr& root, const ProofNode* I0, LineageCache& lc) {
  auto kind = is_standard(root, I0);
  bool ok = kind && (*kind == StandardFormKind::BoxR_Plain ||
                     *kind == StandardFormKind::BlackR1_Plain);
  if (!ok) throw NotStandard("build_context: target is not a plain standard [g]:r or [r]:r1");
  DiagonalContext ctx;
  ctx.target = I0;
  const ProofNode* prem = I0->premises[0].get();
  int comp = I0->app.comp;
  Formula boxb = prem->conclusion[comp].ante.at(0);
  ctx.B = boxb.child();
  Occ docc{comp, Side::Ante, find_in(prem->conclusion[comp].ante, boxb)};
  for (auto& site : find_introducers(prem, docc, lc)) {
    switch (site.node->app.rule) {
      case RuleId::WeakL: ctx.weak_intros.push_back(site.node); break;
      case RuleId::K: {
        DiagonalLeg leg;
        leg.L = site.node;
        leg.C = Formula();
        leg.M = nullptr;
        leg.N = nullptr;
        ctx.legs.push_back(leg);
        break;
      }
      default:
        throw StructuralViolation(
            std::string("diagonal: unexpected introducer ") +
            rule_name(site.node->app.rule) +
            " (reduce initial sequents first)");
    }
  }
  ProofPtr prem_ptr = I0->premises[0];
  for (auto& leg : ctx.legs) {
    int sigma = k_sigma_comp(leg.L, lc);
    if (sigma < 0) throw StructuralViolation("diagonal: introducer has no ==> component");
    leg.M = find_M(prem_ptr, leg.L, sigma, lc);
    if (!leg.M) throw StructuralViolation("diagonal: no [g]:r / [r]:r1 consumes the ==> component");
    const Sequent& ms = leg.M->premises[0]->conclusion[leg.M->app.comp];
    leg.C = ms.succ.at(0);
    // the lowest =>-rule below the introducer: walk the [g]B --> component
    const ProofNode* cur = leg.L;
    int c = k_product_comp(leg.L, lc);
    const ProofNode* lowest = nullptr;
    while (cur && c >= 0) {
      const ProofNode* par = parent_node(prem_ptr, cur);
      if (!par) break;
      int pi = -1;
      for (size_t k = 0; k < par->premises.size(); k++)
        if (par->premises[k].get() == cur) pi = static_cast<int>(k);
      int next = -1;
      for (size_t cc = 0; cc < par->conclusion.size(); cc++)
        for (auto& [qi, qc] : comp_parents(*par, static_cast<int>(cc), lc))
          if (qi == pi && qc == c) next = static_cast<int>(cc);
      if (par->app.rule == RuleId::ToDouble && next >= 0) lowest = par;
      cur = par;
      c = next;
    }
    leg.N = lowest;
  }
  return ctx;
}

ProofPtr substitute_Qi(const DiagonalContext& ctx, size_t i,
                       const std::vector<Formula>& repl) {
  if (i >= ctx.legs.size())
    throw StructuralViolation("substitute_Qi: leg index out of range");
  const DiagonalLeg& leg = ctx.legs[i];
  LineageCache lc;
  DiagEngine eng;
  eng.premise_sub = ctx.target->premises[0];
  eng.B = ctx.B;
  eng.nabla = nabla_of(ctx.target);
  eng.legs = ctx.legs;
  Occ bocc = eng.leg_b_occ(i, lc);
  Hyper target = leg.M->conclusion;
  auto& v = target.comps[bocc.comp].seq.ante;
  v.erase(v.begin() + bocc.pos);
  for (auto& f : repl) v.push_back(f);
  Formula C = leg.C;
  ProofPtr s = b_to_double(b_init(C));
  s = b_modal(s, RuleId::K, 0, 0);
  s = b_weak_l(s, 1, Formula::boxg(C));
  s = leg.M->app.rule == RuleId::BoxRight ? b_box_right(s, 1) : b_black_r1(s, 1);
  return conform(std::move(s), target);
}

ProofPtr eliminate_diagonal_premise(const ProofPtr& root, const ProofNode* I0,
                                    size_t cap, TraceSink* trace) {
  LineageCache lc;
  DiagonalContext ctx = build_context(root, I0, lc);
  ProofPtr prem = I0->premises[0];
  if (!ctx.weak_intros.empty()) {
    LineageCache rlc;
    ReplayCtx rctx;
    rctx.lineage = &rlc;
    for (auto* w : ctx.weak_intros) rctx.skip_weak.insert(w);
    ReplayRes res = replay(prem, rctx);
    prem = res.proof;
    // rebuild the context against the purified subproof
    RuleApp app = I0->app;
    // the diagonal occurrence may be gone entirely now
    int comp = -1;
    for (size_t c = 0; c < prem->conclusion.size(); c++)
      if (prem->conclusion[c].kind == SeqKind::DoubleArrow &&
          find_in(prem->conclusion[c].succ, ctx.B) >= 0)
        comp = static_cast<int>(c);
    if (comp < 0) throw StructuralViolation("diagonal: lost the target component");
    if (find_in(prem->conclusion[comp].ante, Formula::boxg(ctx.B)) < 0) {
      // all introducers were weakenings
      DiagEngine eng;
      eng.premise_sub = prem;
      eng.B = ctx.B;
      eng.nabla = nabla_of(I0);
      return eng.settle(prem, 0);
    }
    // re-run on a rebuilt target node
    ProofPtr stub = mk_node(I0->conclusion, app, {prem});
    LineageCache lc2;
    ctx = build_context(stub, stub.get(), lc2);
    ctx.target = stub.get();
    if (!ctx.weak_intros.empty())
      throw StructuralViolation("diagonal: purification left weakening introducers");
    DiagEngine eng;
    eng.premise_sub = prem;
    eng.B = ctx.B;
    eng.nabla = nabla_of(stub.get());
    eng.legs = ctx.legs;
    eng.trace = trace;
    eng.cap = cap;
    if (eng.legs.size() > cap)
      throw FuelExhausted("diagonal: too many introducers for the configured cap");
    return eng.R_build(0);
  }
  if (ctx.legs.empty()) {
    // no introducer other than weakenings; nothing to do beyond settling
    DiagEngine eng;
    eng.premise_sub = prem;
    eng.B = ctx.B;
    eng.nabla = nabla_of(I0);
    return eng.settle(prem, 0);
  }
  DiagEngine eng;
  eng.premise_sub = prem;
  eng.B = ctx.B;
  eng.nabla = nabla_of(I0);
  eng.legs = ctx.legs;
  eng.trace = trace;
  eng.cap = cap;
  if (eng.legs.size() > cap)
    throw FuelExhausted("diagonal: too many introducers for the configured cap");
  return eng.R_build(0);
}

ProofPtr eliminate_diagonal(const ProofPtr& root, const ProofNode* I0, size_t cap,
                            TraceSink* trace) {
  ProofPtr rl = eliminate_diagonal_premise(root, I0, cap, trace);
  // re-apply the target over the fragment: iw the diagonal back in, then the
  // rule, then pad to the original conclusion
  int tc = static_cast<int>(rl->conclusion.size()) - 1;
  ComponentId tid = rl->conclusion.comps[tc].id;
  Formula boxb = I0->premises[0]->conclusion[I0->app.comp].ante.at(0);
  ProofPtr q = b_weak_l(rl, tc, boxb);
  int at = comp_of_id(q->conclusion, tid);
  q = I0->app.rule == RuleId::BoxRight ? b_box_right(q, at) : b_black_r1(q, at);
  q = conform(std::move(q), I0->conclusion);
  return graft(root, I0, std::move(q));
}

}  // namespace gr
