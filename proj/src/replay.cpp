#include "gr/replay.hpp"

#include <algorithm>
#include <cassert>

namespace gr {

namespace {

struct Engine {
  ReplayCtx& ctx;
  std::map<const ProofNode*, bool> dirty_memo;

  bool dirty(const ProofNode* n) {
    auto it = dirty_memo.find(n);
    if (it != dirty_memo.end()) return it->second;
    bool d = ctx.tops.count(n) || ctx.skip_weak.count(n) || ctx.skip_contr.count(n) ||
             ctx.skip_logic.count(n) || ctx.shrink_ew.count(n) || ctx.and_pick.count(n);
    if (!d)
      for (auto& q : n->premises)
        if (dirty(q.get())) d = true;
    dirty_memo[n] = d;
    return d;
  }

  LineageCache& lc() { return *ctx.lineage; }

  // ids present in h
  static bool has_id(const Hyper& h, ComponentId id) { return comp_of_id(h, id) >= 0; }

  // refresh duplicate ids in b relative to a (shared-subtree reuse)
  static ReplayRes dedupe(ReplayRes a, ReplayRes b) {
    std::map<ComponentId, ComponentId> ren;
    Hyper concl = b.proof->conclusion;
    bool changed = false;
    for (auto& c : concl.comps) {
      if (has_id(a.proof->conclusion, c.id)) {
        ComponentId fresh = fresh_component_id();
        ren[c.id] = fresh;
        c.id = fresh;
        changed = true;
      }
    }
    if (!changed) return b;
    b.proof = mk_node(std::move(concl), b.proof->app, b.proof->premises);
    for (auto& v : b.image)
      for (auto& id : v)
        if (ren.count(id)) id = ren[id];
    return b;
  }

  std::optional<std::pair<int, int>> locate(const ReplayRes& r,
                                            const std::vector<ComponentId>& img,
                                            Side side, const Formula& f,
                                            int skip_comp = -1, int skip_pos = -1) {
    for (ComponentId id : img) {
      int ci = comp_of_id(r.proof->conclusion, id);
      if (ci < 0) continue;
      const auto& v = side == Side::Ante ? r.proof->conclusion[ci].ante
                                         : r.proof->conclusion[ci].succ;
      for (size_t i = 0; i < v.size(); i++) {
        if (ci == skip_comp && static_cast<int>(i) == skip_pos) continue;
        if (v[i] == f) return std::make_pair(ci, static_cast<int>(i));
      }
    }
    return std::nullopt;
  }

  // merges every component of `r` whose id is in `img` into one; returns the
  // surviving id (or 0 when none exist)
  ComponentId fold(ReplayRes& r, const std::vector<ComponentId>& img) {
    std::vector<int> idx;
    for (ComponentId id : img) {
      int ci = comp_of_id(r.proof->conclusion, id);
      if (ci >= 0) idx.push_back(ci);
    }
    if (idx.empty()) return 0;
    if (idx.size() > 1) {
      ComponentId keep = r.proof->conclusion.comps[idx[0]].id;
      r.proof = b_merge_fold(r.proof, idx);
      return keep;
    }
    return r.proof->conclusion.comps[idx[0]].id;
  }

  // image of conclusion comp c of original node n, given children results
  std::vector<ComponentId> child_image(const ProofNode* n, int c,
                                       const std::vector<ReplayRes>& rs,
                                       const Hyper& new_concl) {
    std::vector<ComponentId> ids;
    for (auto& [pi, pc] : comp_parents(*n, c, lc()))
      for (ComponentId id : rs[pi].image[pc])
        if (has_id(new_concl, id) && std::find(ids.begin(), ids.end(), id) == ids.end())
          ids.push_back(id);
    return ids;
  }

  ReplayRes finish(const ProofNode* n, ProofPtr q, const std::vector<ReplayRes>& rs,
                   const std::map<int, ComponentId>& fresh_for) {
    ReplayRes out;
    out.proof = std::move(q);
    out.image.resize(n->conclusion.size());
    for (size_t c = 0; c < n->conclusion.size(); c++) {
      out.image[c] = child_image(n, static_cast<int>(c), rs, out.proof->conclusion);
      auto it = fresh_for.find(static_cast<int>(c));
      if (it != fresh_for.end() && has_id(out.proof->conclusion, it->second))
        out.image[c].push_back(it->second);
    }
    return out;
  }

  // conclusion comp of `n` that is freshly introduced with the given shape
  int fresh_concl_comp(const ProofNode* n, SeqKind kind, bool empty_only) {
    for (size_t c = 0; c < n->conclusion.size(); c++) {
      if (!comp_parents(*n, static_cast<int>(c), lc()).empty()) continue;
      const Sequent& s = n->conclusion[c];
      if (s.kind != kind) continue;
      if (empty_only && !s.empty_both()) continue;
      if (!empty_only && s.empty_both()) continue;
      return static_cast<int>(c);
    }
    return -1;
  }

  int premise_comp_of(const ProofNode* n, int concl_comp) {
    auto ps = comp_parents(*n, concl_comp, lc());
    if (ps.empty()) throw ReplayError("replay: conclusion component has no premise parent");
    return ps[0].second;
  }
};

struct Engine2 {
  ReplayCtx& ctx;
  std::map<const ProofNode*, bool> dirty_memo;
  Engine helpers{ctx};

  bool dirty(const ProofNode* n) { return helpers.dirty(n); }
  LineageCache& lc() { return *ctx.lineage; }

  ReplayRes identity(const ProofPtr& n) {
    ReplayRes r;
    r.proof = n;
    r.image.resize(n->conclusion.size());
    for (size_t c = 0; c < n->conclusion.size(); c++)
      r.image[c] = {n->conclusion.comps[c].id};
    return r;
  }

  ReplayRes run(const ProofPtr& np) {
    const ProofNode* n = np.get();
    auto topit = ctx.tops.find(n);
    if (topit != ctx.tops.end()) {
      ReplayRes r;
      r.proof = topit->second.proof;
      r.image.resize(n->conclusion.size());
      for (auto& [oc, ids] : topit->second.comp_map) r.image.at(oc) = ids;
      return r;
    }
    if (!dirty(n)) return identity(np);

    std::vector<ReplayRes> rs;
    for (auto& q : n->premises) rs.push_back(run(q));
    // id collisions from shared subtrees meeting at two-premise rules
    if (rs.size() == 2) rs[1] = Engine::dedupe(rs[0], rs[1]);

    const RuleApp& a = n->app;
    switch (a.rule) {
      case RuleId::Init:
      case RuleId::InitBot: return identity(np);

      case RuleId::AndL1:
      case RuleId::AndL2: {
        ProofPtr q = rs[0].proof;
        if (ctx.skip_logic.count(n)) {
          auto inj = ctx.inject_after_skip.find(n);
          if (inj != ctx.inject_after_skip.end()) {
            int pc = helpers.premise_comp_of(n, a.comp);
            for (ComponentId id : rs[0].image[pc]) {
              int ci = comp_of_id(q->conclusion, id);
              if (ci < 0) continue;
              q = b_weak_l(q, ci, inj->second);
              break;
            }
          }
        } else {
          Formula f = n->conclusion[a.comp].ante[a.pos];
          Formula aux = a.rule == RuleId::AndL1 ? f.left() : f.right();
          int pc = helpers.premise_comp_of(n, a.comp);
          auto hit = helpers.locate(rs[0], rs[0].image[pc], Side::Ante, aux);
          if (hit)
            q = a.rule == RuleId::AndL1 ? b_and_l1(q, hit->first, hit->second, f.right())
                                        : b_and_l2(q, hit->first, hit->second, f.left());
        }
        return helpers.finish(n, q, rs, {});
      }
      case RuleId::NegL:
      case RuleId::NegR: {
        ProofPtr q = rs[0].proof;
        if (!ctx.skip_logic.count(n)) {
          bool left = a.rule == RuleId::NegL;
          Formula f = left ? n->conclusion[a.comp].ante[a.pos]
                           : n->conclusion[a.comp].succ[a.pos];
          int pc = helpers.premise_comp_of(n, a.comp);
          auto hit = helpers.locate(rs[0], rs[0].image[pc],
                                    left ? Side::Succ : Side::Ante, f.child());
          if (hit) q = left ? b_neg_l(q, hit->first, hit->second)
                            : b_neg_r(q, hit->first, hit->second);
        }
        return helpers.finish(n, q, rs, {});
      }
      case RuleId::ContrL:
      case RuleId::ContrR: {
        ProofPtr q = rs[0].proof;
        if (!ctx.skip_contr.count(n)) {
          bool left = a.rule == RuleId::ContrL;
          Formula f = left ? n->conclusion[a.comp].ante[a.pos]
                           : n->conclusion[a.comp].succ[a.pos];
          int pc = helpers.premise_comp_of(n, a.comp);
          auto h1 = helpers.locate(rs[0], rs[0].image[pc],
                                   left ? Side::Ante : Side::Succ, f);
          if (h1) {
            auto h2 = helpers.locate(rs[0], {q->conclusion.comps[h1->first].id},
                                     left ? Side::Ante : Side::Succ, f, h1->first,
                                     h1->second);
            if (h2 && h2->first == h1->first)
              q = left ? b_contr_l(q, h1->first, h1->second, h2->second)
                       : b_contr_r(q, h1->first, h1->second, h2->second);
          }
        }
        return helpers.finish(n, q, rs, {});
      }
      case RuleId::WeakL:
      case RuleId::WeakR: {
        ProofPtr q = rs[0].proof;
        if (!ctx.skip_weak.count(n)) {
          bool left = a.rule == RuleId::WeakL;
          Formula f = left ? n->conclusion[a.comp].ante[a.pos]
                           : n->conclusion[a.comp].succ[a.pos];
          int pc = helpers.premise_comp_of(n, a.comp);
          for (ComponentId id : rs[0].image[pc]) {
            int ci = comp_of_id(q->conclusion, id);
            if (ci < 0) continue;
            q = left ? b_weak_l(q, ci, f) : b_weak_r(q, ci, f);
            break;
          }
        }
        return helpers.finish(n, q, rs, {});
      }
      case RuleId::EW: {
        Sequent added = n->conclusion[a.comp];
        auto sh = ctx.shrink_ew.find(n);
        if (sh != ctx.shrink_ew.end()) {
          std::vector<std::pair<Side, int>> cuts = sh->second;
          std::sort(cuts.begin(), cuts.end(),
                    [](auto& x, auto& y) { return x.second > y.second; });
          for (auto& [side, pos] : cuts) {
            auto& v = side == Side::Ante ? added.ante : added.succ;
            v.erase(v.begin() + pos);
          }
        }
        ProofPtr q = b_ew(rs[0].proof, std::move(added));
        ComponentId nid = q->conclusion.comps.back().id;
        return helpers.finish(n, q, rs, {{a.comp, nid}});
      }
      case RuleId::Split: {
        int pm = helpers.premise_comp_of(n, a.comp);
        ReplayRes r = rs[0];
        ComponentId fid = helpers.fold(r, r.image[pm]);
        if (fid == 0) return helpers.finish(n, r.proof, rs, {});
        int ci = comp_of_id(r.proof->conclusion, fid);
        // move the second component's content (where available) out
        const Sequent& want2 = n->conclusion[a.comp2];
        std::vector<int> a2, s2;
        {
          const Sequent& cur = r.proof->conclusion[ci];
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
        }
        ProofPtr q = b_split(r.proof, ci, a2, s2);
        ComponentId sid = q->conclusion.comps[ci + 1].id;
        std::vector<ReplayRes> rr = {r};
        ReplayRes out = helpers.finish(n, q, rr, {{a.comp2, sid}});
        // first part keeps the folded id; make sure a.comp maps to it
        out.image[a.comp] = {q->conclusion.comps[ci].id};
        return out;
      }
      case RuleId::Merge: {
        ReplayRes r = rs[0];
        std::vector<ComponentId> all = r.image[a.comp];
        for (ComponentId id : r.image[a.comp2]) all.push_back(id);
        helpers.fold(r, all);
        std::vector<ReplayRes> rr = {r};
        return helpers.finish(n, r.proof, rr, {});
      }
      case RuleId::BotRule: {
        ReplayRes r = rs[0];
        ProofPtr q = r.proof;
        for (ComponentId id : r.image[a.comp]) {
          int ci = comp_of_id(q->conclusion, id);
          if (ci < 0) continue;
          const Sequent& s = q->conclusion[ci];
          if (s.kind != SeqKind::Arrow || !s.empty_both()) continue;
          int witness = -1;
          for (size_t w = 0; w < q->conclusion.size(); w++)
            if (static_cast<int>(w) != ci && q->conclusion[w].kind == SeqKind::DoubleArrow)
              witness = static_cast<int>(w);
          if (witness < 0) continue;
          q = b_bot_rule(q, ci, witness);
        }
        std::vector<ReplayRes> rr = {r};
        rr[0].proof = q;
        return helpers.finish(n, q, rr, {});
      }
      case RuleId::K:
      case RuleId::Four:
      case RuleId::KBlack:
      case RuleId::FourBlack: {
        Formula aux = n->premises[0]->conclusion[a.comp].ante[a.pos];
        auto hit = helpers.locate(rs[0], rs[0].image[a.comp], Side::Ante, aux);
        ProofPtr q = rs[0].proof;
        std::map<int, ComponentId> fresh;
        if (hit) {
          q = b_modal(q, a.rule, hit->first, hit->second);
          ComponentId nid = q->conclusion.comps[hit->first].id;
          int nc = helpers.fresh_concl_comp(n, SeqKind::Arrow, false);
          if (nc >= 0) fresh[nc] = nid;
        }
        return helpers.finish(n, q, rs, fresh);
      }
      case RuleId::BoxRight:
      case RuleId::BlackR1:
      case RuleId::BlackL:
      case RuleId::BlackR2: {
        ReplayRes r = rs[0];
        ComponentId fid = helpers.fold(r, r.image[a.comp]);
        if (fid == 0) throw ReplayError("replay: diagonal-rule component dropped");
        ProofPtr q = r.proof;
        int ci = comp_of_id(q->conclusion, fid);
        const Sequent& want = n->premises[0]->conclusion[a.comp];
        if (!seq_eq(q->conclusion[ci], want)) {
          q = b_adjust_comp(q, fid, want);  // contracts duplicated additions
          ci = comp_of_id(q->conclusion, fid);
        }
        std::map<int, ComponentId> fresh;
        if (a.rule == RuleId::BoxRight || a.rule == RuleId::BlackR1) {
          q = a.rule == RuleId::BoxRight ? b_box_right(q, ci) : b_black_r1(q, ci);
          ComponentId pid = q->conclusion.comps[ci].id;
          int pc = helpers.fresh_concl_comp(n, SeqKind::Arrow, false);
          if (pc >= 0) fresh[pc] = pid;
          if (a.rule == RuleId::BlackR1) {
            ComponentId eid = q->conclusion.comps[ci + 1].id;
            int ec = helpers.fresh_concl_comp(n, SeqKind::DoubleArrow, true);
            if (ec >= 0) fresh[ec] = eid;
          }
        } else {
          q = a.rule == RuleId::BlackL ? b_black_l(q, ci) : b_black_r2(q, ci);
        }
        std::vector<ReplayRes> rr = {r};
        rr[0].proof = q;
        return helpers.finish(n, q, rr, fresh);
      }
      case RuleId::ToDouble:
      case RuleId::ToArrow: {
        ReplayRes r = rs[0];
        SeqKind want = a.rule == RuleId::ToDouble ? SeqKind::DoubleArrow : SeqKind::Arrow;
        // already flipped by a replacement: skip
        if (r.proof->conclusion.size() >= 1) {
          std::vector<ComponentId> all;
          for (auto& c : r.proof->conclusion.comps) all.push_back(c.id);
          bool flipped = !r.image[0].empty() && [&] {
            int ci = comp_of_id(r.proof->conclusion, r.image[0][0]);
            return ci >= 0 && r.proof->conclusion[ci].kind == want;
          }();
          if (flipped) {
            std::vector<ReplayRes> rr = {r};
            return helpers.finish(n, r.proof, rr, {});
          }
          helpers.fold(r, all);
        }
        if (r.proof->conclusion.size() != 1)
          throw ReplayError("replay: cannot make the premise of a turnstile rule a singleton");
        ProofPtr q = a.rule == RuleId::ToDouble ? b_to_double(r.proof) : b_to_arrow(r.proof);
        std::map<int, ComponentId> fresh = {{0, q->conclusion.comps[0].id}};
        std::vector<ReplayRes> rr = {r};
        rr[0].proof = q;
        return helpers.finish(n, q, rr, fresh);
      }
      case RuleId::AndR:
      case RuleId::Cut: {
        bool cut = a.rule == RuleId::Cut;
        auto pickit = ctx.and_pick.find(n);
        if (!cut && pickit != ctx.and_pick.end()) {
          int keep = pickit->second;
          ReplayRes out;
          out.proof = rs[keep].proof;
          out.image.resize(n->conclusion.size());
          for (size_t c = 0; c < n->conclusion.size(); c++) {
            for (auto& [pi, pc] : comp_parents(*n, static_cast<int>(c), lc()))
              if (pi == keep)
                for (ComponentId id : rs[keep].image[pc])
                  if (Engine::has_id(out.proof->conclusion, id))
                    out.image[c].push_back(id);
          }
          return out;
        }
        Formula la, ra;
        if (cut) {
          la = ra = *a.cut_formula;
        } else {
          la = n->premises[0]->conclusion[a.lcomp].succ[a.lpos];
          ra = n->premises[1]->conclusion[a.rcomp].succ[a.rpos];
        }
        auto lhit = helpers.locate(rs[0], rs[0].image[a.lcomp], Side::Succ, la);
        auto rhit = helpers.locate(rs[1], rs[1].image[a.rcomp],
                                   cut ? Side::Ante : Side::Succ, ra);
        if (!lhit || !rhit) {
          // one side lost its active occurrence: continue with that side alone
          int keep = !lhit ? 0 : 1;
          ReplayRes out;
          out.proof = rs[keep].proof;
          out.image.resize(n->conclusion.size());
          for (size_t c = 0; c < n->conclusion.size(); c++) {
            for (auto& [pi, pc] : comp_parents(*n, static_cast<int>(c), lc()))
              if (pi == keep)
                for (ComponentId id : rs[keep].image[pc])
                  if (Engine::has_id(out.proof->conclusion, id))
                    out.image[c].push_back(id);
          }
          return out;
        }
        ProofPtr q = cut ? b_cut(rs[0].proof, rs[1].proof, lhit->first, lhit->second,
                                 rhit->first, rhit->second, la)
                         : b_and_r(rs[0].proof, rs[1].proof, lhit->first, lhit->second,
                                   rhit->first, rhit->second);
        ComponentId mid = q->conclusion.comps.back().id;
        int mc = -1;
        for (size_t c = 0; c < n->conclusion.size(); c++)
          if (comp_parents(*n, static_cast<int>(c), lc()).size() == 2)
            mc = static_cast<int>(c);
        std::map<int, ComponentId> fresh;
        if (mc >= 0) fresh[mc] = mid;
        return helpers.finish(n, q, rs, fresh);
      }
    }
    throw ReplayError("replay: unhandled rule");
  }
};

}  // namespace

ReplayRes replay(const ProofPtr& n, ReplayCtx& ctx) {
  if (!ctx.lineage) throw ReplayError("replay: lineage cache required");
  Engine2 e{ctx};
  return e.run(n);
}

ProofPtr graft(const ProofPtr& root, const ProofNode* site, ProofPtr repl) {
  if (root.get() == site) {
    if (!hs_equal(root->conclusion, repl->conclusion))
      throw ReplayError("graft: replacement proves a different hypersequent");
    return repl;
  }
  bool touched = false;
  std::vector<ProofPtr> prem;
  for (auto& q : root->premises) {
    NodePath tmp;
    ProofPtr g = graft(q, site, repl);
    if (g != q) touched = true;
    prem.push_back(std::move(g));
    (void)tmp;
  }
  if (!touched) return root;
  return mk_node(root->conclusion, root->app, std::move(prem));
}

}  // namespace gr
