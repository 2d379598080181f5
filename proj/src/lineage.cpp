#include "gr/lineage.hpp"

#include <algorithm>
#include <cassert>

namespace gr {

namespace {

struct SrcF {
  Formula f;
  bool has_src = false;
  Occ src;  // in the stated premises (forward) / stated conclusion (backward)
  int prem = -1;
};

struct SrcC {
  ComponentId id = 0;
  SeqKind kind = SeqKind::Arrow;
  std::vector<SrcF> ante, succ;
  std::vector<std::pair<int, int>> parents;  // (premise, comp) / (0, CP comp)
  bool fresh = false;
};

SrcF tagf(const Formula& f, int prem, int comp, Side side, int pos) {
  return SrcF{f, true, Occ{comp, side, pos}, prem};
}

std::vector<SrcC> tag_identity(const Hyper& h, int prem) {
  std::vector<SrcC> out;
  for (size_t c = 0; c < h.comps.size(); c++) {
    SrcC sc;
    sc.id = h.comps[c].id;
    sc.kind = h.comps[c].seq.kind;
    for (size_t i = 0; i < h.comps[c].seq.ante.size(); i++)
      sc.ante.push_back(tagf(h.comps[c].seq.ante[i], prem, c, Side::Ante, i));
    for (size_t i = 0; i < h.comps[c].seq.succ.size(); i++)
      sc.succ.push_back(tagf(h.comps[c].seq.succ[i], prem, c, Side::Succ, i));
    sc.parents = {{prem, static_cast<int>(c)}};
    out.push_back(std::move(sc));
  }
  return out;
}

Hyper strip(const std::vector<SrcC>& v) {
  Hyper h;
  for (auto& sc : v) {
    Component c;
    c.id = sc.id;
    c.seq.kind = sc.kind;
    for (auto& f : sc.ante) c.seq.ante.push_back(f.f);
    for (auto& f : sc.succ) c.seq.succ.push_back(f.f);
    h.comps.push_back(std::move(c));
  }
  return h;
}

// forward: canonical conclusion of premise-indexed rules, tagged with premise
// sources. Assumes the node already passed check_rule.
std::vector<SrcC> tagged_forward(const ProofNode& n) {
  const RuleApp& a = n.app;
  const Hyper& p0 = n.premises[0]->conclusion;
  switch (a.rule) {
    case RuleId::AndR:
    case RuleId::Cut: {
      const Hyper& p1 = n.premises[1]->conclusion;
      bool cut = a.rule == RuleId::Cut;
      auto t0 = tag_identity(p0, 0);
      auto t1 = tag_identity(p1, 1);
      SrcC merged;
      merged.id = fresh_component_id();
      merged.kind = p0.comps[a.lcomp].seq.kind;
      merged.parents = {{0, a.lcomp}, {1, a.rcomp}};
      auto& lc = t0[a.lcomp];
      auto& rc = t1[a.rcomp];
      merged.ante = lc.ante;
      for (size_t i = 0; i < rc.ante.size(); i++)
        if (!(cut && static_cast<int>(i) == a.rpos)) merged.ante.push_back(rc.ante[i]);
      for (size_t i = 0; i < lc.succ.size(); i++)
        if (static_cast<int>(i) != a.lpos) merged.succ.push_back(lc.succ[i]);
      for (size_t i = 0; i < rc.succ.size(); i++)
        if (!(!cut && static_cast<int>(i) == a.rpos)) merged.succ.push_back(rc.succ[i]);
      if (!cut) {
        SrcF pr;
        pr.f = Formula::conj(lc.succ[a.lpos].f, rc.succ[a.rpos].f);
        merged.succ.push_back(pr);
      }
      std::vector<SrcC> out;
      for (size_t c = 0; c < t0.size(); c++)
        if (static_cast<int>(c) != a.lcomp) out.push_back(t0[c]);
      for (size_t c = 0; c < t1.size(); c++)
        if (static_cast<int>(c) != a.rcomp) out.push_back(t1[c]);
      out.push_back(std::move(merged));
      return out;
    }
    case RuleId::Merge: {
      auto t = tag_identity(p0, 0);
      int lo = std::min(a.comp, a.comp2), hi = std::max(a.comp, a.comp2);
      SrcC merged;
      merged.id = p0.comps[a.comp].id;
      merged.kind = t[a.comp].kind;
      merged.parents = {{0, a.comp}, {0, a.comp2}};
      merged.ante = t[a.comp].ante;
      merged.ante.insert(merged.ante.end(), t[a.comp2].ante.begin(), t[a.comp2].ante.end());
      merged.succ = t[a.comp].succ;
      merged.succ.insert(merged.succ.end(), t[a.comp2].succ.begin(), t[a.comp2].succ.end());
      t[lo] = std::move(merged);
      t.erase(t.begin() + hi);
      return t;
    }
    case RuleId::BotRule: {
      auto t = tag_identity(p0, 0);
      t.erase(t.begin() + a.comp);
      return t;
    }
    case RuleId::K:
    case RuleId::Four:
    case RuleId::KBlack:
    case RuleId::FourBlack: {
      auto t = tag_identity(p0, 0);
      Formula aux = p0.comps[a.comp].seq.ante[a.pos];
      Formula nf = (a.rule == RuleId::K)        ? Formula::boxg(aux)
                   : (a.rule == RuleId::KBlack) ? Formula::boxr(aux)
                                                : aux;
      t[a.comp].ante.erase(t[a.comp].ante.begin() + a.pos);
      SrcC nc;
      nc.id = fresh_component_id();
      nc.kind = SeqKind::Arrow;
      SrcF f;
      f.f = nf;
      nc.ante.push_back(f);
      nc.fresh = true;
      t.insert(t.begin() + a.comp, std::move(nc));
      return t;
    }
    case RuleId::BoxRight:
    case RuleId::BlackR1: {
      auto t = tag_identity(p0, 0);
      Formula b = p0.comps[a.comp].seq.succ[0];
      SrcC rc;
      rc.id = fresh_component_id();
      rc.kind = SeqKind::Arrow;
      SrcF f;
      f.f = a.rule == RuleId::BoxRight ? Formula::boxg(b) : Formula::boxr(b);
      rc.succ.push_back(f);
      rc.fresh = true;
      t[a.comp] = std::move(rc);
      if (a.rule == RuleId::BlackR1) {
        SrcC ec;
        ec.id = fresh_component_id();
        ec.kind = SeqKind::DoubleArrow;
        ec.fresh = true;
        t.insert(t.begin() + a.comp + 1, std::move(ec));
      }
      return t;
    }
    case RuleId::BlackL: {
      auto t = tag_identity(p0, 0);
      SrcF f;
      f.f = Formula::boxr(p0.comps[a.comp].seq.ante[0]);
      t[a.comp].ante[0] = f;
      return t;
    }
    case RuleId::BlackR2: {
      auto t = tag_identity(p0, 0);
      SrcF f;
      f.f = Formula::boxr(p0.comps[a.comp].seq.succ[0]);
      t[a.comp].succ[0] = f;
      return t;
    }
    case RuleId::ToDouble:
    case RuleId::ToArrow: {
      auto t = tag_identity(p0, 0);
      t[0].kind = a.rule == RuleId::ToDouble ? SeqKind::DoubleArrow : SeqKind::Arrow;
      t[0].fresh = a.rule == RuleId::ToDouble;
      return t;
    }
    default: assert(false && "not a premise-indexed rule"); return {};
  }
}

// backward: canonical premise of conclusion-indexed rules, tagged with
// conclusion sources (prem field unused, set to 0).
std::vector<SrcC> tagged_backward(const ProofNode& n) {
  const RuleApp& a = n.app;
  const Hyper& cc = n.conclusion;
  auto t = tag_identity(cc, 0);
  switch (a.rule) {
    case RuleId::AndL1:
    case RuleId::AndL2: {
      Formula f = cc.comps[a.comp].seq.ante[a.pos];
      SrcF nf;
      nf.f = a.rule == RuleId::AndL1 ? f.left() : f.right();
      t[a.comp].ante[a.pos] = nf;
      return t;
    }
    case RuleId::NegL: {
      Formula f = cc.comps[a.comp].seq.ante[a.pos];
      t[a.comp].ante.erase(t[a.comp].ante.begin() + a.pos);
      SrcF nf;
      nf.f = f.child();
      t[a.comp].succ.push_back(nf);
      return t;
    }
    case RuleId::NegR: {
      Formula f = cc.comps[a.comp].seq.succ[a.pos];
      t[a.comp].succ.erase(t[a.comp].succ.begin() + a.pos);
      SrcF nf;
      nf.f = f.child();
      t[a.comp].ante.push_back(nf);
      return t;
    }
    case RuleId::ContrL: {
      SrcF extra = t[a.comp].ante[a.pos];  // same conclusion source, twice
      t[a.comp].ante.push_back(extra);
      return t;
    }
    case RuleId::ContrR: {
      SrcF extra = t[a.comp].succ[a.pos];
      t[a.comp].succ.push_back(extra);
      return t;
    }
    case RuleId::WeakL: {
      t[a.comp].ante.erase(t[a.comp].ante.begin() + a.pos);
      return t;
    }
    case RuleId::WeakR: {
      t[a.comp].succ.erase(t[a.comp].succ.begin() + a.pos);
      return t;
    }
    case RuleId::EW: {
      t.erase(t.begin() + a.comp);
      return t;
    }
    case RuleId::Split: {
      int lo = std::min(a.comp, a.comp2), hi = std::max(a.comp, a.comp2);
      SrcC merged;
      merged.id = cc.comps[lo].id;
      merged.kind = t[a.comp].kind;
      merged.parents = {};
      merged.ante = t[a.comp].ante;
      merged.ante.insert(merged.ante.end(), t[a.comp2].ante.begin(), t[a.comp2].ante.end());
      merged.succ = t[a.comp].succ;
      merged.succ.insert(merged.succ.end(), t[a.comp2].succ.begin(), t[a.comp2].succ.end());
      t[lo] = std::move(merged);
      t.erase(t.begin() + hi);
      return t;
    }
    default: assert(false && "not a conclusion-indexed rule"); return {};
  }
}

bool conclusion_indexed(RuleId r) {
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

// aligns two multiset-equal hypersequents: from-occ -> to-occ
struct Align {
  std::vector<int> comp;                                   // from comp -> to comp
  std::vector<std::array<std::vector<int>, 2>> pos;        // per from comp/side
};

Align align(const Hyper& from, const Hyper& to) {
  Align al;
  al.comp.assign(from.size(), -1);
  al.pos.resize(from.size());
  std::vector<bool> used(to.size(), false);
  for (size_t i = 0; i < from.size(); i++) {
    for (size_t j = 0; j < to.size(); j++) {
      if (used[j]) continue;
      if (seq_cmp(from[i], to[j]) == 0) {
        al.comp[i] = static_cast<int>(j);
        used[j] = true;
        break;
      }
    }
    if (al.comp[i] < 0) continue;  // caller must have hs_equal inputs
    int j = al.comp[i];
    for (int side = 0; side < 2; side++) {
      const auto& fv = side == 0 ? from[i].ante : from[i].succ;
      const auto& tv = side == 0 ? to[j].ante : to[j].succ;
      std::vector<bool> tused(tv.size(), false);
      al.pos[i][side].assign(fv.size(), -1);
      for (size_t x = 0; x < fv.size(); x++)
        for (size_t y = 0; y < tv.size(); y++) {
          if (tused[y] || !(fv[x] == tv[y])) continue;
          al.pos[i][side][x] = static_cast<int>(y);
          tused[y] = true;
          break;
        }
    }
  }
  return al;
}

NodeLineage compute_lineage(const ProofNode& n) {
  NodeLineage L;
  size_t nc = n.conclusion.size();
  L.occ.resize(nc);
  L.comp.resize(nc);
  L.fresh_turnstile.assign(nc, false);
  for (size_t c = 0; c < nc; c++) {
    L.occ[c][0].resize(n.conclusion[c].ante.size());
    L.occ[c][1].resize(n.conclusion[c].succ.size());
  }
  if (n.premises.empty()) {
    for (size_t c = 0; c < nc; c++) L.fresh_turnstile[c] = true;
    return L;
  }
  if (conclusion_indexed(n.app.rule)) {
    auto cp = tagged_backward(n);
    Hyper cph = strip(cp);
    Align al = align(cph, n.premises[0]->conclusion);
    // conclusion comps: parents via where their content lives in CP
    std::vector<std::vector<std::pair<int, int>>> cparents(nc);
    for (size_t c = 0; c < cp.size(); c++) {
      int pc = al.comp[c];
      if (pc < 0) continue;
      // which conclusion comp does CP comp c derive from: its id matches
      for (size_t k = 0; k < nc; k++)
        if (n.conclusion.comps[k].id == cp[c].id) cparents[k].push_back({0, pc});
      for (int side = 0; side < 2; side++) {
        auto& fv = side == 0 ? cp[c].ante : cp[c].succ;
        for (size_t x = 0; x < fv.size(); x++) {
          if (!fv[x].has_src) continue;
          int py = al.pos[c][side][x];
          if (py < 0) continue;
          const Occ& src = fv[x].src;
          auto& slot = L.occ[src.comp][src.side == Side::Ante ? 0 : 1][src.pos];
          slot.push_back({0, Occ{al.comp[c], side == 0 ? Side::Ante : Side::Succ, py}});
        }
      }
    }
    // special case Split: both conclusion comps map to the merged CP comp
    if (n.app.rule == RuleId::Split) {
      int lo = std::min(n.app.comp, n.app.comp2);
      int pc = al.comp[lo];
      cparents[n.app.comp] = {{0, pc}};
      cparents[n.app.comp2] = {{0, pc}};
    }
    if (n.app.rule == RuleId::EW) L.fresh_turnstile[n.app.comp] = true;
    for (size_t c = 0; c < nc; c++) L.comp[c] = cparents[c];
    return L;
  }
  // premise-indexed
  auto cc = tagged_forward(n);
  Hyper cch = strip(cc);
  Align al = align(n.conclusion, cch);
  for (size_t c = 0; c < nc; c++) {
    int j = al.comp[c];
    if (j < 0) continue;
    L.comp[c] = cc[j].parents;
    L.fresh_turnstile[c] = cc[j].fresh;
    for (int side = 0; side < 2; side++) {
      auto& fv = side == 0 ? n.conclusion[c].ante : n.conclusion[c].succ;
      for (size_t x = 0; x < fv.size(); x++) {
        int y = al.pos[c][side][x];
        if (y < 0) continue;
        const SrcF& sf = side == 0 ? cc[j].ante[y] : cc[j].succ[y];
        if (sf.has_src) L.occ[c][side][x].push_back({sf.prem, sf.src});
      }
    }
  }
  return L;
}

}  // namespace

const NodeLineage& LineageCache::get(const ProofNode* n) {
  auto it = cache_.find(n);
  if (it != cache_.end()) return it->second;
  return cache_.emplace(n, compute_lineage(*n)).first->second;
}

std::vector<std::pair<int, Occ>> occ_parents(const ProofNode& n, const Occ& o,
                                             LineageCache& lc) {
  const NodeLineage& L = lc.get(&n);
  return L.occ.at(o.comp)[o.side == Side::Ante ? 0 : 1].at(o.pos);
}

std::vector<std::pair<int, int>> comp_parents(const ProofNode& n, int c, LineageCache& lc) {
  return lc.get(&n).comp.at(c);
}

bool turnstile_introduced(const ProofNode& n, int c, LineageCache& lc) {
  return lc.get(&n).fresh_turnstile.at(c);
}

static void intro_walk(const ProofNode* n, const Occ& o, LineageCache& lc,
                       std::set<std::tuple<const ProofNode*, int, int, int>>& seen,
                       std::vector<IntroSite>& out) {
  auto key = std::make_tuple(n, o.comp, o.side == Side::Ante ? 0 : 1, o.pos);
  if (seen.count(key)) return;
  seen.insert(key);
  auto ps = occ_parents(*n, o, lc);
  if (ps.empty()) {
    out.push_back({n, o});
    return;
  }
  for (auto& [pi, po] : ps) intro_walk(n->premises[pi].get(), po, lc, seen, out);
}

std::vector<IntroSite> find_introducers(const ProofNode* n, const Occ& o, LineageCache& lc) {
  std::set<std::tuple<const ProofNode*, int, int, int>> seen;
  std::vector<IntroSite> out;
  intro_walk(n, o, lc, seen, out);
  return out;
}

}  // namespace gr
