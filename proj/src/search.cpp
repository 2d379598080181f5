#include "gr/search.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace gr {

namespace {

// canonical key for loop checking / memoized failures
std::string hyper_key(const Hyper& h) {
  std::vector<std::string> parts;
  for (auto& c : h.comps) {
    std::vector<std::string> an, su;
    for (auto& f : c.seq.ante) an.push_back(f.str());
    for (auto& f : c.seq.succ) su.push_back(f.str());
    std::sort(an.begin(), an.end());
    std::sort(su.begin(), su.end());
    std::string s = c.seq.kind == SeqKind::Arrow ? "A:" : "D:";
    for (auto& x : an) s += x + ",";
    s += ">";
    for (auto& x : su) s += x + ",";
    parts.push_back(std::move(s));
  }
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (auto& p : parts) out += p + "|";
  return out;
}

constexpr int kMultCap = 3;  // contraction bound per formula and side

struct Searcher {
  SearchConfig cfg;
  // failure memo: key -> depth at which search failed (monotone: failing at
  // depth d implies failing at every d' <= d)
  std::map<std::string, size_t> failed;
  std::set<std::string> on_branch;

  bool over_cap(const std::vector<Formula>& v) {
    std::map<Formula, int, FormulaLess> cnt;
    for (auto& f : v)
      if (++cnt[f] > kMultCap) return true;
    return false;
  }

  std::optional<ProofPtr> prove(const Hyper& goal, size_t depth) {
    std::string key = hyper_key(goal);
    auto it = failed.find(key);
    if (it != failed.end() && it->second >= depth) return std::nullopt;
    if (cfg.loop_check && on_branch.count(key)) return std::nullopt;
    for (auto& c : goal.comps)
      if (over_cap(c.seq.ante) || over_cap(c.seq.succ)) return std::nullopt;

    // closed leaves first
    if (goal.size() == 1) {
      const Sequent& s = goal[0];
      if (s.kind == SeqKind::Arrow) {
        if (s.ante.size() == 1 && s.succ.size() == 1 && s.ante[0] == s.succ[0])
          return b_init(s.ante[0]);
        if (s.ante.size() == 1 && s.succ.empty() && s.ante[0].kind() == FKind::Bottom)
          return b_init_bot();
      }
    }
    if (depth == 0) return std::nullopt;
    if (cfg.loop_check) on_branch.insert(key);
    auto out = expand(goal, depth);
    if (cfg.loop_check) on_branch.erase(key);
    if (!out) {
      auto& best = failed[key];
      best = std::max(best, depth);
    }
    return out;
  }

  // try rules backward in the fixed order: invertible propositional first,
  // then structural, then modal, then the turnstile rules
  std::optional<ProofPtr> expand(const Hyper& goal, size_t depth) {
    size_t d = depth - 1;
    size_t nc = goal.size();
    // weakening (backward): drop a formula; helps close Init-like goals fast.
    // Restricted to components that already contain a matching pair.
    for (size_t c = 0; c < nc; c++) {
      const Sequent& s = goal[c];
      for (auto& f : s.ante) {
        if (find_in(s.succ, f) < 0) continue;
        // shrink toward the initial sequent
        if (goal.size() == 1 && s.kind == SeqKind::Arrow &&
            (s.ante.size() > 1 || s.succ.size() > 1)) {
          Hyper g = goal;
          if (g[0].ante.size() > 1) {
            int keep = find_in(g[0].ante, f);
            for (int i = static_cast<int>(g[0].ante.size()) - 1; i >= 0; i--)
              if (i != keep) g[0].ante.erase(g[0].ante.begin() + i);
          } else {
            int keep = find_in(g[0].succ, f);
            for (int i = static_cast<int>(g[0].succ.size()) - 1; i >= 0; i--)
              if (i != keep) g[0].succ.erase(g[0].succ.begin() + i);
          }
          auto sub = prove(g, d);
          if (sub) {
            ProofPtr q = *sub;
            Sequent want = goal[0];
            q = b_adjust_comp(q, q->conclusion.comps[0].id, want);
            return q;
          }
        }
      }
    }
    // propositional, invertible decompositions
    for (size_t c = 0; c < nc; c++) {
      const Sequent& s = goal[c];
      for (size_t i = 0; i < s.ante.size(); i++) {
        const Formula& f = s.ante[i];
        if (f.kind() == FKind::Neg) {
          Hyper g = goal;
          g[c].ante.erase(g[c].ante.begin() + i);
          g[c].succ.push_back(f.child());
          auto sub = prove(g, d);
          if (sub) {
            int pos = find_in((*sub)->conclusion[c].succ, f.child());
            return b_neg_l(*sub, static_cast<int>(c), pos);
          }
          return std::nullopt;  // invertible: no point trying others
        }
      }
      for (size_t i = 0; i < s.succ.size(); i++) {
        const Formula& f = s.succ[i];
        if (f.kind() == FKind::Neg) {
          Hyper g = goal;
          g[c].succ.erase(g[c].succ.begin() + i);
          g[c].ante.push_back(f.child());
          auto sub = prove(g, d);
          if (sub) {
            int pos = find_in((*sub)->conclusion[c].ante, f.child());
            return b_neg_r(*sub, static_cast<int>(c), pos);
          }
          return std::nullopt;
        }
      }
    }
    // and-left (choose a side; not invertible as a single rule)
    for (size_t c = 0; c < nc; c++) {
      const Sequent& s = goal[c];
      for (size_t i = 0; i < s.ante.size(); i++) {
        const Formula& f = s.ante[i];
        if (f.kind() != FKind::And) continue;
        {
          Hyper g = goal;
          g[c].ante[i] = f.left();
          auto sub = prove(g, d);
          if (sub) {
            int pos = find_in((*sub)->conclusion[c].ante, f.left());
            return b_and_l1(*sub, static_cast<int>(c), pos, f.right());
          }
        }
        {
          Hyper g = goal;
          g[c].ante[i] = f.right();
          auto sub = prove(g, d);
          if (sub) {
            int pos = find_in((*sub)->conclusion[c].ante, f.right());
            return b_and_l2(*sub, static_cast<int>(c), pos, f.left());
          }
        }
        // both-sides via contraction, within the multiplicity cap
        {
          Hyper g = goal;
          g[c].ante[i] = f.left();
          g[c].ante.push_back(f.right());
          if (!over_cap(g[c].ante)) {
            auto sub = prove(g, d);
            if (sub) {
              int pa = find_in((*sub)->conclusion[c].ante, f.left());
              ProofPtr q = b_and_l1(*sub, static_cast<int>(c), pa, f.right());
              int pb = -1;
              const auto& v = q->conclusion[c].ante;
              for (size_t x = 0; x < v.size(); x++)
                if (static_cast<int>(x) != pa && v[x] == f.right()) pb = static_cast<int>(x);
              q = b_and_l2(q, static_cast<int>(c), pb, f.left());
              return b_contr_l(q, static_cast<int>(c), pa, pb);
            }
          }
        }
      }
    }
    // and-right: branch with the full component on both sides, contract after
    for (size_t c = 0; c < nc; c++) {
      const Sequent& s = goal[c];
      for (size_t i = 0; i < s.succ.size(); i++) {
        const Formula& f = s.succ[i];
        if (f.kind() != FKind::And) continue;
        Hyper gl = goal, gr = goal;
        gl[c].succ[i] = f.left();
        gr[c].succ[i] = f.right();
        auto sl = prove(gl, d);
        if (!sl) continue;
        auto sr = prove(gr, d);
        if (!sr) continue;
        int la = find_in((*sl)->conclusion[c].succ, f.left());
        int rb = find_in((*sr)->conclusion[c].succ, f.right());
        ProofPtr q = b_and_r(*sl, *sr, static_cast<int>(c), la, static_cast<int>(c), rb);
        // conclusion: both environments and a doubled component; fold back
        return conform(q, goal);
      }
    }
    // bottom rule (backward): add an empty --> component next to a ==> one
    for (size_t c = 0; c < nc; c++) {
      if (goal[c].kind != SeqKind::DoubleArrow) continue;
      Hyper g = goal;
      Sequent empty;
      empty.kind = SeqKind::Arrow;
      g.comps.push_back({fresh_component_id(), empty});
      auto sub = prove(g, d);
      if (sub) {
        int del = static_cast<int>((*sub)->conclusion.size()) - 1;
        for (size_t x = 0; x < (*sub)->conclusion.size(); x++)
          if ((*sub)->conclusion[x].kind == SeqKind::Arrow &&
              (*sub)->conclusion[x].empty_both())
            del = static_cast<int>(x);
        return b_bot_rule(*sub, del, static_cast<int>(c));
      }
      break;  // one fresh component shape is enough
    }
    // merge (backward = split a component), --> only, nontrivial partitions
    for (size_t c = 0; c < nc; c++) {
      const Sequent& s = goal[c];
      if (s.kind != SeqKind::Arrow) continue;
      size_t total = s.ante.size() + s.succ.size();
      if (total < 2 || total > 10) continue;
      // enumerate splits of the antecedent/succedent (first element stays)
      size_t bits = total;
      for (size_t mask = 1; mask + 1 < (size_t{1} << bits); mask++) {
        Hyper g = goal;
        Sequent s1, s2;
        s1.kind = s2.kind = SeqKind::Arrow;
        size_t k = 0;
        for (auto& f : s.ante) ((mask >> k++) & 1 ? s2 : s1).ante.push_back(f);
        for (auto& f : s.succ) ((mask >> k++) & 1 ? s2 : s1).succ.push_back(f);
        g[c] = s1;
        g.comps.insert(g.comps.begin() + c + 1, {fresh_component_id(), s2});
        auto sub = prove(g, d);
        if (sub) {
          int c2 = -1;
          for (size_t x = 0; x < (*sub)->conclusion.size(); x++)
            if (seq_eq((*sub)->conclusion[x], s2) && static_cast<int>(x) != static_cast<int>(c))
              c2 = static_cast<int>(x);
          int c1 = -1;
          for (size_t x = 0; x < (*sub)->conclusion.size(); x++)
            if (seq_eq((*sub)->conclusion[x], s1) && static_cast<int>(x) != c2)
              c1 = static_cast<int>(x);
          return conform(b_merge(*sub, c1, c2), goal);
        }
      }
    }
    // modal rules (backward): K/4/K#/4# reattach a boxed component
    for (size_t c = 0; c < nc; c++) {
      const Sequent& s = goal[c];
      if (s.kind != SeqKind::Arrow || !(s.ante.size() == 1 && s.succ.empty())) continue;
      const Formula& f = s.ante[0];
      bool g_box = f.kind() == FKind::BoxG, r_box = f.kind() == FKind::BoxR;
      if (!g_box && !r_box) continue;
      if (r_box && !cfg.enable_black) continue;
      for (size_t t = 0; t < nc; t++) {
        if (t == c || goal[t].kind != SeqKind::DoubleArrow) continue;
        // K / K#
        {
          Hyper g = goal;
          g[t].ante.push_back(f.child());
          g.comps.erase(g.comps.begin() + c);
          auto sub = prove(g, d);
          if (sub) {
            size_t tt = t > c ? t - 1 : t;
            int pos = find_in((*sub)->conclusion[tt].ante, f.child());
            ProofPtr q = b_modal(*sub, g_box ? RuleId::K : RuleId::KBlack,
                                 static_cast<int>(tt), pos);
            return conform(q, goal);
          }
        }
        // 4 / 4#
        if (cfg.enable_four) {
          Hyper g = goal;
          g[t].ante.push_back(f);
          g.comps.erase(g.comps.begin() + c);
          auto sub = prove(g, d);
          if (sub) {
            size_t tt = t > c ? t - 1 : t;
            int pos = find_in((*sub)->conclusion[tt].ante, f);
            ProofPtr q = b_modal(*sub, g_box ? RuleId::Four : RuleId::FourBlack,
                                 static_cast<int>(tt), pos);
            return conform(q, goal);
          }
        }
      }
    }
    // [g]:r and the [r] right/left rules
    for (size_t c = 0; c < nc; c++) {
      const Sequent& s = goal[c];
      if (s.kind == SeqKind::Arrow && s.ante.empty() && s.succ.size() == 1 &&
          s.succ[0].kind() == FKind::BoxG) {
        Formula b = s.succ[0].child();
        Hyper g = goal;
        g[c].kind = SeqKind::DoubleArrow;
        g[c].ante = {s.succ[0]};
        g[c].succ = {b};
        auto sub = prove(g, d);
        if (sub) return b_box_right(*sub, static_cast<int>(c));
      }
      if (cfg.enable_black && s.kind == SeqKind::Arrow && s.ante.empty() &&
          s.succ.size() == 1 && s.succ[0].kind() == FKind::BoxR) {
        // needs the empty ==> companion in the goal
        for (size_t e = 0; e < nc; e++) {
          if (e == c || goal[e].kind != SeqKind::DoubleArrow || !goal[e].empty_both())
            continue;
          Formula b = s.succ[0].child();
          Hyper g = goal;
          g[c].kind = SeqKind::DoubleArrow;
          g[c].ante = {Formula::boxg(b)};
          g[c].succ = {b};
          g.comps.erase(g.comps.begin() + e);
          auto sub = prove(g, d);
          if (sub) {
            size_t cc = c > e ? c - 1 : c;
            return conform(b_black_r1(*sub, static_cast<int>(cc)), goal);
          }
        }
      }
      if (cfg.enable_black && s.kind == SeqKind::DoubleArrow && s.ante.empty() &&
          s.succ.size() == 1 && s.succ[0].kind() == FKind::BoxR) {
        Hyper g = goal;
        g[c].succ[0] = s.succ[0].child();
        auto sub = prove(g, d);
        if (sub) return b_black_r2(*sub, static_cast<int>(c));
      }
      if (cfg.enable_black && s.kind == SeqKind::DoubleArrow && s.succ.empty() &&
          s.ante.size() == 1 && s.ante[0].kind() == FKind::BoxR) {
        Hyper g = goal;
        g[c].ante[0] = s.ante[0].child();
        auto sub = prove(g, d);
        if (sub) return b_black_l(*sub, static_cast<int>(c));
      }
    }
    // turnstile rules (singletons only)
    if (nc == 1) {
      if (goal[0].kind == SeqKind::DoubleArrow) {
        Hyper g = goal;
        g[0].kind = SeqKind::Arrow;
        auto sub = prove(g, d);
        if (sub) return b_to_double(*sub);
      } else {
        Hyper g = goal;
        g[0].kind = SeqKind::DoubleArrow;
        auto sub = prove(g, d);
        if (sub) return b_to_arrow(*sub);
      }
    }
    return std::nullopt;
  }
};

bool uses_black(const ProofPtr& p) {
  if (is_modal_black(p->app.rule)) return true;
  auto scan = [](const Sequent& s) {
    std::function<bool(const Formula&)> has_r = [&](const Formula& f) {
      switch (f.kind()) {
        case FKind::BoxR: return true;
        case FKind::Neg:
        case FKind::BoxG: return has_r(f.child());
        case FKind::And: return has_r(f.left()) || has_r(f.right());
        default: return false;
      }
    };
    for (auto& f : s.ante)
      if (has_r(f)) return true;
    for (auto& f : s.succ)
      if (has_r(f)) return true;
    return false;
  };
  for (auto& c : p->conclusion.comps)
    if (scan(c.seq)) return true;
  for (auto& q : p->premises)
    if (uses_black(q)) return true;
  return false;
}

}  // namespace

std::optional<ProofPtr> prove_cutfree(const Hyper& goal, const SearchConfig& cfg) {
  Searcher s{cfg, {}, {}};
  auto out = s.prove(goal, cfg.max_depth);
  if (!out) return std::nullopt;
  if (!hs_equal((*out)->conclusion, goal)) out = conform(*out, goal);
  return out;
}

std::optional<ProofPtr> gl_extract(const ProofPtr& p) {
  Report rep = check_proof(p);
  if (!rep.valid || rep.cut_count != 0)
    throw InvalidInput("gl_extract: input must be a valid cut-free proof");
  if (uses_black(p)) return std::nullopt;
  return p;
}

}  // namespace gr
