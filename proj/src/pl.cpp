#include "gr/pl.hpp"

namespace gr {

namespace {

std::vector<Formula> without(std::vector<Formula> v, int i) {
  v.erase(v.begin() + i);
  return v;
}

std::optional<ProofPtr> prove(const std::vector<Formula>& ante,
                              const std::vector<Formula>& succ) {
  // axiom closure
  for (auto& a : ante) {
    if (a.kind() == FKind::Bottom) {
      ProofPtr p = b_init_bot();
      for (auto& g : succ) p = b_weak_r(std::move(p), 0, g);
      bool skipped = false;
      for (auto& g : ante) {
        if (!skipped && g.kind() == FKind::Bottom) {
          skipped = true;
          continue;
        }
        p = b_weak_l(std::move(p), 0, g);
      }
      return p;
    }
  }
  for (auto& a : ante) {
    if (find_in(succ, a) >= 0) {
      ProofPtr p = b_init(a);
      bool skip_a = false, skip_s = false;
      for (auto& g : ante) {
        if (!skip_a && g == a) {
          skip_a = true;
          continue;
        }
        p = b_weak_l(std::move(p), 0, g);
      }
      for (auto& g : succ) {
        if (!skip_s && g == a) {
          skip_s = true;
          continue;
        }
        p = b_weak_r(std::move(p), 0, g);
      }
      return p;
    }
  }
  // decompose
  for (size_t i = 0; i < ante.size(); i++) {
    const Formula& f = ante[i];
    if (f.kind() == FKind::Neg) {
      auto rest = without(ante, static_cast<int>(i));
      auto s2 = succ;
      s2.push_back(f.child());
      auto sub = prove(rest, s2);
      if (!sub) return std::nullopt;
      // the recursive proof's succedent multiset equals s2; locate the child
      int pos = find_in((*sub)->conclusion[0].succ, f.child());
      return b_neg_l(std::move(*sub), 0, pos);
    }
    if (f.kind() == FKind::And) {
      auto rest = without(ante, static_cast<int>(i));
      rest.push_back(f.left());
      rest.push_back(f.right());
      auto sub = prove(rest, succ);
      if (!sub) return std::nullopt;
      auto& v = (*sub)->conclusion[0].ante;
      int pa = find_in(v, f.left());
      int pb = -1;
      for (size_t k = 0; k < v.size(); k++)
        if (static_cast<int>(k) != pa && v[k] == f.right()) {
          pb = static_cast<int>(k);
          break;
        }
      return b_and_l_both(std::move(*sub), 0, pa, pb);
    }
  }
  for (size_t i = 0; i < succ.size(); i++) {
    const Formula& f = succ[i];
    if (f.kind() == FKind::Neg) {
      auto rest = without(succ, static_cast<int>(i));
      auto a2 = ante;
      a2.push_back(f.child());
      auto sub = prove(a2, rest);
      if (!sub) return std::nullopt;
      int pos = find_in((*sub)->conclusion[0].ante, f.child());
      return b_neg_r(std::move(*sub), 0, pos);
    }
    if (f.kind() == FKind::And) {
      auto rest = without(succ, static_cast<int>(i));
      auto sl = rest, sr = rest;
      sl.push_back(f.left());
      sr.push_back(f.right());
      auto p1 = prove(ante, sl);
      if (!p1) return std::nullopt;
      auto p2 = prove(ante, sr);
      if (!p2) return std::nullopt;
      int la = find_in((*p1)->conclusion[0].succ, f.left());
      int rb = find_in((*p2)->conclusion[0].succ, f.right());
      ProofPtr q = b_and_r(std::move(*p1), std::move(*p2), 0, la, 0, rb);
      ComponentId id = q->conclusion.comps[0].id;
      Sequent target;
      target.kind = SeqKind::Arrow;
      target.ante = ante;
      target.succ = succ;
      return b_adjust_comp(std::move(q), id, target);
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<ProofPtr> pl_prove(const Sequent& goal) {
  if (goal.kind != SeqKind::Arrow) return std::nullopt;
  auto p = prove(goal.ante, goal.succ);
  if (!p) return std::nullopt;
  Hyper target = Hyper::of({goal});
  return conform(std::move(*p), target);
}

}  // namespace gr
