#include "gr/fixtures.hpp"

#include <map>

namespace gr {

namespace {
Formula A() { return Formula::atom("a"); }
using F = Formula;
}  // namespace

ProofPtr fx_ax2(const Formula& a, const Formula& b) {
  ProofPtr p = b_to_double(b_init(a));                     // a ==> a
  ProofPtr q = b_neg_r(b_to_double(b_init(b)), 0, 0);      // ==> b, -b
  ProofPtr r = b_and_r(p, q, 0, 0, 0, 1);                  // a ==> b, (a /\ -b)
  r = b_neg_l(r, 0, 1);                                    // -(a /\ -b), a ==> b
  r = b_modal(r, RuleId::K, 0, 0);                         // [g]-(a/\-b) --> | a ==> b
  r = b_modal(r, RuleId::K, 1, 0);                         // ... | [g]a --> | ==> b
  r = b_weak_l(r, 2, F::boxg(b));                          // ... | [g]b ==> b
  r = b_box_right(r, 2);                                   // ... | --> [g]b
  r = b_merge(r, 0, 1);
  return b_merge(r, 0, 1);                                 // [g]-(a/\-b), [g]a --> [g]b
}

ProofPtr fx_ax3(const Formula& a) {
  ProofPtr p = b_to_double(b_init(F::boxg(a)));            // [g]a ==> [g]a
  ProofPtr q = b_neg_r(b_to_double(b_init(a)), 0, 0);      // ==> a, -a
  ProofPtr r = b_and_r(p, q, 0, 0, 0, 1);                  // [g]a ==> a, ([g]a /\ -a)
  r = b_neg_l(r, 0, 1);                                    // -([g]a /\ -a), [g]a ==> a
  r = b_modal(r, RuleId::K, 0, 0);                         // [g]-([g]a/\-a) --> | [g]a ==> a
  r = b_box_right(r, 1);                                   // ... | --> [g]a
  return b_merge(r, 0, 1);                                 // [g]-([g]a/\-a) --> [g]a
}

ProofPtr fx_ax4(const Formula& a) {
  ProofPtr r = b_to_double(b_init(a));                     // a ==> a
  r = b_modal(r, RuleId::KBlack, 0, 0);                    // [r]a --> | ==> a
  r = b_weak_l(r, 1, F::boxg(a));                          // [r]a --> | [g]a ==> a
  r = b_box_right(r, 1);                                   // [r]a --> | --> [g]a
  return b_merge(r, 0, 1);                                 // [r]a --> [g]a
}

ProofPtr fx_ax5(const Formula& a) {
  ProofPtr r = b_to_double(b_init(a));                     // a ==> a
  r = b_modal(r, RuleId::K, 0, 0);                         // [g]a --> | ==> a
  r = b_black_r2(r, 1);                                    // [g]a --> | ==> [r]a
  r = b_weak_l(r, 1, F::boxg(F::boxr(a)));                 // ... | [g][r]a ==> [r]a
  r = b_box_right(r, 1);                                   // ... | --> [g][r]a
  return b_merge(r, 0, 1);                                 // [g]a --> [g][r]a
}

ProofPtr fx_ax6(const Formula& a) {
  ProofPtr r = b_to_double(b_init(a));                     // a ==> a
  r = b_modal(r, RuleId::K, 0, 0);                         // [g]a --> | ==> a
  r = b_weak_l(r, 1, F::boxg(a));                          // [g]a --> | [g]a ==> a
  r = b_black_r1(r, 1);                                    // [g]a --> | --> [r]a | ==>
  r = b_weak_r(r, 2, F::bottom());                         // ... | ==> false
  r = b_weak_l(r, 2, F::boxg(F::bottom()));                // ... | [g]false ==> false
  r = b_box_right(r, 2);                                   // ... | --> [g]false
  r = b_merge(r, 1, 2);                                    // [g]a --> | --> [r]a, [g]false
  return b_merge(r, 0, 1);                                 // [g]a --> [r]a, [g]false
}

ProofPtr fx_ax7(const Formula& a) {
  ProofPtr r = b_to_double(b_init(a));                     // a ==> a
  r = b_neg_l(r, 0, 0);                                    // -a, a ==>
  r = b_modal(r, RuleId::K, 0, 0);                         // [g]-a --> | a ==>
  r = b_black_l(r, 1);                                     // [g]-a --> | [r]a ==>
  r = b_neg_r(r, 1, 0);                                    // [g]-a --> | ==> -[r]a
  r = b_weak_l(r, 1, F::boxg(F::neg(F::boxr(a))));         // ... | [g]-[r]a ==> -[r]a
  r = b_box_right(r, 1);                                   // ... | --> [g]-[r]a
  return b_merge(r, 0, 1);                                 // [g]-a --> [g]-[r]a
}

ProofPtr fx_nec(ProofPtr base) {
  Formula a = base->conclusion[0].succ.at(0);
  ProofPtr r = b_to_double(std::move(base));               // ==> a
  r = b_weak_l(r, 0, F::boxg(a));                          // [g]a ==> a
  return b_box_right(r, 0);                                // --> [g]a
}

ProofPtr fx_refl(ProofPtr base) {
  Formula ba = base->conclusion[0].succ.at(0);
  Formula a = ba.child();
  ProofPtr k = b_modal(b_to_double(b_init(a)), RuleId::K, 0, 0);  // [g]a --> | ==> a
  ProofPtr r = b_cut(std::move(base), k, 0, 0, 0, 0, ba);  // ==> a | -->
  r = b_bot_rule(r, 1, 0);                                 // ==> a
  return b_to_arrow(r);                                    // --> a
}

namespace {

ProofPtr pl_tautology_base() {
  // --> -(a /\ -a), the provable base the rule-simulation fixtures close over
  Sequent goal;
  goal.kind = SeqKind::Arrow;
  goal.succ.push_back(F::neg(F::conj(A(), F::neg(A()))));
  auto p = pl_prove(goal);
  if (!p) throw UnknownFixture("internal: tautology base not provable");
  return *p;
}

ProofPtr tr1_base() {
  Formula d = F::atom("d"), e = F::atom("e");
  ProofPtr r = b_and_r(b_to_double(b_init(d)), b_to_double(b_init(e)), 0, 0, 0, 0);
  return b_modal(r, RuleId::KBlack, 0, 0);  // [r]d --> | e ==> d/\e
}

Sequent seq_gc() { return parse_sequent("[g]c ==> c"); }

ProofPtr apply_target(ProofPtr p, int comp, const Formula& b) {
  // materialized abbreviated [g]:r target: pad the ==> component to [g]B ==> B
  Sequent want;
  want.kind = SeqKind::DoubleArrow;
  want.ante.push_back(F::boxg(b));
  want.succ.push_back(b);
  ComponentId id = p->conclusion.comps.at(comp).id;
  p = b_adjust_comp(std::move(p), id, want);
  int at = comp_of_id(p->conclusion, id);
  return b_box_right(std::move(p), at);
}

ProofPtr fx_tr1_stage(int stage) {
  Formula d = F::atom("d"), e = F::atom("e");
  Formula b = F::conj(d, e);
  switch (stage) {
    case 0: {
      ProofPtr r = tr1_base();                 // [r]d --> | e ==> d/\e
      r = b_ew(r, seq_gc());                   // ... | [g]c ==> c
      r = b_black_r1(r, 2);                    // [r]d --> | e ==> d/\e | --> [r]c | ==>
      r = b_merge(r, 3, 1);                    // [r]d --> | e ==> d/\e | --> [r]c
      r = b_modal(r, RuleId::K, 1, 0);         // [r]d --> | [g]e --> | ==> d/\e | --> [r]c
      return apply_target(r, 2, b);
    }
    case 1: {
      ProofPtr r = b_modal(tr1_base(), RuleId::K, 1, 0);  // [r]d --> | [g]e --> | ==> d/\e
      r = b_ew(r, seq_gc());
      r = b_black_r1(r, 3);                    // ... | ==> d/\e | --> [r]c | ==>
      r = b_merge(r, 4, 2);                    // [r]d --> | [g]e --> | ==> d/\e | --> [r]c
      return apply_target(r, 2, b);
    }
    case 2: {
      ProofPtr r = b_modal(tr1_base(), RuleId::K, 1, 0);
      r = b_ew(r, seq_gc());
      r = b_black_r1(r, 3);                    // [r]d --> | [g]e --> | ==> d/\e | --> [r]c | ==>
      r = apply_target(r, 2, b);               // I
      r = apply_target(r, 4, b);               // I'
      r = b_merge(r, 2, 4);                    // --> [g](d/\e), [g](d/\e)
      return b_contr_r(r, 2, 0, 1);
    }
    case 3: {
      ProofPtr r = b_modal(tr1_base(), RuleId::K, 1, 0);
      r = apply_target(r, 2, b);               // I standard: [r]d --> | [g]e --> | --> [g](d/\e)
      r = b_ew(r, seq_gc());
      r = b_black_r1(r, 3);                    // ... | --> [r]c | ==>
      r = apply_target(r, 4, b);               // I' with environment K
      r = b_merge(r, 2, 4);
      return b_contr_r(r, 2, 0, 1);
    }
    default: throw UnknownFixture("tr1 stage");
  }
}

ProofPtr tr2_stage(int stage) {
  Formula p = F::atom("p"), q = F::atom("q");
  Formula pq = F::conj(p, q);
  auto pq_seq = [&]() {  // p, q ==> p/\q
    return b_to_double(b_and_r(b_init(p), b_init(q), 0, 0, 0, 0));
  };
  auto left_chain = [&]() {  // [g]p, [r]q --> | ==> p/\q
    ProofPtr r = b_modal(pq_seq(), RuleId::K, 0, 0);
    r = b_modal(r, RuleId::KBlack, 1, 0);
    return b_merge(r, 0, 1);
  };
  auto diag_seq = [&]() {  // p/\q ==> p/\q
    return b_and_l_both(pq_seq(), 0, 0, 1);
  };
  // closing steps shared by stages 1..4: from `[g]p, [r]q --> | ==> p/\q`
  // down to `[g]p, [r]q --> | ==> [g](p/\q)` via [g]:r, merge, ==>, 4, 4#, merge
  auto close = [&](ProofPtr r) {
    r = b_weak_l(r, 1, F::boxg(pq));
    r = b_box_right(r, 1);                 // [g]p,[r]q --> | --> [g](p/\q)
    r = b_merge(r, 0, 1);                  // [g]p,[r]q --> [g](p/\q)
    r = b_to_double(r);                    // [g]p,[r]q ==> [g](p/\q)
    r = b_modal(r, RuleId::Four, 0, 0);    // [g]p --> | [r]q ==> [g](p/\q)
    r = b_modal(r, RuleId::FourBlack, 1, 0);
    return b_merge(r, 0, 1);               // [g]p,[r]q --> | ==> [g](p/\q)
  };
  switch (stage) {
    case 0: {
      ProofPtr l = b_black_r2(left_chain(), 1);  // [g]p,[r]q --> | ==> [r](p/\q)
      ProofPtr r = diag_seq();
      r = b_modal(r, RuleId::KBlack, 0, 0);      // [r](p/\q) --> | ==> p/\q
      r = b_weak_l(r, 1, F::boxg(pq));
      r = b_box_right(r, 1);                     // [r](p/\q) --> | --> [g](p/\q)
      r = b_merge(r, 0, 1);                      // [r](p/\q) --> [g](p/\q)
      r = b_to_double(r);                        // [r](p/\q) ==> [g](p/\q)
      return b_cut(l, r, 1, 0, 0, 0, F::boxr(pq));
    }
    case 1: return close(b_cut(left_chain(), diag_seq(), 1, 0, 0, 0, pq));
    case 2: {
      // by the formula-reduction method: cuts on p and then q
      ProofPtr lq = b_weak_l(b_init(q), 0, p);   // p, q --> q
      lq = b_to_double(lq);
      lq = b_modal(lq, RuleId::K, 0, 0);
      lq = b_modal(lq, RuleId::KBlack, 1, 0);
      lq = b_merge(lq, 0, 1);                    // [g]p,[r]q --> | ==> q
      ProofPtr lp = b_weak_l(b_init(p), 0, q);   // q, p --> p
      lp = b_to_double(lp);
      lp = b_modal(lp, RuleId::K, 0, find_in(lp->conclusion[0].ante, p));
      lp = b_modal(lp, RuleId::KBlack, 1, 0);
      lp = b_merge(lp, 0, 1);                    // [g]p,[r]q --> | ==> p
      ProofPtr inner = b_cut(lp, pq_seq(), 1, 0, 0, 0, p);  // [g]p,[r]q --> | q ==> p/\q
      ProofPtr outer = b_cut(lq, inner, 1, 0, 1, 0, q);
      // [g]p,[r]q --> | [g]p,[r]q --> | ==> p/\q
      outer = b_merge(outer, 0, 1);
      ComponentId id = outer->conclusion.comps[0].id;
      outer = b_adjust_comp(outer, id, parse_sequent("[g]p, [r]q -->"));
      return close(std::move(outer));
    }
    case 3: {
      ProofPtr lq = b_weak_l(b_init(q), 0, p);
      lq = b_to_double(lq);
      lq = b_modal(lq, RuleId::K, 0, 0);
      lq = b_modal(lq, RuleId::KBlack, 1, 0);
      lq = b_merge(lq, 0, 1);                    // [g]p,[r]q --> | ==> q
      ProofPtr in2 = b_weak_l(b_init(p), 0, q);  // q, p --> p
      in2 = b_and_r(in2, b_init(q), 0, 0, 0, 0); // q, p, q --> p/\q
      in2 = b_to_double(in2);
      in2 = b_modal(in2, RuleId::K, 0, find_in(in2->conclusion[0].ante, p));
      in2 = b_modal(in2, RuleId::KBlack, 1, 0);
      in2 = b_merge(in2, 0, 1);                  // [g]p,[r]q --> | q ==> p/\q
      ProofPtr outer = b_cut(lq, in2, 1, 0, 1, 0, q);
      outer = b_merge(outer, 0, 1);
      ComponentId id = outer->conclusion.comps[0].id;
      outer = b_adjust_comp(outer, id, parse_sequent("[g]p, [r]q -->"));
      return close(std::move(outer));
    }
    case 4: {
      ProofPtr l = b_weak_l(b_init(p), 0, q);    // q, p --> p
      ProofPtr r = b_weak_l(b_init(q), 0, p);    // p, q --> q
      ProofPtr t = b_and_r(l, r, 0, 0, 0, 0);    // q, p, p, q --> p/\q
      t = b_to_double(t);
      t = b_modal(t, RuleId::K, 0, find_in(t->conclusion[0].ante, p));
      t = b_modal(t, RuleId::KBlack, 1, find_in(t->conclusion[1].ante, q));
      t = b_merge(t, 0, 1);                      // [g]p,[r]q --> | p, q ==> p/\q
      t = b_modal(t, RuleId::K, 1, find_in(t->conclusion[1].ante, p));
      t = b_modal(t, RuleId::KBlack, 2, 0);
      t = b_merge(t, 1, 2);                      // [g]p,[r]q --> | [g]p,[r]q --> | ==> p/\q
      t = b_merge(t, 0, 1);
      ComponentId id = t->conclusion.comps[0].id;
      t = b_adjust_comp(t, id, parse_sequent("[g]p, [r]q -->"));
      return close(std::move(t));
    }
    default: throw UnknownFixture("tr2 stage");
  }
}

const std::map<std::string, std::string> kAnchors = {
    {"ax2", "Theorem 1, axiom 2 figure: [g](A -> B), [g]A --> [g]B"},
    {"ax3", "Theorem 1, axiom 3 figure: [g]([g]A -> A) --> [g]A"},
    {"ax4", "Theorem 1, axiom 4 figure: [r]A --> [g]A"},
    {"ax5", "Theorem 1, axiom 5 figure: [g]A --> [g][r]A"},
    {"ax6", "Theorem 1, axiom 6 figure: [g]A --> [r]A, [g]false"},
    {"ax7", "Theorem 1, axiom 7 figure: [g]-A --> [g]-[r]A"},
    {"nec", "Theorem 1, derivation of --> [g]A from --> A, over a tautology base"},
    {"refl", "Theorem 1, derivation of --> A from --> [g]A (one cut), over nec"},
    {"tr1_stage0", "Technical Report 1, first figure"},
    {"tr1_stage1", "Technical Report 1, after permuting the K application"},
    {"tr1_stage2", "Technical Report 1, after duplicating the target to I, I'"},
    {"tr1_stage3", "Technical Report 1, final figure: I standard, I' with environment"},
    {"tr2_stage0", "Technical Report 2, first figure (one cut on [r](p/\\q))"},
    {"tr2_stage1", "Technical Report 2, after the top-down step of Case 2.2"},
    {"tr2_stage2", "Technical Report 2, after the formula-reduction step"},
    {"tr2_stage3", "Technical Report 2, after eliminating the cut on p"},
    {"tr2_stage4", "Technical Report 2, final cut-free figure"},
};

}  // namespace

std::vector<std::string> fixture_names() {
  std::vector<std::string> out;
  for (auto& [k, v] : kAnchors) out.push_back(k);
  return out;
}

std::string fixture_anchor(const std::string& name) {
  auto it = kAnchors.find(name);
  if (it == kAnchors.end()) throw UnknownFixture("unknown fixture: " + name);
  return it->second;
}

ProofPtr builtin_fixture(const std::string& name) {
  if (name == "ax2") return fx_ax2(A(), Formula::atom("b"));
  if (name == "ax3") return fx_ax3(A());
  if (name == "ax4") return fx_ax4(A());
  if (name == "ax5") return fx_ax5(A());
  if (name == "ax6") return fx_ax6(A());
  if (name == "ax7") return fx_ax7(A());
  if (name == "nec") return fx_nec(pl_tautology_base());
  if (name == "refl") return fx_refl(fx_nec(pl_tautology_base()));
  if (name == "tr1_stage0") return fx_tr1_stage(0);
  if (name == "tr1_stage1") return fx_tr1_stage(1);
  if (name == "tr1_stage2") return fx_tr1_stage(2);
  if (name == "tr1_stage3") return fx_tr1_stage(3);
  if (name == "tr2_stage0") return tr2_stage(0);
  if (name == "tr2_stage1") return tr2_stage(1);
  if (name == "tr2_stage2") return tr2_stage(2);
  if (name == "tr2_stage3") return tr2_stage(3);
  if (name == "tr2_stage4") return tr2_stage(4);
  throw UnknownFixture("unknown fixture: " + name);
}

ProofPtr fixture(const std::string& name, const std::string& dir) {
  if (!kAnchors.count(name)) throw UnknownFixture("unknown fixture: " + name);
  return load_proof_file(dir + "/" + name + ".json");
}

}  // namespace gr
