#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>

#include "gr/diagonal.hpp"
#include "gr/fixtures.hpp"

using namespace gr;

namespace {

const ProofNode* find_box_right(const ProofPtr& root, const Formula& prod) {
  const ProofNode* hit = nullptr;
  std::function<void(const ProofNode*)> go = [&](const ProofNode* n) {
    if ((n->app.rule == RuleId::BoxRight || n->app.rule == RuleId::BlackR1) &&
        n->conclusion[n->app.comp].succ.size() == 1 &&
        n->conclusion[n->app.comp].succ[0] == prod)
      hit = n;
    for (auto& q : n->premises) go(q.get());
  };
  go(root.get());
  return hit;
}

// a synthetic standard [g]:r whose diagonal is introduced by one K
// application: the axiom-3 style derivation
ProofPtr loeb_style() {
  Formula a = Formula::atom("a");
  Formula boxa = Formula::boxg(a);
  ProofPtr p = b_to_double(b_init(boxa));            // [g]a ==> [g]a
  ProofPtr q = b_neg_r(b_to_double(b_init(a)), 0, 0);  // ==> a, -a
  ProofPtr r = b_and_r(p, q, 0, 0, 0, 1);            // [g]a ==> a, ([g]a /\ -a)
  r = b_neg_l(r, 0, 1);                              // -([g]a /\ -a), [g]a ==> a
  r = b_modal(r, RuleId::K, 0, 0);                   // [g]-([g]a/\-a) --> | [g]a ==> a
  return b_box_right(r, 1);                          // ... | --> [g]a
}

}  // namespace

TEST_CASE("context for the n=0 case (weakening-introduced diagonal)") {
  ProofPtr p = builtin_fixture("tr2_stage0");
  const ProofNode* I0 = find_box_right(p, parse_formula("[g](p /\\ q)"));
  REQUIRE(I0);
  LineageCache lc;
  DiagonalContext ctx = build_context(p, I0, lc);
  CHECK(ctx.legs.empty());
  CHECK(ctx.weak_intros.size() == 1);
  CHECK(ctx.B == parse_formula("p /\\ q"));
}

TEST_CASE("n=0 elimination drops the diagonal") {
  ProofPtr p = builtin_fixture("tr2_stage0");
  const ProofNode* I0 = find_box_right(p, parse_formula("[g](p /\\ q)"));
  ProofPtr frag = eliminate_diagonal_premise(p, I0);
  CHECK(check_proof(frag).valid);
  CHECK(hs_equal(frag->conclusion, parse_hyper("[r](p /\\ q) --> | ==> p /\\ q")));
  ProofPtr full = eliminate_diagonal(p, I0);
  CHECK(check_proof(full).valid);
  CHECK(hs_equal(full->conclusion, p->conclusion));
  CHECK(count_cuts(full) == count_cuts(p));
}

TEST_CASE("context and elimination for one K introducer") {
  ProofPtr p = loeb_style();
  REQUIRE(check_proof(p).valid);
  const ProofNode* I0 = p.get();
  REQUIRE(is_standard(p, I0).has_value());
  LineageCache lc;
  DiagonalContext ctx = build_context(p, I0, lc);
  CHECK(ctx.legs.size() == 1);
  CHECK(ctx.legs[0].L->app.rule == RuleId::K);
  REQUIRE(ctx.legs[0].M != nullptr);
  CHECK(ctx.legs[0].M->app.rule == RuleId::BoxRight);
  CHECK(ctx.legs[0].C == Formula::atom("a"));
  REQUIRE(ctx.legs[0].N != nullptr);
  CHECK(ctx.legs[0].N->app.rule == RuleId::ToDouble);

  ProofPtr frag = eliminate_diagonal_premise(p, I0);
  Report rep = check_proof(frag);
  if (!rep.valid) { INFO(rep.first_error->second.clause); }
  CHECK(rep.valid);
  CHECK(hs_equal(frag->conclusion,
                 parse_hyper("[g]-(([g]a /\\ -a)) --> | ==> a")));
  // every new cut is on B
  std::function<void(const ProofNode*)> cuts = [&](const ProofNode* n) {
    if (n->app.rule == RuleId::Cut)
      CHECK(*n->app.cut_formula == Formula::atom("a"));
    for (auto& q : n->premises) cuts(q.get());
  };
  cuts(frag.get());
  CHECK(count_cuts(frag) >= 1);

  ProofPtr full = eliminate_diagonal(p, I0);
  CHECK(check_proof(full).valid);
  CHECK(hs_equal(full->conclusion, p->conclusion));
  // the target's diagonal is now introduced by the weakening only
  const ProofNode* I0b = find_box_right(full, parse_formula("[g]a"));
  REQUIRE(I0b);
  LineageCache lc2;
  DiagonalContext after = build_context(full, I0b, lc2);
  CHECK(after.legs.empty());
}

TEST_CASE("substitute_Qi produces the displayed replacement") {
  ProofPtr p = loeb_style();
  LineageCache lc;
  DiagonalContext ctx = build_context(p, p.get(), lc);
  REQUIRE(ctx.legs.size() == 1);
  ProofPtr qi = substitute_Qi(ctx, 0, {parse_formula("[g]a")});
  CHECK(check_proof(qi).valid);
  // same hypersequent as M_0's conclusion with [g](p/\q)... here [g]B == [g]C
  CHECK(hs_equal(qi->conclusion, ctx.legs[0].M->conclusion));
}

TEST_CASE("build_context rejects non-standard targets") {
  ProofPtr p = builtin_fixture("tr1_stage0");
  const ProofNode* I0 = find_box_right(p, parse_formula("[g](d /\\ e)"));
  REQUIRE(I0);
  LineageCache lc;
  CHECK_THROWS_AS(build_context(p, I0, lc), NotStandard);
}
