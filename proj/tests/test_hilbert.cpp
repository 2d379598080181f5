#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gr/fixtures.hpp"
#include "gr/taut.hpp"

using namespace gr;

TEST_CASE("every builtin fixture is a valid proof") {
  for (auto& name : fixture_names()) {
    INFO(name);
    ProofPtr p = builtin_fixture(name);
    Report rep = check_proof(p);
    if (!rep.valid) {
      INFO(rep.first_error->second.clause);
    }
    CHECK(rep.valid);
  }
}

TEST_CASE("fixture end hypersequents and cut counts") {
  CHECK(hs_equal(builtin_fixture("ax4")->conclusion, parse_hyper("[r]a --> [g]a")));
  CHECK(hs_equal(builtin_fixture("ax5")->conclusion, parse_hyper("[g]a --> [g][r]a")));
  CHECK(hs_equal(builtin_fixture("ax6")->conclusion,
                 parse_hyper("[g]a --> [r]a, [g]false")));
  CHECK(count_cuts(builtin_fixture("refl")) == 1);
  CHECK(count_cuts(builtin_fixture("tr2_stage0")) == 1);
  CHECK(count_cuts(builtin_fixture("tr2_stage4")) == 0);
  CHECK(hs_equal(builtin_fixture("tr2_stage0")->conclusion,
                 parse_hyper("[g]p, [r]q --> | ==> [g](p /\\ q)")));
  CHECK(hs_equal(builtin_fixture("tr1_stage0")->conclusion,
                 parse_hyper("--> [r]c | [r]d --> | [g]e --> | --> [g](d /\\ e)")));
}

TEST_CASE("axiom schema matching") {
  CHECK(matches_axiom(4, parse_formula("[r]p -> [g]p")));
  CHECK(!matches_axiom(4, parse_formula("[g]p -> [r]p")));
  CHECK(matches_axiom(3, parse_formula("[g]([g](p /\\ q) -> (p /\\ q)) -> [g](p /\\ q)")));
  CHECK(matches_axiom(6, parse_formula("[g]p -> ([g]false \\/ [r]p)")));
  CHECK(matches_axiom(7, parse_formula("<g>[r]p -> <g>p")));
  CHECK(matches_axiom(2, parse_formula("[g](p -> q) -> ([g]p -> [g]q)")));
}

TEST_CASE("check_ax_proof accepts and rejects per step") {
  AxProof good;
  good.steps.push_back({parse_formula("-(p /\\ -p)"), JustKind::Axiom, 1, -1, -1});
  good.steps.push_back({parse_formula("[g]-(p /\\ -p)"), JustKind::Nec, 0, 0, -1});
  CHECK(check_ax_proof(good).ok);

  AxProof one;
  one.steps.push_back({parse_formula("[r]p -> [g]p"), JustKind::Axiom, 4, -1, -1});
  CHECK(check_ax_proof(one).ok);

  AxProof bad;
  bad.steps.push_back({parse_formula("[g]p -> [r]p"), JustKind::Axiom, 4, -1, -1});
  auto rep = check_ax_proof(bad);
  CHECK(!rep.ok);
  CHECK(rep.errors[0].find("BadAxiomInstance") != std::string::npos);

  AxProof mp;
  mp.steps.push_back({parse_formula("p"), JustKind::Axiom, 1, -1, -1});  // invalid too
  mp.steps.push_back({parse_formula("p -> p"), JustKind::Axiom, 1, -1, -1});
  mp.steps.push_back({parse_formula("q"), JustKind::MP, 0, 0, 1});
  rep = check_ax_proof(mp);
  CHECK(!rep.ok);  // BadMP: steps[1] is not (p -> q)
}

TEST_CASE("translate single axioms to hypersequent theses") {
  for (int k = 2; k <= 7; k++) {
    AxProof p;
    Formula inst = [&] {
      switch (k) {
        case 2: return parse_formula("[g](p -> q) -> ([g]p -> [g]q)");
        case 3: return parse_formula("[g]([g]p -> p) -> [g]p");
        case 4: return parse_formula("[r]p -> [g]p");
        case 5: return parse_formula("[g]p -> [g][r]p");
        case 6: return parse_formula("[g]p -> ([g]false \\/ [r]p)");
        default: return parse_formula("<g>[r]p -> <g>p");
      }
    }();
    p.steps.push_back({inst, JustKind::Axiom, k, -1, -1});
    INFO("axiom " << k);
    ProofPtr h = translate_ax_to_hyper(p);
    Report rep = check_proof(h);
    if (!rep.valid) { INFO(rep.first_error->second.clause); }
    CHECK(rep.valid);
    REQUIRE(h->conclusion.size() == 1);
    CHECK(h->conclusion[0].ante.empty());
    REQUIRE(h->conclusion[0].succ.size() == 1);
    CHECK(h->conclusion[0].succ[0] == inst);
  }
}

TEST_CASE("translate an MP and nec/refl chain") {
  AxProof p;
  // 0: [r]p -> [g]p            (axiom 4)
  // 1: ([r]p -> [g]p) -> (([r]p -> [g]p) /\ ([r]p -> [g]p))   tautology
  // 2: ([r]p -> [g]p) /\ ([r]p -> [g]p)    by MP 0,1
  // 3: [g](...)                             by Nec 2
  // 4: ...                                  by Refl 3
  Formula a4 = parse_formula("[r]p -> [g]p");
  Formula dup = Formula::conj(a4, a4);
  p.steps.push_back({a4, JustKind::Axiom, 4, -1, -1});
  p.steps.push_back({Formula::impl(a4, dup), JustKind::Axiom, 1, -1, -1});
  p.steps.push_back({dup, JustKind::MP, 0, 0, 1});
  p.steps.push_back({Formula::boxg(dup), JustKind::Nec, 0, 2, -1});
  p.steps.push_back({dup, JustKind::Refl, 0, 3, -1});
  REQUIRE(check_ax_proof(p).ok);
  ProofPtr h = translate_ax_to_hyper(p);
  Report rep = check_proof(h);
  if (!rep.valid) { INFO(rep.first_error->second.clause); }
  CHECK(rep.valid);
  CHECK(h->conclusion[0].succ[0] == dup);
}

TEST_CASE("translated theses are equivalent to the final formula") {
  AxProof p;
  p.steps.push_back({parse_formula("[g]([g]p -> p) -> [g]p"), JustKind::Axiom, 3, -1, -1});
  ProofPtr h = translate_ax_to_hyper(p);
  CHECK(prop_equivalent(formula_image(h->conclusion), p.steps.back().formula));
}

TEST_CASE("axproof JSON round trip") {
  AxProof p;
  p.steps.push_back({parse_formula("[r]p -> [g]p"), JustKind::Axiom, 4, -1, -1});
  p.steps.push_back({parse_formula("[g]([r]p -> [g]p)"), JustKind::Nec, 0, 0, -1});
  AxProof back = axproof_from_json(axproof_to_json(p));
  CHECK(back.steps.size() == 2);
  CHECK(back.steps[1].kind == JustKind::Nec);
  CHECK(back.steps[1].formula == p.steps[1].formula);
  CHECK(check_ax_proof(back).ok);
}
