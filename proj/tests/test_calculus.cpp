#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "gr/sequent.hpp"
#include "gr/taut.hpp"

using namespace gr;

TEST_CASE("sequent parsing and printing") {
  Sequent s = parse_sequent("p, q --> r");
  CHECK(s.kind == SeqKind::Arrow);
  CHECK(s.ante.size() == 2);
  CHECK(s.succ.size() == 1);
  Sequent e = parse_sequent("-->");
  CHECK(e.ante.empty());
  CHECK(e.succ.empty());
  Sequent d = parse_sequent("==> p");
  CHECK(d.kind == SeqKind::DoubleArrow);
  Hyper h = parse_hyper("p --> | q ==> r");
  CHECK(h.size() == 2);
  CHECK(parse_hyper(h.str()).str() == h.str());
}

TEST_CASE("formula image of the two sequent kinds") {
  // p --> q has image p -> q
  Formula img = formula_image(parse_sequent("p --> q"));
  CHECK(img == parse_formula("p -> q"));
  Formula img2 = formula_image(parse_sequent("p ==> q"));
  CHECK(img2 == parse_formula("[g](p -> q)"));
  // empty sequent: -false -> false
  Formula img3 = formula_image(parse_sequent("-->"));
  CHECK(img3 == parse_formula("-false -> false"));
}

TEST_CASE("hs_equal is permutation and id insensitive") {
  CHECK(hs_equal(parse_hyper("p --> | q ==>"), parse_hyper("q ==> | p -->")));
  CHECK(!hs_equal(parse_hyper("p --> p"), parse_hyper("p ==> p")));
  CHECK(!hs_equal(parse_hyper("p --> | p -->"), parse_hyper("p -->")));
  CHECK(hs_equal(parse_hyper("p, q --> r"), parse_hyper("q, p --> r")));
}

TEST_CASE("hs_equal under random shuffles is an equivalence") {
  std::mt19937 rng(3);
  Hyper h = parse_hyper("p --> q | ==> r | p, p --> | s ==> s");
  for (int i = 0; i < 50; i++) {
    Hyper g = h;
    std::shuffle(g.comps.begin(), g.comps.end(), rng);
    for (auto& c : g.comps) {
      std::shuffle(c.seq.ante.begin(), c.seq.ante.end(), rng);
      std::shuffle(c.seq.succ.begin(), c.seq.succ.end(), rng);
      c.id = fresh_component_id();
    }
    CHECK(hs_equal(h, g));
    CHECK(hs_equal(g, h));
    CHECK(hs_equal(g, g));
  }
}

TEST_CASE("dot_merge and dot_collapse") {
  Sequent a = parse_sequent("p --> q"), b = parse_sequent("r --> s");
  Sequent m = dot_merge(a, b);
  CHECK(seq_eq(m, parse_sequent("p, r --> q, s")));
  CHECK(seq_eq(dot_merge(parse_sequent("==> p"), parse_sequent("==> p")),
               parse_sequent("==> p, p")));
  CHECK_THROWS_AS(dot_merge(parse_sequent("p -->"), parse_sequent("==> p")),
                  KindMismatch);
  CHECK(seq_eq(dot_collapse(parse_hyper("p --> | q --> r")),
               parse_sequent("p, q --> r")));
  CHECK(seq_eq(dot_collapse(parse_hyper("==> a | b ==> | ==> c")),
               parse_sequent("b ==> a, c")));
  CHECK(seq_eq(dot_collapse(parse_hyper("p --> q")), parse_sequent("p --> q")));
  CHECK_THROWS_AS(dot_collapse(parse_hyper("p --> | q ==>")), KindMismatch);
}

TEST_CASE("dot_merge commutative and associative up to multiset equality") {
  std::mt19937 rng(17);
  auto rand_seq = [&](SeqKind k) {
    Sequent s;
    s.kind = k;
    int na = rng() % 3, ns = rng() % 3;
    for (int i = 0; i < na; i++)
      s.ante.push_back(Formula::atom(std::string(1, 'a' + rng() % 4)));
    for (int i = 0; i < ns; i++)
      s.succ.push_back(Formula::atom(std::string(1, 'a' + rng() % 4)));
    return s;
  };
  for (int i = 0; i < 50; i++) {
    SeqKind k = rng() % 2 ? SeqKind::Arrow : SeqKind::DoubleArrow;
    Sequent a = rand_seq(k), b = rand_seq(k), c = rand_seq(k);
    CHECK(seq_eq(dot_merge(a, b), dot_merge(b, a)));
    CHECK(seq_eq(dot_merge(dot_merge(a, b), c), dot_merge(a, dot_merge(b, c))));
  }
}

TEST_CASE("formula image respects hs_equal at the disjunct multiset level") {
  std::mt19937 rng(23);
  Hyper h = parse_hyper("p --> q | ==> r | s -->");
  auto disjuncts = [](const Hyper& g) {
    std::vector<Formula> out;
    for (auto& c : g.comps) out.push_back(formula_image(c.seq));
    return out;
  };
  for (int i = 0; i < 30; i++) {
    Hyper g = h;
    std::shuffle(g.comps.begin(), g.comps.end(), rng);
    CHECK(hs_equal(g, h));
    CHECK(multiset_eq(disjuncts(g), disjuncts(h)));
    // and the whole images stay propositionally equivalent
    CHECK(prop_equivalent(formula_image(g), formula_image(h)));
  }
}
