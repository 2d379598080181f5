#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "gr/formula.hpp"

using namespace gr;

TEST_CASE("parse basic connectives") {
  Formula f = parse_formula("[g]p /\\ -q");
  CHECK(f.kind() == FKind::And);
  CHECK(f.left().kind() == FKind::BoxG);
  CHECK(f.left().child() == Formula::atom("p"));
  CHECK(f.right() == Formula::neg(Formula::atom("q")));
}

TEST_CASE("derived connectives expand at parse time") {
  Formula f = parse_formula("p -> q");
  CHECK(f == Formula::neg(Formula::conj(Formula::atom("p"),
                                        Formula::neg(Formula::atom("q")))));
  Formula ax4 = parse_formula("[r]p -> [g]p");
  CHECK(ax4 == Formula::impl(Formula::boxr(Formula::atom("p")),
                             Formula::boxg(Formula::atom("p"))));
  Formula dis = parse_formula("p \\/ q");
  CHECK(dis == Formula::disj(Formula::atom("p"), Formula::atom("q")));
  Formula dia = parse_formula("<g>p");
  CHECK(dia == Formula::neg(Formula::boxg(Formula::neg(Formula::atom("p")))));
}

TEST_CASE("printing is canonical and fully parenthesized") {
  CHECK(Formula::conj(Formula::atom("p"), Formula::atom("q")).str() == "(p /\\ q)");
  CHECK(Formula::boxr(Formula::bottom()).str() == "[r]false");
  CHECK(Formula::neg(Formula::boxg(Formula::neg(Formula::atom("p")))).str() ==
        "-[g]-p");
}

TEST_CASE("degree counts connective nodes") {
  CHECK(degree(Formula::atom("p")) == 0);
  CHECK(degree(parse_formula("[g](p /\\ q)")) == 2);
  CHECK(degree(parse_formula("p -> q")) == 3);
}

TEST_CASE("syntax errors carry offsets") {
  CHECK_THROWS_AS(parse_formula("p /\\"), SyntaxError);
  CHECK_THROWS_AS(parse_formula("P"), SyntaxError);
  CHECK_THROWS_AS(parse_formula("p q"), SyntaxError);
  try {
    parse_formula("p /\\ )");
  } catch (const SyntaxError& e) {
    CHECK(e.offset >= 4);
  }
}

namespace {

Formula random_formula(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 6);
  switch (pick(rng)) {
    case 0: return Formula::atom(std::string(1, static_cast<char>('p' + rng() % 4)));
    case 1: return Formula::bottom();
    case 2: return Formula::neg(random_formula(rng, depth - 1));
    case 3:
      return Formula::conj(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 4: return Formula::boxg(random_formula(rng, depth - 1));
    case 5: return Formula::boxr(random_formula(rng, depth - 1));
    default:
      return Formula::impl(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
  }
}

}  // namespace

TEST_CASE("round trip on random formulas") {
  std::mt19937 rng(7);
  for (int i = 0; i < 500; i++) {
    Formula f = random_formula(rng, 5);
    CHECK(parse_formula(print_formula(f)) == f);
  }
}

TEST_CASE("expansion soundness on random operands") {
  std::mt19937 rng(11);
  for (int i = 0; i < 100; i++) {
    Formula a = random_formula(rng, 3), b = random_formula(rng, 3);
    std::string sa = "(" + a.str() + ")", sb = "(" + b.str() + ")";
    CHECK(parse_formula(sa + " \\/ " + sb) == Formula::disj(a, b));
    CHECK(parse_formula(sa + " -> " + sb) == Formula::impl(a, b));
    CHECK(parse_formula("<g>" + sa) == Formula::diam(a));
  }
}

TEST_CASE("degree is strictly monotone under constructors") {
  std::mt19937 rng(13);
  for (int i = 0; i < 100; i++) {
    Formula a = random_formula(rng, 4), b = random_formula(rng, 2);
    CHECK(degree(Formula::neg(a)) > degree(a));
    CHECK(degree(Formula::conj(a, b)) > degree(a));
    CHECK(degree(Formula::conj(a, b)) > degree(b));
    CHECK(degree(Formula::boxg(a)) > degree(a));
    CHECK(degree(Formula::boxr(a)) > degree(a));
  }
}

TEST_CASE("substitution instantiates atoms") {
  Formula f = parse_formula("[g](a -> b)");
  Formula g = substitute(f, {{"a", parse_formula("p /\\ q")}, {"b", Formula::bottom()}});
  CHECK(g == parse_formula("[g]((p /\\ q) -> false)"));
}
