#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gr/build.hpp"
#include "gr/pl.hpp"

using namespace gr;

namespace {

CheckResult rule_ok(const char* concl, RuleApp app, std::vector<std::string> prems) {
  Hyper c = parse_hyper(concl);
  std::vector<Hyper> ph;
  for (auto& s : prems) ph.push_back(parse_hyper(s));
  std::vector<const Hyper*> pp;
  for (auto& h : ph) pp.push_back(&h);
  return check_rule(c, app, pp);
}

}  // namespace

TEST_CASE("K instance from the schema") {
  RuleApp app;
  app.rule = RuleId::K;
  app.comp = 0;
  app.pos = 0;
  CHECK(rule_ok("[g]p --> | q ==> r", app, {"p, q ==> r"}).ok);
  // wrong kind of active component
  CHECK(!rule_ok("[g]p --> | q --> r", app, {"p, q --> r"}).ok);
}

TEST_CASE("BoxRight needs the diagonal premise exactly") {
  RuleApp app;
  app.rule = RuleId::BoxRight;
  app.comp = 1;
  CHECK(rule_ok("[r]a --> | --> [g]a", app, {"[r]a --> | [g]a ==> a"}).ok);
  CHECK(!rule_ok("[r]a --> | --> [g]a", app, {"[r]a --> | [g]a, p ==> a"}).ok);
  CHECK(!rule_ok("[r]a --> | --> [g]a", app, {"[r]a --> | [g]b ==> a"}).ok);
}

TEST_CASE("ToDouble requires a singleton premise") {
  RuleApp app;
  app.rule = RuleId::ToDouble;
  CHECK(rule_ok("p ==> p", app, {"p --> p"}).ok);
  auto r = rule_ok("p ==> p | q -->", app, {"p --> p | q -->"});
  CHECK(!r.ok);
  CHECK(r.error->code == ErrCode::RuleMismatch);
}

TEST_CASE("initial sequents carry no environment") {
  RuleApp app;
  app.rule = RuleId::Init;
  CHECK(rule_ok("p --> p", app, {}).ok);
  CHECK(!rule_ok("p --> p | q -->", app, {}).ok);
  CHECK(!rule_ok("p, q --> p", app, {}).ok);
  RuleApp ib;
  ib.rule = RuleId::InitBot;
  CHECK(rule_ok("false -->", ib, {}).ok);
  CHECK(!rule_ok("false --> false", ib, {}).ok);
}

TEST_CASE("cut requires its formula and kind uniformity") {
  RuleApp app;
  app.rule = RuleId::Cut;
  app.lcomp = 0;
  app.lpos = 0;
  app.rcomp = 0;
  app.rpos = 0;
  app.cut_formula = parse_formula("p");
  CHECK(rule_ok("q --> r", app, {"q --> p", "p --> r"}).ok);
  auto bad = rule_ok("q --> r", app, {"q ==> p", "p --> r"});
  CHECK(!bad.ok);
  CHECK(bad.error->code == ErrCode::KindMismatch);
  RuleApp nof = app;
  nof.cut_formula = std::nullopt;
  CHECK(!rule_ok("q --> r", nof, {"q --> p", "p --> r"}).ok);
}

TEST_CASE("merge rejects mixed kinds") {
  RuleApp app;
  app.rule = RuleId::Merge;
  app.comp = 0;
  app.comp2 = 1;
  CHECK(rule_ok("p, q --> ", app, {"p --> | q -->"}).ok);
  auto r = rule_ok("p, q ==> ", app, {"p ==> | q -->"});
  CHECK(!r.ok);
  CHECK(r.error->code == ErrCode::KindMismatch);
}

TEST_CASE("bot rule needs a witness and an empty component") {
  RuleApp app;
  app.rule = RuleId::BotRule;
  app.comp = 1;
  app.comp2 = 0;
  CHECK(rule_ok("p ==> q", app, {"p ==> q | -->"}).ok);
  CHECK(!rule_ok("p ==> q", app, {"p ==> q | r -->"}).ok);
  RuleApp noctx;
  noctx.rule = RuleId::BotRule;
  noctx.comp = 1;
  noctx.comp2 = 0;
  auto r = rule_ok("p --> q", noctx, {"p --> q | -->"});
  CHECK(!r.ok);
}

TEST_CASE("index out of range is reported") {
  RuleApp app;
  app.rule = RuleId::K;
  app.comp = 5;
  app.pos = 0;
  auto r = rule_ok("[g]p --> | q ==> r", app, {"p, q ==> r"});
  CHECK(!r.ok);
  CHECK(r.error->code == ErrCode::IndexOutOfRange);
}

TEST_CASE("check_proof on a built derivation and its report") {
  // Init / ToDouble / K / WeakL / BoxRight / Merge : axiom-4 shape
  ProofPtr r = b_to_double(b_init(parse_formula("a")));
  r = b_modal(r, RuleId::KBlack, 0, 0);
  r = b_weak_l(r, 1, parse_formula("[g]a"));
  r = b_box_right(r, 1);
  r = b_merge(r, 0, 1);
  CHECK(hs_equal(r->conclusion, parse_hyper("[r]a --> [g]a")));
  Report rep = check_proof(r);
  CHECK(rep.valid);
  CHECK(rep.cut_count == 0);
  CHECK(rep.rules[RuleId::KBlack] == 1);
  CHECK(cut_free(r));
}

TEST_CASE("proof JSON round trip re-checks") {
  ProofPtr r = b_to_double(b_init(parse_formula("p")));
  r = b_modal(r, RuleId::K, 0, 0);
  std::string js = proof_to_json(r);
  ProofPtr back = proof_from_json(js);
  CHECK(check_proof(back).valid);
  CHECK(hs_equal(back->conclusion, r->conclusion));
}

TEST_CASE("corrupted rule name or structure is rejected") {
  ProofPtr r = b_to_double(b_init(parse_formula("p")));
  std::string js = proof_to_json(r);
  std::string bad = js;
  bad.replace(bad.find("ToDouble"), 8, "ToDoubly");
  CHECK_THROWS(proof_from_json(bad));
}

TEST_CASE("pl_prove finds propositional proofs and rejects non-tautologies") {
  auto p1 = pl_prove(parse_sequent("p /\\ q --> q /\\ p"));
  REQUIRE(p1.has_value());
  CHECK(check_proof(*p1).valid);
  CHECK(cut_free(*p1));
  CHECK((*p1)->conclusion.size() == 1);
  CHECK(!pl_prove(parse_sequent("p --> q")).has_value());
  auto p2 = pl_prove(parse_sequent("--> -(p /\\ -p)"));
  REQUIRE(p2.has_value());
  CHECK(check_proof(*p2).valid);
  // modal subformulas are opaque atoms
  auto p3 = pl_prove(parse_sequent("[g]p /\\ [r]q --> [r]q"));
  REQUIRE(p3.has_value());
  CHECK(check_proof(*p3).valid);
  CHECK(!pl_prove(parse_sequent("[g]p --> [g]q")).has_value());
  auto p4 = pl_prove(parse_sequent("false --> p"));
  REQUIRE(p4.has_value());
  CHECK(check_proof(*p4).valid);
}
