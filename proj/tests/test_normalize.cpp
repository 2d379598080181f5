#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gr/fixtures.hpp"
#include "gr/normalize.hpp"

using namespace gr;

namespace {

const ProofNode* find_target(const ProofPtr& root, const Formula& product,
                             bool envk_like) {
  // the BoxRight node producing `--> product`, preferring standard/non
  const ProofNode* hit = nullptr;
  std::function<void(const ProofNode*)> go = [&](const ProofNode* n) {
    if (n->app.rule == RuleId::BoxRight &&
        n->conclusion[n->app.comp].succ.size() == 1 &&
        n->conclusion[n->app.comp].succ[0] == product) {
      auto sf = is_standard(root, n);
      bool is_envk = sf && *sf == StandardFormKind::BoxR_EnvK;
      if (envk_like == is_envk) hit = n;
    }
    for (auto& q : n->premises) go(q.get());
  };
  go(root.get());
  return hit;
}

struct CountingTrace : TraceSink {
  std::vector<std::string> steps;
  void step(const std::string& what, const ProofPtr&) override { steps.push_back(what); }
};

}  // namespace

TEST_CASE("tau labeling on TR1 stage 0") {
  ProofPtr p = builtin_fixture("tr1_stage0");
  LineageCache lc;
  // the target is the single BoxRight node
  const ProofNode* t = nullptr;
  std::function<void(const ProofNode*)> go = [&](const ProofNode* n) {
    if (n->app.rule == RuleId::BoxRight) t = n;
    for (auto& q : n->premises) go(q.get());
  };
  go(p.get());
  REQUIRE(t);
  TauAnnotation ann = label_tau_paths(p, t, lc);
  // two ToDouble starts (over d --> d and e --> e) plus the BlackR1 start
  size_t to_double_starts = 0, blackr1_starts = 0;
  for (auto* s : ann.starts) {
    if (s->app.rule == RuleId::ToDouble) to_double_starts++;
    if (s->app.rule == RuleId::BlackR1) blackr1_starts++;
  }
  CHECK(to_double_starts == 2);
  CHECK(blackr1_starts == 1);
  CHECK(!ann.has_ew_start);
  CHECK(ann.has_blackr1_start);
  // the ew and merge applications sit in the path as removable
  size_t removable = 0;
  for (auto& tn : ann.nodes)
    if (tn.cls == PathClass::Removable) removable++;
  CHECK(removable >= 2);
  CHECK_THROWS_AS(label_tau_paths(p, p->premises[0].get(), lc), NotATarget);
}

TEST_CASE("is_standard distinguishes the TR1 stages") {
  Formula prod = parse_formula("[g](d /\\ e)");
  ProofPtr s0 = builtin_fixture("tr1_stage0");
  CHECK(find_target(s0, prod, false) != nullptr);
  CHECK(!is_standard(s0, find_target(s0, prod, false)).has_value());
  ProofPtr s3 = builtin_fixture("tr1_stage3");
  const ProofNode* plain_t = find_target(s3, prod, false);
  REQUIRE(plain_t);
  auto k = is_standard(s3, plain_t);
  REQUIRE(k.has_value());
  CHECK(*k == StandardFormKind::BoxR_Plain);
  auto nabla = standard_nabla(s3, plain_t);
  CHECK(nabla.size() == 2);
  const ProofNode* envk = find_target(s3, prod, true);
  REQUIRE(envk);
  CHECK(*is_standard(s3, envk) == StandardFormKind::BoxR_EnvK);
}

TEST_CASE("permute_down reproduces the TR1 stage moves") {
  // stage0 -> one K-past-merge style exchange keeps the proof valid
  ProofPtr p = builtin_fixture("tr1_stage0");
  LineageCache lc;
  // find the K node and the merge just below it? In our transcription the
  // merge is *above* K; instead exercise permute on the ew/BlackR1 pair.
  const ProofNode* up = nullptr;
  const ProofNode* low = nullptr;
  std::function<void(const ProofNode*)> go = [&](const ProofNode* n) {
    for (auto& q : n->premises) {
      if (n->app.rule == RuleId::K && q->app.rule == RuleId::Merge) {
        up = q.get();
        low = n;
      }
      go(q.get());
    }
  };
  go(p.get());
  REQUIRE(up);
  ProofPtr swapped = permute_down(p, up, low);
  CHECK(check_proof(swapped).valid);
  CHECK(hs_equal(swapped->conclusion, p->conclusion));
}

TEST_CASE("standardize normalizes TR1 stage 0 per the paper") {
  ProofPtr p = builtin_fixture("tr1_stage0");
  CountingTrace trace;
  ProofPtr out = standardize(p, &trace);
  Report rep = check_proof(out);
  if (!rep.valid) { INFO(rep.first_error->second.clause); }
  CHECK(rep.valid);
  CHECK(hs_equal(out->conclusion, p->conclusion));
  CHECK(count_cuts(out) == count_cuts(p));
  // all four target kinds standard afterwards
  std::function<void(const ProofNode*)> audit = [&](const ProofNode* n) {
    if (is_target_rule(n->app.rule)) CHECK(is_standard(out, n).has_value());
    for (auto& q : n->premises) audit(q.get());
  };
  audit(out.get());
  // I of the plain standard form with nabla = {[r]d, [g]e}
  Formula prod = parse_formula("[g](d /\\ e)");
  const ProofNode* plain = find_target(out, prod, false);
  REQUIRE(plain);
  CHECK(*is_standard(out, plain) == StandardFormKind::BoxR_Plain);
  auto nabla = standard_nabla(out, plain);
  REQUIRE(nabla.size() == 2);
  CHECK(multiset_eq(nabla, {parse_formula("[r]d"), parse_formula("[g]e")}));
  // I' present in the environment-K form
  const ProofNode* envk = find_target(out, prod, true);
  REQUIRE(envk);
  CHECK(*is_standard(out, envk) == StandardFormKind::BoxR_EnvK);
  // the trace passes the duplication step
  bool dup = false;
  for (auto& s : trace.steps)
    if (s.find("permute Merge") != std::string::npos && s.find("below BoxRight") != std::string::npos) dup = true;
  CHECK(dup);
}

TEST_CASE("standardize leaves already standard proofs unchanged") {
  ProofPtr p = builtin_fixture("tr1_stage3");
  ProofPtr out = standardize(p);
  CHECK(out == p);  // node identity: fixpoint
}

TEST_CASE("standardize normalizes the other fixtures harmlessly") {
  for (auto& name : fixture_names()) {
    INFO(name);
    ProofPtr p = builtin_fixture(name);
    ProofPtr out = standardize(p);
    Report rep = check_proof(out);
    if (!rep.valid) { INFO(rep.first_error->second.clause); }
    CHECK(rep.valid);
    CHECK(hs_equal(out->conclusion, p->conclusion));
    CHECK(count_cuts(out) == count_cuts(p));
  }
}
