#pragma once

#include "gr/build.hpp"
#include "gr/lineage.hpp"

#include <map>
#include <set>

namespace gr {

// Replays a subproof after replacing some of its upper nodes, carrying the
// replacements' component and formula changes down to the root. Formula
// lookups are by content (multiset semantics), so deleted occurrences simply
// fail to be found and the consuming rule is skipped; added formulas ride
// along as side material.

struct TopRepl {
  ProofPtr proof;
  // original conclusion comp index -> components (ids in proof->conclusion)
  // standing for it; unmentioned original comps are treated as dropped, and
  // unmentioned replacement comps ride as extra environment.
  std::map<int, std::vector<ComponentId>> comp_map;
};

struct ReplayCtx {
  std::map<const ProofNode*, TopRepl> tops;
  std::set<const ProofNode*> skip_weak;   // iw nodes whose formula is dropped
  std::set<const ProofNode*> skip_contr;  // ic nodes to bypass (keep both copies)
  // single-premise formula rules to bypass entirely (their principal is never
  // built; the auxiliary material flows on): NegL/NegR/AndL1/AndL2
  std::set<const ProofNode*> skip_logic;
  // formula to weaken into the component after a skipped AndL (the missing
  // conjunct of the unfolded conjunction)
  std::map<const ProofNode*, Formula> inject_after_skip;
  // two-premise AndR nodes to bypass: continue with the given premise (0/1),
  // dropping the other branch (the final conform restores its padding)
  std::map<const ProofNode*, int> and_pick;
  // ew nodes whose added component loses the listed positions
  std::map<const ProofNode*, std::vector<std::pair<Side, int>>> shrink_ew;
  LineageCache* lineage = nullptr;        // required
};

struct ReplayRes {
  ProofPtr proof;
  // image of each original conclusion component (ids in proof->conclusion);
  // empty vector = component dropped
  std::vector<std::vector<ComponentId>> image;
};

struct ReplayError : std::runtime_error {
  explicit ReplayError(const std::string& m) : std::runtime_error(m) {}
};

ReplayRes replay(const ProofPtr& n, ReplayCtx& ctx);

// Rebuilds `root` with the subtree at `site` replaced by `repl` (which must
// prove an hs_equal hypersequent). Premise apps are index-based, so hs_equal
// keeps the parent applications valid.
ProofPtr graft(const ProofPtr& root, const ProofNode* site, ProofPtr repl);

}  // namespace gr
