#pragma once

#include "gr/normalize.hpp"

namespace gr {

// §3.2: elimination of the diagonal formula of a standard [g]:r or [r]:r1
// application.

struct StructuralViolation : std::runtime_error {
  explicit StructuralViolation(const std::string& m) : std::runtime_error(m) {}
};
struct NotStandard : std::runtime_error {
  explicit NotStandard(const std::string& m) : std::runtime_error(m) {}
};

struct DiagonalLeg {
  const ProofNode* L;  // K application introducing the diagonal [g]B
  const ProofNode* M;  // [g]:r / [r]:r1 above the lowest ==>-rule below L
  const ProofNode* N;  // that lowest ==>-rule
  Formula C;           // M's own diagonal base formula
};

struct DiagonalContext {
  const ProofNode* target = nullptr;  // I0
  Formula B;                          // diagonal is [g]B
  std::vector<DiagonalLeg> legs;      // (L_1 .. L_n)
  std::vector<const ProofNode*> weak_intros;  // iw introducers, removed first
};

DiagonalContext build_context(const ProofPtr& root, const ProofNode* I0, LineageCache& lc);

// Lemma 3 seed: the canonical replacement proof for Q_i at the instance
// formulas, padded to M_i's conclusion with the diagonal replaced by `repl`.
ProofPtr substitute_Qi(const DiagonalContext& ctx, size_t i,
                       const std::vector<Formula>& repl);

// Corollary 6: returns a proof of the subtree above I0's premise position in
// which the diagonal occurrence is gone: `nabla-Lambda --> | ... ==> B`.
// `cap` bounds n (the leg count); the recursion is memoized per leg subset.
ProofPtr eliminate_diagonal_premise(const ProofPtr& root, const ProofNode* I0,
                                    size_t cap = 16, TraceSink* trace = nullptr);

// Full-proof form: the subtree at I0 is replaced so that the diagonal of the
// (re-applied) target is introduced by iw only.
ProofPtr eliminate_diagonal(const ProofPtr& root, const ProofNode* I0,
                            size_t cap = 16, TraceSink* trace = nullptr);

}  // namespace gr
