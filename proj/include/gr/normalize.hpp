#pragma once

#include "gr/replay.hpp"

namespace gr {

// Lemma 2 machinery: tau-path labeling, permutation steps, and the
// standard-form normalization of [g]:r, [r]:r1, [r]:r2 and [r]:l.

enum class PathClass : uint8_t {
  Start,     // the rule introducing (or cutting off) the labeled turnstile
  Natural1,  // propositional / ic / iw with the labeled turnstile above+below
  Natural2,  // K / 4 / K# / 4# consuming from the labeled turnstile
  Removable, // classes (a), (b), (c): to be permuted below the target
  Target,    // the application under normalization
};

struct TauNode {
  const ProofNode* node;
  int comp;              // labeled component in the node's conclusion
  PathClass cls;
};

struct TauAnnotation {
  std::vector<TauNode> nodes;   // every application in some tau-path
  std::vector<const ProofNode*> starts;
  bool has_ew_start = false;
  bool has_blackr1_start = false;
  bool cut_barrier = false;  // a cut feeds the labeled turnstile
};

struct NotATarget : std::runtime_error {
  explicit NotATarget(const std::string& m) : std::runtime_error(m) {}
};
struct NoPermutationCase : std::runtime_error {
  explicit NoPermutationCase(const std::string& m) : std::runtime_error(m) {}
};
struct NotAdjacent : std::runtime_error {
  explicit NotAdjacent(const std::string& m) : std::runtime_error(m) {}
};
struct FuelExhausted : std::runtime_error {
  explicit FuelExhausted(const std::string& m) : std::runtime_error(m) {}
};

bool is_target_rule(RuleId r);  // BoxRight / BlackR1 / BlackR2 / BlackL

// Labels the turnstile of `target`'s premise and its ancestors; classifies
// every application the paths run through.
TauAnnotation label_tau_paths(const ProofPtr& root, const ProofNode* target,
                              LineageCache& lc);

// Exchanges `upper` (directly above `lower` on a tau-path of `lower`'s
// target) with `lower`; in the merge-versus-target case the target is
// duplicated and closed with merge + ic, per the paper's figures.
ProofPtr permute_down(const ProofPtr& root, const ProofNode* upper,
                      const ProofNode* lower);

enum class StandardFormKind {
  BoxR_Plain,
  BoxR_EnvK,
  BlackR1_Plain,
  BlackR2_Plain,
  BlackL_Plain,
};

std::optional<StandardFormKind> is_standard(const ProofPtr& root, const ProofNode* target);
// the single-formula --> components beside a standard target
std::vector<Formula> standard_nabla(const ProofPtr& root, const ProofNode* target);

struct TraceSink {
  virtual ~TraceSink() = default;
  virtual void step(const std::string& what, const ProofPtr& proof) = 0;
};

// Lemma 2: every target application either reaches a standard form or is
// eliminated by the displayed reductions. Preserves the end hypersequent.
ProofPtr standardize(const ProofPtr& p, TraceSink* trace = nullptr,
                     size_t fuel_factor = 10);

}  // namespace gr
