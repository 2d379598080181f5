#pragma once

#include "gr/diagonal.hpp"

namespace gr {

// §3.3 top-down cut elimination.

// Initial-sequent reduction: only `p --> p` and `[r]C --> [r]C` remain as
// Init instances; compound forms are derived.
ProofPtr reduce_initial_sequents(const ProofPtr& p);

struct CutSite {
  const ProofNode* node = nullptr;
  Formula formula;
  SeqKind turnstile;  // of the cut's merged component ("the turnstile of P")
};

struct WrongShape : std::runtime_error {
  explicit WrongShape(const std::string& m) : std::runtime_error(m) {}
};

// Finds an uppermost cut (leftmost tie-break); none when cut-free.
std::optional<CutSite> uppermost_cut(const ProofPtr& p);

// Buss reduction: one unfolding of a Neg or And cut into cuts on proper
// subformulas. Both subproofs must be cut-free.
ProofPtr buss_reduce(const ProofPtr& root, const CutSite& cut);

// Fact 1.1/2.1 path repairs: removes turnstile-rule pairs from the
// introducer paths of the cut occurrences so the Facts hold.
ProofPtr enforce_facts(const ProofPtr& root, const CutSite& cut);

// One full elimination of an atomic / bottom / [g]B / [r]B cut whose
// subproofs are cut-free (runs facts, standardization and the diagonal
// elimination internally as required). New cuts only on strictly smaller
// formulas.
ProofPtr eliminate_one_cut(const ProofPtr& root, const CutSite& cut,
                           TraceSink* trace = nullptr);

struct ElimStats {
  size_t steps = 0;
  size_t buss_steps = 0;
  size_t cases_run = 0;
  size_t fuel_left = 0;
};

struct ElimFuelExhausted : std::runtime_error {
  ProofPtr snapshot;
  ElimFuelExhausted(std::string m, ProofPtr s)
      : std::runtime_error(std::move(m)), snapshot(std::move(s)) {}
};

// Theorem 2 driver: valid input -> valid cut-free proof of an hs_equal end
// hypersequent. The cut-degree multiset strictly decreases at every step.
ProofPtr eliminate_cuts(const ProofPtr& p, size_t fuel = 100000,
                        TraceSink* trace = nullptr, ElimStats* stats = nullptr);

}  // namespace gr
