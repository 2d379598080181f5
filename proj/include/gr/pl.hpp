#pragma once

#include "gr/build.hpp"

#include <optional>

namespace gr {

// Backward propositional prover for single-component --> goals, treating
// modal subformulas as opaque atoms. Returns a cut-free proof using only
// Init/InitBot/AndL*/AndR/NegL/NegR/ContrL/ContrR/WeakL/WeakR, or nothing
// when the goal is not a tautology-sequent.
std::optional<ProofPtr> pl_prove(const Sequent& goal);

}  // namespace gr
