#pragma once

#include "gr/formula.hpp"

#include <map>
#include <set>

namespace gr {

// Modal-atom abstraction: the frontier of atoms, false, and maximal [g]/[r]
// subformulas. Truth-table reasoning treats the boxed formulas as opaque.
void modal_atoms(const Formula& f, std::set<Formula, FormulaLess>& out);

bool eval_modal(const Formula& f, const std::map<Formula, bool, FormulaLess>& env);

// Tautology / propositional-equivalence over the modal-atom abstraction.
bool is_tautology(const Formula& f);
bool prop_equivalent(const Formula& a, const Formula& b);

}  // namespace gr
