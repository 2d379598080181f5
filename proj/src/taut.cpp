#include "gr/taut.hpp"

#include <functional>
#include <stdexcept>
#include <vector>

namespace gr {

void modal_atoms(const Formula& f, std::set<Formula, FormulaLess>& out) {
  switch (f.kind()) {
    case FKind::Atom:
    case FKind::BoxG:
    case FKind::BoxR: out.insert(f); return;
    case FKind::Bottom: return;
    case FKind::Neg: modal_atoms(f.child(), out); return;
    case FKind::And:
      modal_atoms(f.left(), out);
      modal_atoms(f.right(), out);
      return;
  }
}

bool eval_modal(const Formula& f, const std::map<Formula, bool, FormulaLess>& env) {
  switch (f.kind()) {
    case FKind::Atom:
    case FKind::BoxG:
    case FKind::BoxR: return env.at(f);
    case FKind::Bottom: return false;
    case FKind::Neg: return !eval_modal(f.child(), env);
    case FKind::And: return eval_modal(f.left(), env) && eval_modal(f.right(), env);
  }
  return false;
}

static bool for_all_assignments(const std::set<Formula, FormulaLess>& atoms,
                                const std::function<bool(const std::map<Formula, bool, FormulaLess>&)>& pred) {
  std::vector<Formula> v(atoms.begin(), atoms.end());
  if (v.size() > 24) throw std::runtime_error("truth table oracle: too many modal atoms");
  size_t n = size_t{1} << v.size();
  for (size_t bits = 0; bits < n; bits++) {
    std::map<Formula, bool, FormulaLess> env;
    for (size_t i = 0; i < v.size(); i++) env[v[i]] = (bits >> i) & 1;
    if (!pred(env)) return false;
  }
  return true;
}

bool is_tautology(const Formula& f) {
  std::set<Formula, FormulaLess> atoms;
  modal_atoms(f, atoms);
  return for_all_assignments(atoms,
                             [&](const auto& env) { return eval_modal(f, env); });
}

bool prop_equivalent(const Formula& a, const Formula& b) {
  std::set<Formula, FormulaLess> atoms;
  modal_atoms(a, atoms);
  modal_atoms(b, atoms);
  return for_all_assignments(atoms, [&](const auto& env) {
    return eval_modal(a, env) == eval_modal(b, env);
  });
}

}  // namespace gr
