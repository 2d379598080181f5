#pragma once

#include "gr/check.hpp"

namespace gr {

// Forward constructors. Each builds a node whose conclusion is the canonical
// computed one, so built proofs always pass check_proof. They throw CheckFail
// on misuse; transformations treat that as an internal invariant failure.

ProofPtr b_init(const Formula& a);
ProofPtr b_init_bot();

ProofPtr b_and_l1(ProofPtr p, int comp, int pos, const Formula& right);
ProofPtr b_and_l2(ProofPtr p, int comp, int pos, const Formula& left);
ProofPtr b_and_r(ProofPtr l, ProofPtr r, int lcomp, int lpos, int rcomp, int rpos);
ProofPtr b_neg_l(ProofPtr p, int comp, int succ_pos);
ProofPtr b_neg_r(ProofPtr p, int comp, int ante_pos);
ProofPtr b_contr_l(ProofPtr p, int comp, int pos1, int pos2);
ProofPtr b_contr_r(ProofPtr p, int comp, int pos1, int pos2);
ProofPtr b_weak_l(ProofPtr p, int comp, const Formula& f);
ProofPtr b_weak_r(ProofPtr p, int comp, const Formula& f);
ProofPtr b_cut(ProofPtr l, ProofPtr r, int lcomp, int lpos, int rcomp, int rpos,
               const Formula& a);
ProofPtr b_ew(ProofPtr p, Sequent s);
ProofPtr b_split(ProofPtr p, int comp, const std::vector<int>& ante_second,
                 const std::vector<int>& succ_second);
ProofPtr b_merge(ProofPtr p, int c1, int c2);
ProofPtr b_bot_rule(ProofPtr p, int deleted, int witness);
ProofPtr b_modal(ProofPtr p, RuleId which, int comp, int pos);  // K/Four/KBlack/FourBlack
ProofPtr b_box_right(ProofPtr p, int comp);
ProofPtr b_black_r1(ProofPtr p, int comp);
ProofPtr b_black_l(ProofPtr p, int comp);
ProofPtr b_black_r2(ProofPtr p, int comp);
ProofPtr b_to_double(ProofPtr p);
ProofPtr b_to_arrow(ProofPtr p);

// -- compound helpers ---------------------------------------------------------

int find_in(const std::vector<Formula>& v, const Formula& f);       // first match or -1
int comp_of_id(const Hyper& h, ComponentId id);                      // -1 if absent

// From a premise with A at (comp,ante,posA) and B at (comp,ante,posB) derive
// the conclusion with one A/\B in their place (AndL1, AndL2, ContrL).
ProofPtr b_and_l_both(ProofPtr p, int comp, int posA, int posB);

// Serial merges of the listed components (premise indices) into the first.
ProofPtr b_merge_fold(ProofPtr p, std::vector<int> comps);

// Weakenings/contractions inside component `comp` (addressed by id so the
// index survives the intermediate steps) until its content equals `target`
// as a multiset. Requires support(current) ⊆ support(target) on both sides.
ProofPtr b_adjust_comp(ProofPtr p, ComponentId id, const Sequent& target);

// Fold duplicate components and pad with ew/iw until the conclusion is
// hs_equal to `target`. Every current component must map onto some target
// component of the same kind whose formula support contains its own.
// `pins` forces specific components (by id) onto specific target indices.
ProofPtr conform(ProofPtr p, const Hyper& target,
                 const std::vector<std::pair<ComponentId, int>>& pins = {});

// Uniform substitution of formulas for atoms through a whole proof.
ProofPtr substitute_proof(const ProofPtr& p,
                          const std::vector<std::pair<std::string, Formula>>& map);

}  // namespace gr
