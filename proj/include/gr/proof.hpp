#pragma once

#include "gr/sequent.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace gr {

enum class RuleId : uint8_t {
  Init, InitBot,
  AndL1, AndL2, AndR, NegL, NegR,
  ContrL, ContrR, WeakL, WeakR, Cut,
  EW, Split, Merge, BotRule,
  K, Four, BoxRight, KBlack, FourBlack, BlackR1, BlackL, BlackR2,
  ToDouble, ToArrow,
};

const char* rule_name(RuleId r);
std::optional<RuleId> rule_from_name(const std::string& s);
bool is_modal_black(RuleId r);  // KBlack, FourBlack, BlackR1, BlackL, BlackR2

// Pins a rule instance down to explicit occurrences. Field meaning per rule:
//   Init/InitBot/ToDouble/ToArrow : none
//   AndL1/AndL2  comp,pos     principal A/\B at conclusion comp, ante pos
//   NegL         comp,pos     principal -A at conclusion comp, ante pos
//   NegR         comp,pos     principal -A at conclusion comp, succ pos
//   ContrL/ContrR comp,pos    kept occurrence in the conclusion (ante/succ)
//   WeakL/WeakR  comp,pos     introduced occurrence in the conclusion
//   AndR         comp,pos (conclusion A/\B, succ) + lcomp,lpos / rcomp,rpos
//                (aux A in premise 0 succ, aux B in premise 1 succ)
//   Cut          lcomp,lpos (A in premise 0 succ), rcomp,rpos (A in premise 1
//                ante), cut_formula
//   EW           comp          the added component in the conclusion
//   Split        comp,comp2    the two result components in the conclusion
//   Merge        comp,comp2    the two merged components in the premise
//   BotRule      comp (deleted empty --> comp, premise idx), comp2 (a ==> comp)
//   K/Four/KBlack/FourBlack comp,pos  the ==> component (premise idx) and the
//                auxiliary formula's ante position in it
//   BoxRight/BlackR1/BlackL/BlackR2  comp   the ==> component (premise idx)
struct RuleApp {
  RuleId rule = RuleId::Init;
  int comp = -1, comp2 = -1;
  int pos = -1, pos2 = -1;
  int lcomp = -1, lpos = -1, rcomp = -1, rpos = -1;
  std::optional<Formula> cut_formula;
};

struct ProofNode;
using ProofPtr = std::shared_ptr<const ProofNode>;

struct ProofNode {
  Hyper conclusion;
  RuleApp app;
  std::vector<ProofPtr> premises;
};

ProofPtr mk_node(Hyper concl, RuleApp app, std::vector<ProofPtr> prem);

size_t proof_size(const ProofPtr& p);
size_t count_cuts(const ProofPtr& p);
bool cut_free(const ProofPtr& p);
void rules_used(const ProofPtr& p, std::map<RuleId, size_t>& out);

// Node addressing for CLI/tests: path of premise indices from the root.
using NodePath = std::vector<int>;
const ProofNode* node_at(const ProofPtr& root, const NodePath& path);
std::optional<NodePath> path_of(const ProofPtr& root, const ProofNode* n);

// JSON proof files (untrusted input; re-checked on load).
std::string proof_to_json(const ProofPtr& p);
ProofPtr proof_from_json(const std::string& text);
ProofPtr load_proof_file(const std::string& path);
void save_proof_file(const ProofPtr& p, const std::string& path);

}  // namespace gr
