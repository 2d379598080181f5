#pragma once

#include "gr/proof.hpp"

#include <map>

namespace gr {

enum class ErrCode : uint8_t { RuleMismatch, KindMismatch, IndexOutOfRange };

struct CheckError {
  ErrCode code;
  std::string clause;  // names the violated schema clause
};

struct CheckResult {
  bool ok = true;
  std::optional<CheckError> error;
};

// Validates one rule instance. Indices in `app` address the stated layouts:
// for formula rules the conclusion (the premise is compared against the
// expected one), for structural/modal rules the premises (the conclusion is
// compared against the computed one). Hypersequent comparison is multiset
// equality throughout, matching the permutation identification.
CheckResult check_rule(const Hyper& conclusion, const RuleApp& app,
                       const std::vector<const Hyper*>& premises);

struct Report {
  bool valid = false;
  size_t cut_count = 0;
  size_t nodes = 0;
  std::map<RuleId, size_t> rules;
  std::optional<std::pair<NodePath, CheckError>> first_error;
};

Report check_proof(const ProofPtr& p);

// Internal engine shared with the builders: either the expected premise of a
// conclusion-indexed rule or the computed conclusion of a premise-indexed
// rule. Throws CheckFail on schema violations.
struct CheckFail {
  CheckError err;
};

// Computes the canonical conclusion of a premise-indexed rule, or validates
// and returns the stated conclusion for Init/InitBot and conclusion-indexed
// rules (after checking the premise). Used by the builders so that built
// nodes are canonical by construction.
Hyper rule_conclusion(RuleId rule, const RuleApp& app,
                      const std::vector<const Hyper*>& premises,
                      const Hyper* stated /* may be null for premise-indexed rules */);

}  // namespace gr
