#pragma once

#include "gr/check.hpp"

#include <set>
#include <unordered_map>

namespace gr {

enum class Side : uint8_t { Ante, Succ };

struct Occ {
  int comp = -1;
  Side side = Side::Ante;
  int pos = -1;
  bool operator==(const Occ& o) const {
    return comp == o.comp && side == o.side && pos == o.pos;
  }
};

// Per-node ancestry information, expressed in the stated layouts of the node
// and its premises. An occurrence with no parents is introduced at the node
// (principal formula, weakening, initial sequent, or a fresh component).
struct NodeLineage {
  // parents[comp][side][pos] -> list of (premise index, occurrence)
  std::vector<std::array<std::vector<std::vector<std::pair<int, Occ>>>, 2>> occ;
  // component-level content flow: conclusion comp -> (premise, premise comp)
  std::vector<std::vector<std::pair<int, int>>> comp;
  // conclusion components whose turnstile is introduced at this node
  std::vector<bool> fresh_turnstile;
};

class LineageCache {
 public:
  const NodeLineage& get(const ProofNode* n);

 private:
  std::unordered_map<const ProofNode*, NodeLineage> cache_;
};

std::vector<std::pair<int, Occ>> occ_parents(const ProofNode& n, const Occ& o,
                                             LineageCache& lc);
std::vector<std::pair<int, int>> comp_parents(const ProofNode& n, int c, LineageCache& lc);
bool turnstile_introduced(const ProofNode& n, int c, LineageCache& lc);

// Walks the ancestry of `o` (an occurrence in n's conclusion) and collects
// every node that introduces an ancestor occurrence, together with the
// introduced occurrence in that node's conclusion.
struct IntroSite {
  const ProofNode* node;
  Occ occ;
};
std::vector<IntroSite> find_introducers(const ProofNode* n, const Occ& o, LineageCache& lc);

}  // namespace gr
