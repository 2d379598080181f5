#pragma once

#include "gr/build.hpp"

namespace gr {

// Bounded backward cut-free proof search and the GL-conservativity extractor.

struct SearchConfig {
  size_t max_depth = 8;
  bool enable_four = true;   // Four and FourBlack
  bool enable_black = true;  // every [r] rule
  bool loop_check = true;
};

std::optional<ProofPtr> prove_cutfree(const Hyper& goal, const SearchConfig& cfg);

struct InvalidInput : std::runtime_error {
  explicit InvalidInput(const std::string& m) : std::runtime_error(m) {}
};

// Corollary 7: a valid cut-free proof avoiding [r] everywhere is a GL proof.
std::optional<ProofPtr> gl_extract(const ProofPtr& p);

}  // namespace gr
