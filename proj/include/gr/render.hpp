#pragma once

#include "gr/proof.hpp"

namespace gr {

// Deterministic renderers; neither alters proof content.
std::string render_text(const ProofPtr& p);
std::string render_latex(const ProofPtr& p);  // standalone bussproofs document

}  // namespace gr
