#pragma once

#include "gr/hilbert.hpp"

namespace gr {

// The paper-figure derivations, built with the forward constructors at the
// given instance formulas. Used by the translator and, at schematic atoms,
// frozen into the fixtures/ directory.
ProofPtr fx_ax2(const Formula& a, const Formula& b);  // [g]-(A/\-B), [g]A --> [g]B
ProofPtr fx_ax3(const Formula& a);                    // [g]-([g]A/\-A) --> [g]A
ProofPtr fx_ax4(const Formula& a);                    // [r]A --> [g]A
ProofPtr fx_ax5(const Formula& a);                    // [g]A --> [g][r]A
ProofPtr fx_ax6(const Formula& a);                    // [g]A --> [r]A, [g]false
ProofPtr fx_ax7(const Formula& a);                    // [g]-A --> [g]-[r]A
ProofPtr fx_nec(ProofPtr base);                       // --> [g]A from --> A
ProofPtr fx_refl(ProofPtr base);                      // --> A from --> [g]A (one cut)

struct UnknownFixture : std::runtime_error {
  explicit UnknownFixture(const std::string& m) : std::runtime_error(m) {}
};

std::vector<std::string> fixture_names();
// paper anchor text for the manifest / `fixtures` subcommand
std::string fixture_anchor(const std::string& name);

// In-memory construction of a catalog fixture (the generator and the tests
// use this to cross-check the files on disk).
ProofPtr builtin_fixture(const std::string& name);

// Catalog access per the published file layout: fixtures/<name>.json.
ProofPtr fixture(const std::string& name, const std::string& dir);

}  // namespace gr
