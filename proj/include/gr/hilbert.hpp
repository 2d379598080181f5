#pragma once

#include "gr/pl.hpp"

namespace gr {

// The axiomatic system GR_AX: axioms 1-7 plus modus ponens, necessitation,
// and reflection.
enum class JustKind : uint8_t { Axiom, MP, Nec, Refl };

struct AxStep {
  Formula formula;
  JustKind kind = JustKind::Axiom;
  int axiom = 0;      // 1..7 for Axiom
  int from = -1;      // MP minor / Nec / Refl source step
  int imp = -1;       // MP major step (the implication)
};

struct AxProof {
  std::vector<AxStep> steps;
};

struct AxReport {
  bool ok = true;
  std::vector<std::string> errors;  // "step k: BadAxiomInstance" etc.
};

AxReport check_ax_proof(const AxProof& p);

// Schema instance test for axioms 2..7 (after derived-connective expansion).
bool matches_axiom(int axiom, const Formula& f);

struct TranslationFailure : std::runtime_error {
  explicit TranslationFailure(const std::string& m) : std::runtime_error(m) {}
};

// Theorem 1, GR_AX -> GR_H direction: a proof of `--> F` for the final
// formula F. Requires check_ax_proof(p).ok.
ProofPtr translate_ax_to_hyper(const AxProof& p);

// AxProof JSON: a list of {"formula": ..., "just": {"kind": ...}} steps.
AxProof axproof_from_json(const std::string& text);
std::string axproof_to_json(const AxProof& p);
AxProof load_axproof_file(const std::string& path);

}  // namespace gr
