#include "gr/render.hpp"

#include <sstream>

namespace gr {

namespace {

void text_node(const ProofPtr& p, std::ostringstream& out, std::string indent) {
  out << indent << p->conclusion.str() << "   [" << rule_name(p->app.rule) << "]\n";
  for (auto& q : p->premises) text_node(q, out, indent + "  ");
}

std::string latex_formula(std::string s) {
  // translate the ASCII syntax into math-mode macros
  std::string out;
  for (size_t i = 0; i < s.size(); i++) {
    if (s.compare(i, 3, "[g]") == 0) {
      out += "\\Box ";
      i += 2;
    } else if (s.compare(i, 3, "[r]") == 0) {
      out += "\\blacksquare ";
      i += 2;
    } else if (s.compare(i, 3, "-->") == 0) {
      out += "\\rightarrow ";
      i += 2;
    } else if (s.compare(i, 3, "==>") == 0) {
      out += "\\Rightarrow ";
      i += 2;
    } else if (s.compare(i, 2, "/\\") == 0) {
      out += "\\wedge ";
      i += 1;
    } else if (s.compare(i, 5, "false") == 0) {
      out += "\\bot ";
      i += 4;
    } else if (s[i] == '-') {
      out += "\\neg ";
    } else if (s[i] == '|') {
      out += "\\mid ";
    } else {
      out += s[i];
    }
  }
  return out;
}

std::string latex_rule(RuleId r) {
  switch (r) {
    case RuleId::Init: return "";
    case RuleId::InitBot: return "";
    case RuleId::AndL1:
    case RuleId::AndL2: return "\\wedge:l";
    case RuleId::AndR: return "\\wedge:r";
    case RuleId::NegL: return "\\neg:l";
    case RuleId::NegR: return "\\neg:r";
    case RuleId::ContrL:
    case RuleId::ContrR: return "ic";
    case RuleId::WeakL:
    case RuleId::WeakR: return "iw";
    case RuleId::Cut: return "cut";
    case RuleId::EW: return "ew";
    case RuleId::Split: return "split";
    case RuleId::Merge: return "merge";
    case RuleId::BotRule: return "\\bot";
    case RuleId::K: return "K";
    case RuleId::Four: return "4";
    case RuleId::BoxRight: return "\\Box:r";
    case RuleId::KBlack: return "K^{\\blacksquare}";
    case RuleId::FourBlack: return "4^{\\blacksquare}";
    case RuleId::BlackR1: return "\\blacksquare:r_1";
    case RuleId::BlackL: return "\\blacksquare:l";
    case RuleId::BlackR2: return "\\blacksquare:r_2";
    case RuleId::ToDouble: return "\\Rightarrow";
    case RuleId::ToArrow: return "\\rightarrow";
  }
  return "";
}

void latex_node(const ProofPtr& p, std::ostringstream& out) {
  for (auto& q : p->premises) latex_node(q, out);
  size_t n = p->premises.size();
  if (n == 0)
    out << "\\AxiomC{}\n";
  std::string label = latex_rule(p->app.rule);
  if (!label.empty())
    out << "\\RightLabel{$\\scriptstyle " << label << "$}\n";
  const char* inf = n == 2 ? "\\BinaryInfC" : "\\UnaryInfC";
  out << inf << "{$" << latex_formula(p->conclusion.str()) << "$}\n";
}

}  // namespace

std::string render_text(const ProofPtr& p) {
  std::ostringstream out;
  text_node(p, out, "");
  return out.str();
}

std::string render_latex(const ProofPtr& p) {
  std::ostringstream out;
  out << "\\documentclass{standalone}\n"
      << "\\usepackage{bussproofs}\n"
      << "\\usepackage{amssymb}\n"
      << "\\begin{document}\n"
      << "\\begin{prooftree}\n";
  latex_node(p, out);
  out << "\\end{prooftree}\n\\end{document}\n";
  return out.str();
}

}  // namespace gr
