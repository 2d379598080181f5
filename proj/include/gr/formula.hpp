#pragma once

#include <memory>
#include <string>
#include <vector>
#include <cstdint>
#include <stdexcept>

namespace gr {

// Formulas of GR: atoms, false, -, /\, [g] (Godel box), [r] (Rosser box).
// Derived connectives are expanded at parse time; the kernel never sees them.
enum class FKind : uint8_t { Atom, Bottom, Neg, And, BoxG, BoxR };

class Formula {
public:
  Formula() = default;  // null handle; only parse/factories make real ones

  static Formula atom(const std::string& name);
  static Formula bottom();
  static Formula neg(Formula a);
  static Formula conj(Formula a, Formula b);
  static Formula boxg(Formula a);
  static Formula boxr(Formula a);

  // Sugar, expanded on construction.
  static Formula impl(Formula a, Formula b);  // -(a /\ -b)
  static Formula disj(Formula a, Formula b);  // -(-a /\ -b)
  static Formula diam(Formula a);             // -[g]-a

  FKind kind() const { return node_->kind; }
  const std::string& name() const { return node_->name; }
  Formula left() const { return Formula(node_->left); }   // child of Neg/BoxG/BoxR too
  Formula right() const { return Formula(node_->right); }
  Formula child() const { return Formula(node_->left); }

  bool is_null() const { return node_ == nullptr; }
  size_t degree() const { return node_->degree; }  // count of -, /\, [g], [r]
  size_t hash() const { return node_->hash; }

  bool operator==(const Formula& o) const;
  bool operator!=(const Formula& o) const { return !(*this == o); }
  // Total structural order, used for multiset normalization.
  static int cmp(const Formula& a, const Formula& b);
  bool operator<(const Formula& o) const { return cmp(*this, o) < 0; }

  std::string str() const;  // canonical fully parenthesized text

private:
  struct Node {
    FKind kind;
    std::string name;
    std::shared_ptr<const Node> left, right;
    size_t degree = 0;
    size_t hash = 0;
  };
  std::shared_ptr<const Node> node_;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make(FKind k, std::string name, Formula l, Formula r);
};

struct FormulaLess {
  bool operator()(const Formula& a, const Formula& b) const { return Formula::cmp(a, b) < 0; }
};

// Thrown by parse_formula / sequent parsing with a byte offset into the input.
struct SyntaxError : std::runtime_error {
  size_t offset;
  SyntaxError(const std::string& msg, size_t off)
      : std::runtime_error(msg + " at offset " + std::to_string(off)), offset(off) {}
};

Formula parse_formula(const std::string& text);
inline std::string print_formula(const Formula& f) { return f.str(); }
inline size_t degree(const Formula& f) { return f.degree(); }

// Uniform substitution of formulas for atoms; used to instantiate schematic
// fixtures and axiom schemata.
Formula substitute(const Formula& f, const std::vector<std::pair<std::string, Formula>>& map);

}  // namespace gr
