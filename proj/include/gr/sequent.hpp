#pragma once

#include "gr/formula.hpp"

#include <atomic>
#include <map>
#include <vector>

namespace gr {

enum class SeqKind : uint8_t { Arrow, DoubleArrow };  // --> and ==>

struct KindMismatch : std::runtime_error {
  KindMismatch(const std::string& what) : std::runtime_error(what) {}
};

// A sequent: a turnstile kind plus two formula multisets. The vectors are
// ordered for positional addressing; logical equality is multiset equality.
struct Sequent {
  SeqKind kind = SeqKind::Arrow;
  std::vector<Formula> ante;
  std::vector<Formula> succ;

  bool empty_both() const { return ante.empty() && succ.empty(); }
  std::string str() const;
};

bool multiset_eq(const std::vector<Formula>& a, const std::vector<Formula>& b);
bool seq_eq(const Sequent& a, const Sequent& b);  // kind + multiset equality
int seq_cmp(const Sequent& a, const Sequent& b);  // total order on normal forms

// Opaque stable component identifier; fresh ids from a process-wide counter.
using ComponentId = uint64_t;
ComponentId fresh_component_id();

struct Component {
  ComponentId id;
  Sequent seq;
};

// A hypersequent: ordered list of components; equality ignores order and ids.
struct Hyper {
  std::vector<Component> comps;

  size_t size() const { return comps.size(); }
  const Sequent& operator[](size_t i) const { return comps[i].seq; }
  Sequent& operator[](size_t i) { return comps[i].seq; }
  std::string str() const;

  static Hyper of(std::vector<Sequent> seqs);
};

bool hs_equal(const Hyper& a, const Hyper& b);

// f(G --> D) = /\G -> \/D ; f(G ==> D) = [g](/\G -> \/D) ; f(S1|...|Sn) as a
// left-to-right disjunction. Empty conventions: /\{} = -false, \/{} = false.
Formula formula_image(const Sequent& s);
Formula formula_image(const Hyper& h);

// S . T from the paper; kinds must agree.
Sequent dot_merge(const Sequent& s, const Sequent& t);
// .H : left fold of dot_merge over the serialized order; H must be nonempty
// and single-kinded.
Sequent dot_collapse(const Hyper& h);

Sequent parse_sequent(const std::string& text);
Hyper parse_hyper(const std::string& text);

}  // namespace gr
