#pragma once

// Propositional language over atomic proposition identifiers, with the
// connectives ~ & | -> and the set-based sequents the prover works on.
//
// Concrete syntax (bit-exact, used in every file format and on the wire):
//   formula  := imp
//   imp      := or ( "->" imp )?          right-associative
//   or       := and ( "|" and )*          left-associative
//   and      := unary ( "&" unary )*      left-associative
//   unary    := "~" unary | atom | "(" formula ")"
//   atom     := [A-Za-z_][A-Za-z0-9_]*
//   sequent  := list? "|-" list?          list := formula ( "," formula )*

#include <compare>
#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "elenchus/error.hpp"

namespace elenchus {

bool is_valid_atom_name(std::string_view name) noexcept;

class AtomId {
 public:
  // Throws Error{"InvalidAtomId"} unless name matches [A-Za-z_][A-Za-z0-9_]*.
  explicit AtomId(std::string name);

  const std::string& name() const noexcept { return name_; }

  friend bool operator==(const AtomId&, const AtomId&) = default;
  friend std::strong_ordering operator<=>(const AtomId& a, const AtomId& b) {
    return a.name_ <=> b.name_;
  }

 private:
  std::string name_;
};

using AtomSet = std::set<AtomId>;

enum class Connective { Atom, Neg, And, Or, Imp };

// Immutable formula tree. Copies share structure. Equality and ordering go
// through the canonical rendering, which is injective (render/parse round
// trip), so they coincide with structural equality.
class Formula {
 public:
  static Formula atom(AtomId id);
  static Formula atom(std::string name) { return atom(AtomId(std::move(name))); }
  static Formula negation(Formula operand);
  static Formula conjunction(Formula left, Formula right);
  static Formula disjunction(Formula left, Formula right);
  static Formula implication(Formula antecedent, Formula consequent);

  Connective kind() const noexcept;
  bool is_atom() const noexcept { return kind() == Connective::Atom; }

  // Preconditions: is_atom() / kind()==Neg / binary kind respectively.
  const AtomId& atom_id() const;
  const Formula& operand() const;
  const Formula& left() const;
  const Formula& right() const;

  // Number of connective occurrences; 0 for atoms.
  std::size_t connectives() const noexcept;

  // Canonical rendering with minimal parentheses.
  const std::string& text() const noexcept;

  void collect_atoms(AtomSet& out) const;

  friend bool operator==(const Formula& a, const Formula& b) noexcept {
    return a.node_ == b.node_ || a.text() == b.text();
  }
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b) noexcept {
    return a.text() <=> b.text();
  }

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula binary(Connective kind, Formula left, Formula right);

  std::shared_ptr<const Node> node_;
};

std::string render(const Formula& f);

// Ordered by rendered text, so iteration order is the canonical order.
using FormulaSet = std::set<Formula>;

struct Sequent {
  FormulaSet antecedent;
  FormulaSet succedent;

  // True iff every member of both sides is an atom.
  bool is_atomic() const noexcept;
  std::size_t connectives() const noexcept;
  AtomSet atoms() const;

  // Canonical text, e.g. "p2, p23 |- p18", "|- p2 -> p18", "p2 & ~p2 |-", "|-".
  std::string text() const;

  friend bool operator==(const Sequent&, const Sequent&) = default;
  friend auto operator<=>(const Sequent&, const Sequent&) = default;
};

std::string render(const Sequent& s);

// Throws EmptyInput (SyntaxError subtype code) on all-whitespace input and
// SyntaxError with a byte offset on anything malformed.
Formula parse_formula(std::string_view text);

// Throws MissingTurnstile when no "|-" occurs, SyntaxError otherwise.
Sequent parse_sequent(std::string_view text);

// Builds an atomic sequent from atom sets.
Sequent atomic_sequent(const AtomSet& lhs, const AtomSet& rhs);

}  // namespace elenchus
