#pragma once

// Material bases: an atomic language plus the set I of endorsed atomic
// implications. Containment is never stored; it is the predicate
// "antecedent and succedent share a member", checked on demand.

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "elenchus/formula.hpp"

namespace elenchus {

struct AtomicImplication {
  AtomSet lhs;
  AtomSet rhs;
  // Free-form provenance (tension id, dialogue move). Not part of identity.
  std::string provenance;

  // Overlapping sides are already covered by Containment.
  bool redundant() const;
  Sequent sequent() const { return atomic_sequent(lhs, rhs); }
  std::string text() const { return sequent().text(); }

  friend bool operator==(const AtomicImplication& a, const AtomicImplication& b) {
    return a.lhs == b.lhs && a.rhs == b.rhs;
  }
  friend std::weak_ordering operator<=>(const AtomicImplication& a, const AtomicImplication& b) {
    if (auto c = a.lhs <=> b.lhs; c != 0) return c;
    return a.rhs <=> b.rhs;
  }
};

class MaterialBase {
 public:
  MaterialBase() = default;

  // Throws UnknownAtom if an implication mentions an atom outside `atoms`.
  MaterialBase(AtomSet atoms, std::vector<AtomicImplication> implications);

  const AtomSet& atoms() const noexcept { return atoms_; }
  // Sorted by (lhs, rhs), unique.
  const std::vector<AtomicImplication>& implications() const noexcept { return implications_; }

  bool declares(const AtomId& a) const { return atoms_.contains(a); }
  bool contains_implication(const AtomSet& lhs, const AtomSet& rhs) const;
  const AtomicImplication* find_implication(const AtomSet& lhs, const AtomSet& rhs) const;

  // Throws UnknownAtom naming the first undeclared atom of s.
  void require_declared(const Sequent& s) const;

  friend bool operator==(const MaterialBase& a, const MaterialBase& b);

 private:
  AtomSet atoms_;
  std::vector<AtomicImplication> implications_;
};

// Formula-level Containment: some formula occurs on both sides.
bool shares_formula(const Sequent& s);

// Axiom test against I ∪ Cont. Containment is applied to formulas of any
// shape; I membership only to atomic sequents, by exact set equality.
// Throws UnknownAtom when s mentions an undeclared atom.
bool is_axiom(const MaterialBase& base, const Sequent& s);

// Same test without the undeclared-atom check; used on the prover hot path
// once the root sequent has been checked.
bool is_axiom_unchecked(const MaterialBase& base, const Sequent& s);

// JSON document: {"atoms": [...], "implications": [{"lhs","rhs","provenance"}]}.
// Throws FormatError on malformed documents, UnknownAtom on undeclared atoms.
MaterialBase load_base(std::string_view document);
// Canonical form: atoms sorted, implications sorted, 2-space indent, trailing newline.
std::string save_base(const MaterialBase& base);

MaterialBase load_base_file(const std::string& path);
void save_base_file(const MaterialBase& base, const std::string& path);

}  // namespace elenchus
