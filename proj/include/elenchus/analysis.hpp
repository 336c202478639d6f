#pragma once

// Structural-property analyses of a material base: Containment audit,
// nontransitivity witnesses, nonmonotonicity witnesses, pairwise
// independence between named atom groups, and the deduction-detachment check.

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "elenchus/prover.hpp"

namespace elenchus {

// atom -> derivable(a |- a)
std::map<AtomId, bool> containment_audit(const MaterialBase& base, ProverOptions options = {});

struct TransitivityGap {
  AtomId a, b, c;  // {a}|-{b} and {b}|-{c} in I, a |- c not derivable
  friend bool operator==(const TransitivityGap&, const TransitivityGap&) = default;
};
std::vector<TransitivityGap> transitivity_gaps(const MaterialBase& base, ProverOptions options = {});

struct MonotonicityDefeat {
  AtomicImplication implication;
  AtomId extra;  // lhs + extra |- rhs is not derivable
};
std::vector<MonotonicityDefeat> monotonicity_defeats(const MaterialBase& base, ProverOptions options = {});

struct AtomGroup {
  std::string name;
  AtomSet atoms;
};

struct IndependenceCell {
  std::string from, to;
  std::size_t tested = 0;     // ordered atom pairs x in from, y in to
  std::size_t derivable = 0;  // how many x |- y were derivable
};

struct IndependenceReport {
  std::size_t pair_count = 0;        // unordered cross-group atom pairs
  std::size_t derivable_pairs = 0;   // unordered pairs derivable in at least one direction
  std::vector<IndependenceCell> cells;  // one per ordered group pair (i != j)

  std::size_t total_derivable() const;
};

// Throws OverlappingGroups when groups share an atom, UnknownAtom when a
// group mentions an undeclared atom.
IndependenceReport independence_matrix(const MaterialBase& base, const std::vector<AtomGroup>& groups,
                                       ProverOptions options = {});

struct DdtResult {
  bool left = false;   // G |- A->B, D
  bool right = false;  // G, A |- B, D
  bool agree() const { return left == right; }
};
DdtResult ddt_check(const MaterialBase& base, const FormulaSet& gamma, const Formula& a, const Formula& b,
                    const FormulaSet& delta, ProverOptions options = {});

}  // namespace elenchus
