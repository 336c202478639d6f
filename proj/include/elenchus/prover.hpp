#pragma once

// Root-first backward proof search for the NMMS sequent calculus over a
// material base. The calculus is shared-context, set-based, with no
// weakening and no cut. Read from conclusion to premises:
//
//   L&   G, A&B |- D     <=  G, A, B |- D
//   R&   G |- A&B, D     <=  G |- A, D   and  G |- B, D
//   L|   G, A|B |- D     <=  G, A |- D   and  G, B |- D
//   R|   G |- A|B, D     <=  G |- A, B, D
//   L->  G, A->B |- D    <=  G |- A, D   and  G, B |- D
//   R->  G |- A->B, D    <=  G, A |- B, D
//   L~   G, ~A |- D      <=  G |- A, D
//   R~   G |- ~A, D      <=  G, A |- D
//
// The principal formula leaves its side; G and D are carried unchanged.
// Every rule strictly lowers the total connective count, so search
// terminates without loop checking.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "elenchus/base.hpp"

namespace elenchus {

enum class Rule {
  AxiomContainment,
  AxiomBase,
  LeftAnd,
  RightAnd,
  LeftOr,
  RightOr,
  LeftImp,
  RightImp,
  LeftNeg,
  RightNeg,
};

// "AxiomContainment", "AxiomBase", "L&", "R&", "L|", "R|", "L->", "R->", "L~", "R~".
std::string_view rule_name(Rule r) noexcept;
std::optional<Rule> rule_from_name(std::string_view name) noexcept;

struct ProofNode;
using ProofPtr = std::shared_ptr<const ProofNode>;

struct ProofNode {
  Sequent conclusion;
  Rule rule;
  std::optional<Formula> principal;  // absent for axioms
  std::vector<ProofPtr> premises;    // 0 for axioms, 1 or 2 otherwise

  std::size_t size() const;
  std::size_t height() const;
};

struct SearchStats {
  std::size_t nodes = 0;      // sequents expanded (memo misses)
  std::size_t memo_hits = 0;
};

struct QueryResult {
  bool derivable = false;
  ProofPtr proof;  // present iff derivable
  SearchStats stats;
};

struct ProverOptions {
  enum class Containment {
    FormulaLevel,  // any shared formula closes a branch
    AtomicOnly,    // only atomic sequents are axioms (reference semantics)
  };
  enum class Strategy {
    Backtracking,  // try every compound as principal (normative)
    Invertible,    // commit to the first compound; validated against Backtracking
  };

  bool memoize = true;
  std::size_t node_budget = 10'000'000;
  Containment containment = Containment::FormulaLevel;
  Strategy strategy = Strategy::Backtracking;
};

// Backward reading of one rule: the premises obtained by taking `principal`
// (a compound member of the given side of `s`) as principal formula.
struct Decomposition {
  Rule rule;
  std::vector<Sequent> premises;
};
Decomposition decompose(const Sequent& s, const Formula& principal, bool on_left);

// A prover bound to one base. Memo entries are keyed by the canonical
// sequent text and live as long as the Prover, so batches share work.
// Not thread-safe; use one instance per thread.
class Prover {
 public:
  explicit Prover(const MaterialBase& base, ProverOptions options = {});

  // Throws UnknownAtom for undeclared atoms, ResourceLimit past the budget.
  QueryResult derivable(const Sequent& s);
  std::vector<QueryResult> derivable_batch(std::span<const Sequent> queries);

  const MaterialBase& base() const noexcept { return base_; }
  const ProverOptions& options() const noexcept { return options_; }
  void clear_memo() { memo_.clear(); }

 private:
  ProofPtr search(const Sequent& s, SearchStats& stats);
  ProofPtr expand(const Sequent& s, SearchStats& stats);
  ProofPtr try_principal(const Sequent& s, const Formula& f, bool on_left, SearchStats& stats);
  std::optional<Rule> axiom_rule(const Sequent& s) const;

  const MaterialBase& base_;
  ProverOptions options_;
  std::unordered_map<std::string, ProofPtr> memo_;
};

QueryResult derivable(const MaterialBase& base, const Sequent& s, ProverOptions options = {});
std::vector<QueryResult> derivable_batch(const MaterialBase& base, std::span<const Sequent> queries,
                                         ProverOptions options = {});

// Re-checks a proof node by node: every leaf an axiom of `base` (under the
// given Containment reading), every inner node a correct backward rule
// application. On failure returns false and, if `why` is set, a reason.
bool check_proof(const MaterialBase& base, const ProofNode& proof, std::string* why = nullptr,
                 ProverOptions::Containment containment = ProverOptions::Containment::FormulaLevel);

}  // namespace elenchus
