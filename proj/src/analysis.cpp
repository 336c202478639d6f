#include "elenchus/analysis.hpp"

namespace elenchus {

std::map<AtomId, bool> containment_audit(const MaterialBase& base, ProverOptions options) {
  Prover prover(base, options);
  std::map<AtomId, bool> out;
  for (const auto& a : base.atoms()) out.emplace(a, prover.derivable(atomic_sequent({a}, {a})).derivable);
  return out;
}

std::vector<TransitivityGap> transitivity_gaps(const MaterialBase& base, ProverOptions options) {
  std::vector<const AtomicImplication*> singles;
  for (const auto& imp : base.implications())
    if (imp.lhs.size() == 1 && imp.rhs.size() == 1) singles.push_back(&imp);

  Prover prover(base, options);
  std::vector<TransitivityGap> out;
  for (const auto* ab : singles) {
    for (const auto* bc : singles) {
      const AtomId& b = *ab->rhs.begin();
      if (*bc->lhs.begin() != b) continue;
      const AtomId& a = *ab->lhs.begin();
      const AtomId& c = *bc->rhs.begin();
      if (!prover.derivable(atomic_sequent({a}, {c})).derivable) out.push_back({a, b, c});
    }
  }
  return out;
}

std::vector<MonotonicityDefeat> monotonicity_defeats(const MaterialBase& base, ProverOptions options) {
  Prover prover(base, options);
  std::vector<MonotonicityDefeat> out;
  for (const auto& imp : base.implications()) {
    for (const auto& extra : base.atoms()) {
      if (imp.lhs.contains(extra) || imp.rhs.contains(extra)) continue;
      AtomSet lhs = imp.lhs;
      lhs.insert(extra);
      if (!prover.derivable(atomic_sequent(lhs, imp.rhs)).derivable) out.push_back({imp, extra});
    }
  }
  return out;
}

std::size_t IndependenceReport::total_derivable() const {
  std::size_t n = 0;
  for (const auto& c : cells) n += c.derivable;
  return n;
}

IndependenceReport independence_matrix(const MaterialBase& base, const std::vector<AtomGroup>& groups,
                                       ProverOptions options) {
  AtomSet seen;
  for (const auto& g : groups) {
    for (const auto& a : g.atoms) {
      if (!base.declares(a)) throw Error("UnknownAtom", "group " + g.name + " mentions undeclared atom " + a.name());
      if (!seen.insert(a).second)
        throw Error("OverlappingGroups", "atom " + a.name() + " belongs to more than one group");
    }
  }

  Prover prover(base, options);
  auto holds = [&](const AtomId& x, const AtomId& y) {
    return prover.derivable(atomic_sequent({x}, {y})).derivable;
  };

  IndependenceReport report;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    for (std::size_t j = 0; j < groups.size(); ++j) {
      if (i == j) continue;
      IndependenceCell cell{groups[i].name, groups[j].name, 0, 0};
      for (const auto& x : groups[i].atoms) {
        for (const auto& y : groups[j].atoms) {
          ++cell.tested;
          const bool forward = holds(x, y);
          if (forward) ++cell.derivable;
          if (i < j) {
            ++report.pair_count;
            if (forward || holds(y, x)) ++report.derivable_pairs;
          }
        }
      }
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

DdtResult ddt_check(const MaterialBase& base, const FormulaSet& gamma, const Formula& a, const Formula& b,
                    const FormulaSet& delta, ProverOptions options) {
  Prover prover(base, options);
  Sequent conditional{gamma, delta};
  conditional.succedent.insert(Formula::implication(a, b));
  Sequent detached{gamma, delta};
  detached.antecedent.insert(a);
  detached.succedent.insert(b);
  return {prover.derivable(conditional).derivable, prover.derivable(detached).derivable};
}

}  // namespace elenchus
