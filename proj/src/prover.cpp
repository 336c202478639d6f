#include "elenchus/prover.hpp"

#include <algorithm>
#include <array>
#include <utility>

namespace elenchus {

namespace {

constexpr std::array<std::pair<Rule, std::string_view>, 10> kRuleNames{{
    {Rule::AxiomContainment, "AxiomContainment"},
    {Rule::AxiomBase, "AxiomBase"},
    {Rule::LeftAnd, "L&"},
    {Rule::RightAnd, "R&"},
    {Rule::LeftOr, "L|"},
    {Rule::RightOr, "R|"},
    {Rule::LeftImp, "L->"},
    {Rule::RightImp, "R->"},
    {Rule::LeftNeg, "L~"},
    {Rule::RightNeg, "R~"},
}};

bool is_axiom_rule(Rule r) { return r == Rule::AxiomContainment || r == Rule::AxiomBase; }

}  // namespace

std::string_view rule_name(Rule r) noexcept {
  for (const auto& [rule, name] : kRuleNames)
    if (rule == r) return name;
  return "?";
}

std::optional<Rule> rule_from_name(std::string_view name) noexcept {
  for (const auto& [rule, n] : kRuleNames)
    if (n == name) return rule;
  return std::nullopt;
}

std::size_t ProofNode::size() const {
  std::size_t n = 1;
  for (const auto& p : premises) n += p->size();
  return n;
}

std::size_t ProofNode::height() const {
  std::size_t h = 0;
  for (const auto& p : premises) h = std::max(h, p->height());
  return h + 1;
}

Decomposition decompose(const Sequent& s, const Formula& principal, bool on_left) {
  Sequent ctx = s;
  (on_left ? ctx.antecedent : ctx.succedent).erase(principal);

  auto with = [&ctx](std::initializer_list<Formula> left, std::initializer_list<Formula> right) {
    Sequent out = ctx;
    for (const auto& f : left) out.antecedent.insert(f);
    for (const auto& f : right) out.succedent.insert(f);
    return out;
  };

  switch (principal.kind()) {
    case Connective::And:
      if (on_left) return {Rule::LeftAnd, {with({principal.left(), principal.right()}, {})}};
      return {Rule::RightAnd, {with({}, {principal.left()}), with({}, {principal.right()})}};
    case Connective::Or:
      if (on_left) return {Rule::LeftOr, {with({principal.left()}, {}), with({principal.right()}, {})}};
      return {Rule::RightOr, {with({}, {principal.left(), principal.right()})}};
    case Connective::Imp:
      if (on_left) return {Rule::LeftImp, {with({}, {principal.left()}), with({principal.right()}, {})}};
      return {Rule::RightImp, {with({principal.left()}, {principal.right()})}};
    case Connective::Neg:
      if (on_left) return {Rule::LeftNeg, {with({}, {principal.operand()})}};
      return {Rule::RightNeg, {with({principal.operand()}, {})}};
    case Connective::Atom:
      break;
  }
  throw Error("InvalidPrincipal", "atom " + principal.text() + " has no rule");
}

// ---------------------------------------------------------------------------
// Search
// ---------------------------------------------------------------------------

Prover::Prover(const MaterialBase& base, ProverOptions options) : base_(base), options_(options) {}

std::optional<Rule> Prover::axiom_rule(const Sequent& s) const {
  if (options_.containment == ProverOptions::Containment::AtomicOnly && !s.is_atomic())
    return std::nullopt;
  if (shares_formula(s)) return Rule::AxiomContainment;
  if (is_axiom_unchecked(base_, s)) return Rule::AxiomBase;
  return std::nullopt;
}

QueryResult Prover::derivable(const Sequent& s) {
  base_.require_declared(s);
  QueryResult r;
  r.proof = search(s, r.stats);
  r.derivable = r.proof != nullptr;
  return r;
}

std::vector<QueryResult> Prover::derivable_batch(std::span<const Sequent> queries) {
  std::vector<QueryResult> out;
  out.reserve(queries.size());
  for (const auto& q : queries) out.push_back(derivable(q));
  return out;
}

ProofPtr Prover::search(const Sequent& s, SearchStats& stats) {
  if (!options_.memoize) {
    if (++stats.nodes > options_.node_budget)
      throw Error("ResourceLimit", "node budget of " + std::to_string(options_.node_budget) + " exceeded");
    return expand(s, stats);
  }
  std::string key = s.text();
  if (auto it = memo_.find(key); it != memo_.end()) {
    ++stats.memo_hits;
    return it->second;
  }
  if (++stats.nodes > options_.node_budget)
    throw Error("ResourceLimit", "node budget of " + std::to_string(options_.node_budget) + " exceeded");
  ProofPtr result = expand(s, stats);
  memo_.emplace(std::move(key), result);
  return result;
}

ProofPtr Prover::expand(const Sequent& s, SearchStats& stats) {
  if (auto rule = axiom_rule(s)) {
    return std::make_shared<const ProofNode>(ProofNode{s, *rule, std::nullopt, {}});
  }
  const bool commit_first = options_.strategy == ProverOptions::Strategy::Invertible;
  // Principal order: antecedent then succedent, each in canonical order.
  for (bool on_left : {true, false}) {
    for (const auto& f : on_left ? s.antecedent : s.succedent) {
      if (f.is_atom()) continue;
      ProofPtr p = try_principal(s, f, on_left, stats);
      if (p || commit_first) return p;
    }
  }
  return nullptr;
}

ProofPtr Prover::try_principal(const Sequent& s, const Formula& f, bool on_left, SearchStats& stats) {
  Decomposition d = decompose(s, f, on_left);
  std::vector<ProofPtr> premises;
  premises.reserve(d.premises.size());
  for (const auto& premise : d.premises) {
    ProofPtr p = search(premise, stats);
    if (!p) return nullptr;
    premises.push_back(std::move(p));
  }
  return std::make_shared<const ProofNode>(ProofNode{s, d.rule, f, std::move(premises)});
}

QueryResult derivable(const MaterialBase& base, const Sequent& s, ProverOptions options) {
  Prover prover(base, options);
  return prover.derivable(s);
}

std::vector<QueryResult> derivable_batch(const MaterialBase& base, std::span<const Sequent> queries,
                                         ProverOptions options) {
  Prover prover(base, options);
  return prover.derivable_batch(queries);
}

// ---------------------------------------------------------------------------
// Proof checking
// ---------------------------------------------------------------------------

namespace {

bool fail(std::string* why, const ProofNode& node, const std::string& reason) {
  if (why) *why = node.conclusion.text() + ": " + reason;
  return false;
}

}  // namespace

bool check_proof(const MaterialBase& base, const ProofNode& node, std::string* why,
                 ProverOptions::Containment containment) {
  const Sequent& s = node.conclusion;
  if (is_axiom_rule(node.rule)) {
    if (!node.premises.empty()) return fail(why, node, "axiom with premises");
    if (node.principal) return fail(why, node, "axiom with a principal formula");
    if (containment == ProverOptions::Containment::AtomicOnly && !s.is_atomic())
      return fail(why, node, "non-atomic axiom under atomic-only Containment");
    if (node.rule == Rule::AxiomContainment && !shares_formula(s))
      return fail(why, node, "sides do not intersect");
    if (node.rule == Rule::AxiomBase) {
      if (!s.is_atomic()) return fail(why, node, "base axiom on a non-atomic sequent");
      if (!is_axiom_unchecked(base, s) || shares_formula(s))
        return fail(why, node, "sequent is not in I");
    }
    return true;
  }

  if (!node.principal) return fail(why, node, "rule without a principal formula");
  const Formula& f = *node.principal;
  const bool on_left = node.rule == Rule::LeftAnd || node.rule == Rule::LeftOr ||
                       node.rule == Rule::LeftImp || node.rule == Rule::LeftNeg;
  const auto& side = on_left ? s.antecedent : s.succedent;
  if (!side.contains(f)) return fail(why, node, "principal " + f.text() + " not on its side");
  if (f.is_atom()) return fail(why, node, "atomic principal");

  Decomposition expected = decompose(s, f, on_left);
  if (expected.rule != node.rule)
    return fail(why, node, std::string("rule ") + std::string(rule_name(node.rule)) + " does not match " +
                               f.text());
  if (expected.premises.size() != node.premises.size()) return fail(why, node, "wrong premise count");
  for (std::size_t i = 0; i < expected.premises.size(); ++i) {
    if (!node.premises[i]) return fail(why, node, "null premise");
    if (node.premises[i]->conclusion != expected.premises[i])
      return fail(why, node, "premise " + std::to_string(i + 1) + " is " +
                                 node.premises[i]->conclusion.text() + ", expected " +
                                 expected.premises[i].text());
    if (!check_proof(base, *node.premises[i], why, containment)) return false;
  }
  return true;
}

}  // namespace elenchus
