#include "elenchus/proof_export.hpp"

namespace elenchus {

namespace {

void write_text(const ProofNode& node, std::size_t depth, std::string& out) {
  out.append(depth * 2, ' ');
  out += node.conclusion.text();
  out += "  [";
  out += rule_name(node.rule);
  if (node.principal) {
    out += ' ';
    out += node.principal->text();
  }
  out += "]\n";
  for (const auto& p : node.premises) write_text(*p, depth + 1, out);
}

}  // namespace

std::string proof_to_text(const ProofNode& proof) {
  std::string out;
  write_text(proof, 0, out);
  return out;
}

json proof_to_json(const ProofNode& proof) {
  json o = json::object();
  o["sequent"] = proof.conclusion.text();
  o["rule"] = std::string(rule_name(proof.rule));
  if (proof.principal) o["principal"] = proof.principal->text();
  json premises = json::array();
  for (const auto& p : proof.premises) premises.push_back(proof_to_json(*p));
  o["premises"] = std::move(premises);
  return o;
}

ProofPtr proof_from_json(const json& doc) {
  ProofNode node{parse_sequent(require_string(doc, "sequent")), Rule::AxiomContainment, std::nullopt, {}};
  const std::string rule = require_string(doc, "rule");
  auto r = rule_from_name(rule);
  if (!r) throw Error("FormatError", "unknown rule '" + rule + "'");
  node.rule = *r;
  if (auto it = doc.find("principal"); it != doc.end()) {
    if (!it->is_string()) throw Error("FormatError", "field 'principal' must be a string");
    node.principal = parse_formula(it->get<std::string>());
  }
  const json& premises = require_field(doc, "premises");
  if (!premises.is_array()) throw Error("FormatError", "field 'premises' must be an array");
  for (const auto& p : premises) node.premises.push_back(proof_from_json(p));
  return std::make_shared<const ProofNode>(std::move(node));
}

}  // namespace elenchus
