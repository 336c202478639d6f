#pragma once

#include <string>

#include "elenchus/json_codec.hpp"
#include "elenchus/prover.hpp"

namespace elenchus {

// Indented text, conclusion first, two spaces per level:
//   |- p2 -> p18  [R-> p2 -> p18]
//     p2 |- p18  [AxiomBase]
std::string proof_to_text(const ProofNode& proof);

// {"sequent": "...", "rule": "...", "principal": "...", "premises": [...]};
// "principal" is omitted on axioms.
json proof_to_json(const ProofNode& proof);
// Throws FormatError / SyntaxError. Does not validate the inference; use check_proof.
ProofPtr proof_from_json(const json& doc);

}  // namespace elenchus
