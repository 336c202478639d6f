#pragma once

// JSON encodings shared by the file formats, the HTTP service and the CLI's
// --json mode. Formulas and sequents travel as their rendered strings.

#include <json.hpp>

#include "elenchus/base.hpp"

namespace elenchus {

using json = nlohmann::json;

json to_json(const MaterialBase& base);
// Throws FormatError / UnknownAtom.
MaterialBase base_from_json(const json& doc);

json atoms_to_json(const AtomSet& atoms);
// Throws FormatError when `j` is not an array of valid identifiers.
AtomSet atoms_from_json(const json& j, const char* field);

// Small accessors that turn nlohmann type errors into FormatError.
const json& require_field(const json& obj, const char* field);
std::string require_string(const json& obj, const char* field);

}  // namespace elenchus
