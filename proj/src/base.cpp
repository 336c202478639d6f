#include "elenchus/base.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "elenchus/json_codec.hpp"

namespace elenchus {

bool AtomicImplication::redundant() const {
  return std::any_of(lhs.begin(), lhs.end(), [&](const AtomId& a) { return rhs.contains(a); });
}

MaterialBase::MaterialBase(AtomSet atoms, std::vector<AtomicImplication> implications)
    : atoms_(std::move(atoms)) {
  for (const auto& imp : implications) {
    for (const auto* side : {&imp.lhs, &imp.rhs})
      for (const auto& a : *side)
        if (!atoms_.contains(a))
          throw Error("UnknownAtom", "implication " + imp.text() + " mentions undeclared atom " + a.name());
  }
  // stable_sort keeps the first provenance among duplicates.
  std::stable_sort(implications.begin(), implications.end());
  implications.erase(std::unique(implications.begin(), implications.end()), implications.end());
  implications_ = std::move(implications);
}

const AtomicImplication* MaterialBase::find_implication(const AtomSet& lhs, const AtomSet& rhs) const {
  AtomicImplication probe{lhs, rhs, {}};
  auto it = std::lower_bound(implications_.begin(), implications_.end(), probe);
  if (it != implications_.end() && *it == probe) return &*it;
  return nullptr;
}

bool MaterialBase::contains_implication(const AtomSet& lhs, const AtomSet& rhs) const {
  return find_implication(lhs, rhs) != nullptr;
}

void MaterialBase::require_declared(const Sequent& s) const {
  for (const auto& a : s.atoms())
    if (!atoms_.contains(a))
      throw Error("UnknownAtom", "atom " + a.name() + " is not declared in the base");
}

bool operator==(const MaterialBase& a, const MaterialBase& b) {
  if (a.atoms_ != b.atoms_ || a.implications_.size() != b.implications_.size()) return false;
  for (std::size_t i = 0; i < a.implications_.size(); ++i) {
    const auto& x = a.implications_[i];
    const auto& y = b.implications_[i];
    if (!(x == y) || x.provenance != y.provenance) return false;
  }
  return true;
}

bool shares_formula(const Sequent& s) {
  // Both sides are sorted by the same key; walk them in lockstep.
  auto l = s.antecedent.begin();
  auto r = s.succedent.begin();
  while (l != s.antecedent.end() && r != s.succedent.end()) {
    if (*l < *r)
      ++l;
    else if (*r < *l)
      ++r;
    else
      return true;
  }
  return false;
}

bool is_axiom_unchecked(const MaterialBase& base, const Sequent& s) {
  if (shares_formula(s)) return true;
  if (!s.is_atomic()) return false;
  AtomSet lhs, rhs;
  for (const auto& f : s.antecedent) lhs.insert(f.atom_id());
  for (const auto& f : s.succedent) rhs.insert(f.atom_id());
  return base.contains_implication(lhs, rhs);
}

bool is_axiom(const MaterialBase& base, const Sequent& s) {
  base.require_declared(s);
  return is_axiom_unchecked(base, s);
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

const json& require_field(const json& obj, const char* field) {
  if (!obj.is_object()) throw Error("FormatError", std::string("expected an object holding '") + field + "'");
  auto it = obj.find(field);
  if (it == obj.end()) throw Error("FormatError", std::string("missing field '") + field + "'");
  return *it;
}

std::string require_string(const json& obj, const char* field) {
  const json& v = require_field(obj, field);
  if (!v.is_string()) throw Error("FormatError", std::string("field '") + field + "' must be a string");
  return v.get<std::string>();
}

json atoms_to_json(const AtomSet& atoms) {
  json out = json::array();
  for (const auto& a : atoms) out.push_back(a.name());
  return out;
}

AtomSet atoms_from_json(const json& j, const char* field) {
  if (!j.is_array()) throw Error("FormatError", std::string("field '") + field + "' must be an array");
  AtomSet out;
  for (const auto& v : j) {
    if (!v.is_string() || !is_valid_atom_name(v.get_ref<const std::string&>()))
      throw Error("FormatError", std::string("field '") + field + "' holds an invalid atom identifier");
    out.insert(AtomId(v.get<std::string>()));
  }
  return out;
}

json to_json(const MaterialBase& base) {
  json imps = json::array();
  for (const auto& imp : base.implications()) {
    json o = json::object();
    o["lhs"] = atoms_to_json(imp.lhs);
    o["rhs"] = atoms_to_json(imp.rhs);
    o["provenance"] = imp.provenance;
    imps.push_back(std::move(o));
  }
  json doc = json::object();
  doc["atoms"] = atoms_to_json(base.atoms());
  doc["implications"] = std::move(imps);
  return doc;
}

MaterialBase base_from_json(const json& doc) {
  AtomSet atoms = atoms_from_json(require_field(doc, "atoms"), "atoms");
  const json& imps = require_field(doc, "implications");
  if (!imps.is_array()) throw Error("FormatError", "field 'implications' must be an array");
  std::vector<AtomicImplication> out;
  for (const auto& imp : imps) {
    AtomicImplication a;
    a.lhs = atoms_from_json(require_field(imp, "lhs"), "lhs");
    a.rhs = atoms_from_json(require_field(imp, "rhs"), "rhs");
    if (auto it = imp.find("provenance"); it != imp.end()) {
      if (!it->is_string()) throw Error("FormatError", "field 'provenance' must be a string");
      a.provenance = it->get<std::string>();
    }
    out.push_back(std::move(a));
  }
  return MaterialBase(std::move(atoms), std::move(out));
}

MaterialBase load_base(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw Error("FormatError", std::string("malformed base document: ") + e.what());
  }
  return base_from_json(doc);
}

std::string save_base(const MaterialBase& base) { return to_json(base).dump(2) + "\n"; }

MaterialBase load_base_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IOError", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_base(ss.str());
}

void save_base_file(const MaterialBase& base, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("IOError", "cannot write " + path);
  out << save_base(base);
}

}  // namespace elenchus
