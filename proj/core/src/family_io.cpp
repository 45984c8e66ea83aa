#include "qekr/family_io.hpp"

#include <fstream>
#include <set>

namespace qekr {
namespace {

[[noreturn]] void bad(const std::string& what) { throw FamilyFormatError("family file: " + what); }

int integer_field(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer()) bad(std::string("missing integer field '") + key + "'");
  return j.at(key).get<int>();
}

}  // namespace

FamilyDocument parse_family_document(const json& j) {
  if (!j.is_object()) bad("top level is not an object");
  int version = integer_field(j, "format_version");
  if (version != kFamilyFormatVersion) bad("unsupported format_version " + std::to_string(version));
  FamilyDocument doc;
  doc.n = integer_field(j, "n");
  doc.k = integer_field(j, "k");
  doc.q = integer_field(j, "q");
  if (doc.n < 1 || doc.k < 1 || doc.k > doc.n) bad("need 1 <= k <= n");
  if (!j.contains("modulus") || !j.at("modulus").is_array()) bad("missing array field 'modulus'");
  for (const auto& c : j.at("modulus")) {
    if (!c.is_number_integer()) bad("modulus entries must be integers");
    doc.modulus.push_back(c.get<int>());
  }
  doc.provenance = j.value("provenance", json{{"kind", "file"}});
  if (!j.contains("members") || !j.at("members").is_array()) bad("missing array field 'members'");
  for (const auto& m : j.at("members")) {
    if (!m.is_array()) bad("member is not a matrix");
    std::vector<std::vector<int>> rows;
    for (const auto& r : m) {
      if (!r.is_array()) bad("member row is not an array");
      std::vector<int> row;
      for (const auto& v : r) {
        if (!v.is_number_integer()) bad("matrix entries must be integers");
        row.push_back(v.get<int>());
      }
      rows.push_back(std::move(row));
    }
    doc.members.push_back(std::move(rows));
  }
  return doc;
}

FamilyDocument read_family_document(std::istream& in) {
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    bad(std::string("not valid JSON: ") + e.what());
  }
  return parse_family_document(j);
}

FamilyDocument read_family_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path.string());
  return read_family_document(in);
}

LoadedFamily bind_family(const FamilyDocument& doc, const GrassmannIndex& g) {
  const auto& field = g.field();
  if (doc.n != g.ambient() || doc.k != g.dim() || doc.q != g.q())
    bad("parameters do not match the Grassmannian");
  if (doc.modulus != field.modulus()) bad("field modulus does not match GF(" + std::to_string(doc.q) + ")");

  std::vector<std::string> warnings;
  std::vector<std::size_t> members;
  std::set<std::size_t> seen;
  for (std::size_t idx = 0; idx < doc.members.size(); ++idx) {
    const auto& rows = doc.members[idx];
    std::string where = "member " + std::to_string(idx);
    if (static_cast<int>(rows.size()) != doc.k) bad(where + " has " + std::to_string(rows.size()) + " rows");
    std::vector<Element> flat;
    for (const auto& r : rows) {
      if (static_cast<int>(r.size()) != doc.n) bad(where + " has a row of length " + std::to_string(r.size()));
      for (int v : r) {
        if (!field.valid(v)) bad(where + " uses encoding " + std::to_string(v) + " outside GF(" +
                                 std::to_string(doc.q) + ")");
        flat.push_back(static_cast<Element>(v));
      }
    }
    Subspace s = rref_canonical(field, doc.n, flat);
    if (s.dim() != doc.k) bad(where + " has rank " + std::to_string(s.dim()));
    if (!std::equal(flat.begin(), flat.end(), s.basis().begin(), s.basis().end()))
      warnings.push_back(where + " was not in reduced row echelon form; canonicalized");
    std::size_t i = g.index_of(s);
    if (!seen.insert(i).second) {
      warnings.push_back(where + " duplicates an earlier member; dropped");
      continue;
    }
    members.push_back(i);
  }
  return {Family(g, std::move(members), doc.provenance), std::move(warnings)};
}

json family_to_json(const Family& f) {
  const auto& g = f.grassmannian();
  return {{"format_version", kFamilyFormatVersion},
          {"n", g.ambient()},
          {"k", g.dim()},
          {"q", g.q()},
          {"modulus", g.field().modulus()},
          {"provenance", f.provenance()},
          {"members", f.members_json()}};
}

void save_family(const Family& f, std::ostream& out) { out << family_to_json(f).dump(1) << '\n'; }

void save_family(const Family& f, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  save_family(f, out);
}

}  // namespace qekr
