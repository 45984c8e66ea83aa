#pragma once

// Family files: JSON text of the form
//   {"format_version": 1, "n": 5, "k": 2, "q": 2, "modulus": [],
//    "provenance": {...},
//    "members": [[[1,0,0,0,0],[0,1,0,0,0]], ...]}
// Each member is a k x n matrix of field element codes (see FiniteField) in
// reduced row echelon form. `modulus` is the field modulus, constant first,
// empty for prime fields.

#include "qekr/families.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace qekr {

inline constexpr int kFamilyFormatVersion = 1;

class FamilyFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parsed file before it is bound to a Grassmannian.
struct FamilyDocument {
  int n = 0, k = 0, q = 0;
  std::vector<int> modulus;
  json provenance;
  std::vector<std::vector<std::vector<int>>> members;
};

/// Schema validation only; throws FamilyFormatError.
FamilyDocument parse_family_document(const json& j);
FamilyDocument read_family_document(std::istream& in);
FamilyDocument read_family_document(const std::filesystem::path& path);

struct LoadedFamily {
  Family family;
  std::vector<std::string> warnings;
};

/// Checks the field, canonicalizes non-RREF bases and drops duplicates (both with
/// a warning). Throws FamilyFormatError on out-of-range encodings, wrong shapes or
/// rank-deficient members. A document without provenance gets {"kind": "file"}.
LoadedFamily bind_family(const FamilyDocument& doc, const GrassmannIndex& g);

json family_to_json(const Family& f);
void save_family(const Family& f, std::ostream& out);
void save_family(const Family& f, const std::filesystem::path& path);

}  // namespace qekr
