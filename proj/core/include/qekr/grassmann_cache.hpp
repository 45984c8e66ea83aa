#pragma once

// Binary Grassmannian cache.
//
// Layout (all integers little-endian):
//   8 bytes   magic "QEKRGRAS"
//   u32       format version
//   u32       n, u32 k, u32 q
//   u32       modulus length L, then L bytes (modulus coefficients, constant first)
//   u64       count (= [n, k]_q)
//   count records of k*n bytes: the RREF basis, row-major, one element code per byte
// Records appear in enumeration order.

#include "qekr/grassmann.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace qekr {

inline constexpr std::uint32_t kGrassmannCacheVersion = 1;

struct CacheHeader {
  std::uint32_t version = 0;
  int n = 0, k = 0, q = 0;
  std::vector<int> modulus;
  std::uint64_t count = 0;
};

class CacheError : public std::runtime_error {
 public:
  enum class Kind { corrupt, stale, mismatch };
  CacheError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

void write_grassmann_cache(std::ostream& out, const GrassmannIndex& g);

/// Reads and validates only the header. A version other than the current one
/// raises CacheError::Kind::stale.
CacheHeader read_cache_header(std::istream& in);

/// Reads a full cache and validates it against the field and expected shape.
GrassmannIndex read_grassmann_cache(std::istream& in, std::shared_ptr<const FiniteField> field,
                                    int n, int k);

std::filesystem::path cache_path(const std::filesystem::path& dir, int n, int k, int q);

/// $QEKR_CACHE_DIR if set, otherwise ".qekr-cache" in the working directory.
std::filesystem::path default_cache_dir();

/// Loads the cache entry if it is valid; otherwise enumerates and rewrites it,
/// appending a warning when an existing file had to be discarded.
GrassmannIndex load_or_build(const std::filesystem::path& dir, int n, int k,
                             std::shared_ptr<const FiniteField> field, std::uint64_t cap,
                             std::vector<std::string>* warnings = nullptr);

std::vector<std::filesystem::path> list_cache(const std::filesystem::path& dir);
std::size_t clear_cache(const std::filesystem::path& dir);

}  // namespace qekr
