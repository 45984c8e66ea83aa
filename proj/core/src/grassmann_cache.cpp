#include "qekr/grassmann_cache.hpp"

#include "qekr/qarith.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>

namespace qekr {

namespace {

constexpr std::array<char, 8> kMagic{'Q', 'E', 'K', 'R', 'G', 'R', 'A', 'S'};

void put_u32(std::ostream& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_u64(std::ostream& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_le(std::istream& in, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    int c = in.get();
    if (c == std::char_traits<char>::eof()) throw CacheError(CacheError::Kind::corrupt, "cache: truncated file");
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
  }
  return v;
}

}  // namespace

void write_grassmann_cache(std::ostream& out, const GrassmannIndex& g) {
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, kGrassmannCacheVersion);
  put_u32(out, static_cast<std::uint32_t>(g.ambient()));
  put_u32(out, static_cast<std::uint32_t>(g.dim()));
  put_u32(out, static_cast<std::uint32_t>(g.q()));
  const auto& mod = g.field().modulus();
  put_u32(out, static_cast<std::uint32_t>(mod.size()));
  for (int c : mod) out.put(static_cast<char>(c));
  put_u64(out, g.size());
  for (const auto& s : g) out.write(reinterpret_cast<const char*>(s.basis().data()), s.basis().size());
}

CacheHeader read_cache_header(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw CacheError(CacheError::Kind::corrupt, "cache: bad magic");
  CacheHeader h;
  h.version = static_cast<std::uint32_t>(get_le(in, 4));
  if (h.version != kGrassmannCacheVersion)
    throw CacheError(CacheError::Kind::stale, "cache: format version " + std::to_string(h.version) +
                                                  " (current " +
                                                  std::to_string(kGrassmannCacheVersion) + ")");
  h.n = static_cast<int>(get_le(in, 4));
  h.k = static_cast<int>(get_le(in, 4));
  h.q = static_cast<int>(get_le(in, 4));
  auto len = get_le(in, 4);
  if (len > 8) throw CacheError(CacheError::Kind::corrupt, "cache: modulus too long");
  for (std::uint64_t i = 0; i < len; ++i) h.modulus.push_back(static_cast<int>(get_le(in, 1)));
  h.count = get_le(in, 8);
  return h;
}

GrassmannIndex read_grassmann_cache(std::istream& in, std::shared_ptr<const FiniteField> field, int n, int k) {
  CacheHeader h = read_cache_header(in);
  if (h.n != n || h.k != k || h.q != field->q() || h.modulus != field->modulus())
    throw CacheError(CacheError::Kind::mismatch, "cache: header does not match requested (n, k, q, modulus)");
  if (Integer(std::to_string(h.count)) != gauss_binom(n, k, field->q()))
    throw CacheError(CacheError::Kind::corrupt, "cache: record count differs from [n, k]_q");
  std::vector<Subspace> subspaces;
  subspaces.reserve(h.count);
  std::vector<Element> buf(static_cast<std::size_t>(n) * k);
  for (std::uint64_t i = 0; i < h.count; ++i) {
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!in) throw CacheError(CacheError::Kind::corrupt, "cache: truncated records");
    for (Element e : buf)
      if (!field->valid(e)) throw CacheError(CacheError::Kind::corrupt, "cache: invalid element code");
    Subspace s = k == 0 ? rref_canonical(*field, n, std::vector<Element>(n, 0))
                        : rref_canonical(*field, n, buf);
    if (s.dim() != k || !std::equal(buf.begin(), buf.end(), s.basis().begin()))
      throw CacheError(CacheError::Kind::corrupt, "cache: record " + std::to_string(i) + " is not in RREF");
    subspaces.push_back(std::move(s));
  }
  if (in.peek() != std::char_traits<char>::eof())
    throw CacheError(CacheError::Kind::corrupt, "cache: trailing bytes");
  try {
    return index_from_list(n, k, std::move(field), std::move(subspaces));
  } catch (const std::invalid_argument& e) {
    throw CacheError(CacheError::Kind::corrupt, std::string("cache: ") + e.what());
  }
}

std::filesystem::path cache_path(const std::filesystem::path& dir, int n, int k, int q) {
  return dir / ("grassmann_n" + std::to_string(n) + "_k" + std::to_string(k) + "_q" +
                std::to_string(q) + ".qgr");
}

std::filesystem::path default_cache_dir() {
  if (const char* env = std::getenv("QEKR_CACHE_DIR"); env && *env) return env;
  return ".qekr-cache";
}

GrassmannIndex load_or_build(const std::filesystem::path& dir, int n, int k,
                             std::shared_ptr<const FiniteField> field, std::uint64_t cap,
                             std::vector<std::string>* warnings) {
  auto path = cache_path(dir, n, k, field->q());
  if (std::filesystem::exists(path)) {
    std::ifstream in(path, std::ios::binary);
    try {
      return read_grassmann_cache(in, field, n, k);
    } catch (const CacheError& e) {
      if (warnings) warnings->push_back("discarding cache " + path.string() + ": " + e.what());
    }
  }
  GrassmannIndex g = enumerate(n, k, field, cap);
  std::filesystem::create_directories(dir);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    write_grassmann_cache(out, g);
  }
  std::filesystem::rename(tmp, path);
  return g;
}

std::vector<std::filesystem::path> list_cache(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  if (!std::filesystem::exists(dir)) return files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".qgr") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  return files;
}

std::size_t clear_cache(const std::filesystem::path& dir) {
  std::size_t removed = 0;
  for (const auto& p : list_cache(dir)) removed += std::filesystem::remove(p) ? 1 : 0;
  return removed;
}

}  // namespace qekr
