#pragma once

// The qekr command surface. Exit codes: 0 every check passed, 1 some check
// failed, 2 usage error, limit exceeded or malformed input.

#include "qekr/report.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qekr::cli {

inline constexpr int kReportSchemaVersion = 1;

enum class Format { json, csv, human };

enum class FamilySource { pencil, random, file };

struct RunConfig {
  std::string command;
  std::string subcommand;

  std::optional<int> n, k, d;
  std::vector<long> qs;
  long n_max = 16;
  long k_max = 7;

  std::uint64_t cap = 20000;
  std::size_t dense_budget = 1500;
  std::optional<std::filesystem::path> cache_dir;
  std::uint64_t seed = 0;
  std::optional<std::size_t> target;
  FamilySource source = FamilySource::pencil;
  std::optional<std::filesystem::path> family_file;
  std::optional<std::filesystem::path> save_path;
  bool spectral = false;

  Format format = Format::human;
  std::optional<std::filesystem::path> output;
  int jobs = 1;
  bool timings = false;

  /// Everything that determines the reports; excludes jobs and output location.
  json to_json() const;
};

/// Thrown for configuration problems that map to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Outcome {
  std::vector<Report> reports;
  std::vector<std::string> warnings;
  /// Extra top-level JSON fields, e.g. the degree profile of a family.
  json extra = json::object();
};

Outcome run_verify(const RunConfig& cfg);
Outcome run_family(const RunConfig& cfg);
/// Cache actions produce no reports; their result lands in `extra`.
Outcome run_cache(const RunConfig& cfg);

/// Serializes an outcome in the configured format.
std::string render(const RunConfig& cfg, const Outcome& outcome);

int exit_code(const Outcome& outcome);

/// Parses argv, runs the command and writes the rendered result to `out` (or
/// the --output file) and diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qekr::cli
