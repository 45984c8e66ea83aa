#include "qekr/cli.hpp"

#include "qekr/families.hpp"
#include "qekr/family_io.hpp"
#include "qekr/grassmann_cache.hpp"
#include "qekr/identities.hpp"
#include "qekr/proofchain.hpp"
#include "qekr/qarith.hpp"
#include "qekr/random.hpp"
#include "qekr/schemes.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace qekr::cli {
namespace {

const char* format_name(Format f) {
  switch (f) {
    case Format::json: return "json";
    case Format::csv: return "csv";
    case Format::human: return "human";
  }
  return "human";
}

const char* source_name(FamilySource s) {
  switch (s) {
    case FamilySource::pencil: return "pencil";
    case FamilySource::random: return "random";
    case FamilySource::file: return "file";
  }
  return "pencil";
}

int need(const std::optional<int>& v, const char* name) {
  if (!v) throw UsageError(std::string("--") + name + " is required");
  return *v;
}

long single_q(const RunConfig& cfg) {
  if (cfg.qs.size() != 1) throw UsageError("exactly one --q is required");
  return cfg.qs.front();
}

/// Grassmannians come from the cache directory when one is configured.
struct Instance {
  std::shared_ptr<std::vector<std::string>> warnings = std::make_shared<std::vector<std::string>>();
  std::unique_ptr<Workspace> ws;
};

Instance make_instance(const RunConfig& cfg, int n, int k, int q) {
  if (n < 1 || k < 1 || k > n) throw UsageError("need 1 <= k <= n");
  Instance inst;
  WorkspaceOptions opts;
  opts.cap = cfg.cap;
  opts.dense_budget = cfg.dense_budget;
  opts.jobs = cfg.jobs;
  std::optional<std::filesystem::path> dir = cfg.cache_dir;
  if (!dir && std::getenv("QEKR_CACHE_DIR")) dir = default_cache_dir();
  if (dir) {
    auto warnings = inst.warnings;
    auto mutex = std::make_shared<std::mutex>();
    opts.loader = [dir = *dir, warnings, mutex](int ln, int lk, std::shared_ptr<const FiniteField> field,
                                                 std::uint64_t cap) {
      std::vector<std::string> w;
      auto g = load_or_build(dir, ln, lk, std::move(field), cap, &w);
      std::lock_guard lock(*mutex);
      warnings->insert(warnings->end(), w.begin(), w.end());
      return g;
    };
  }
  inst.ws = std::make_unique<Workspace>(n, k, q, std::move(opts));
  return inst;
}

std::vector<Report> identities_suite(const Workspace& ws, const RunConfig& cfg) {
  const int n = ws.n(), k = ws.k(), q = ws.q();
  std::vector<Report> out;
  for (long m = 1; m <= n; ++m) out.push_back(check_q_binomial_identities(m, q, Rational(2, 5), 10));
  for (long d = 0; 2 * d <= n; ++d)
    for (long r = 0; r <= d; ++r) out.push_back(check_alternating_sum(n, d, r, q));
  for (int m = 0; m <= k; ++m)
    for (int l = 0; l <= k && l + m <= n; ++l)
      out.push_back(count_disjoint(ws.grassmannian(m)[0], ws.grassmannian(l)).report);

  for (int i = 0; i <= k; ++i)
    for (int j = i; j <= k; ++j)
      for (int r = j; r <= k; ++r) out.push_back(verify_incidence_identities(ws, i, j, r));
  if (k < n)
    for (int i = 0; i <= k; ++i)
      for (int j = 0; j <= i; ++j) out.push_back(verify_gram_expansion(ws, i, j));
  if (ws.dense_feasible() && n >= 2 * k)
    for (int i = 0; i <= k; ++i)
      for (int j = 0; j <= k; ++j) out.push_back(verify_gram_eigenvalue(ws, i, j));

  if (n >= 2 * k) {
    const auto& g = ws.grassmannian(k);
    std::vector<std::pair<std::string, RationalVector>> vectors;
    vectors.emplace_back("empty", RationalVector(g.size(), 0));
    vectors.emplace_back("pencil", canonical_pencil(g).indicator());
    vectors.emplace_back("random_family", random_intersecting(g, cfg.seed, g.size()).indicator());
    vectors.emplace_back("random_vector", random_rational_vector(g.size(), cfg.seed));
    for (int d = 1; d < k; ++d)
      for (const auto& [name, h] : vectors) {
        Report r = verify_degree_form(ws, d, h);
        r.params["vector"] = name;
        out.push_back(std::move(r));
      }
  }
  return out;
}

SweepGrid grid_of(const RunConfig& cfg) {
  SweepGrid grid;
  if (!cfg.qs.empty()) grid.qs = cfg.qs;
  grid.k_max = cfg.k_max;
  grid.n_max = cfg.n_max;
  for (long q : grid.qs)
    if (!is_prime_power(q)) throw UsageError("q = " + std::to_string(q) + " is not a prime power");
  return grid;
}

Report intersection_report(const Family& f) {
  const auto& g = f.grassmannian();
  Report rep("intersecting", {{"n", g.ambient()}, {"k", g.dim()}, {"q", g.q()}, {"size", f.size()}});
  auto check = is_intersecting(f);
  rep.values["intersecting"] = check.intersecting;
  if (!check.intersecting) {
    const auto& m = f.members();
    rep.fail("members meet trivially",
             {{"pair", {subspace_json(g[m[check.witness->first]]), subspace_json(g[m[check.witness->second]])}}});
  }
  return rep;
}

std::string param_text(const json& params) {
  std::string s;
  for (const auto& [key, v] : params.items()) {
    if (!s.empty()) s += ' ';
    s += key + '=' + (v.is_string() ? v.get<std::string>() : v.dump());
  }
  return s;
}

}  // namespace

json RunConfig::to_json() const {
  json j = {{"command", command},
            {"subcommand", subcommand},
            {"cap", cap},
            {"dense_budget", dense_budget},
            {"seed", seed},
            {"format", format_name(format)},
            {"timings", timings}};
  if (n) j["n"] = *n;
  if (k) j["k"] = *k;
  if (d) j["d"] = *d;
  if (!qs.empty()) j["q"] = qs;
  if (command == "verify" && (subcommand == "inequalities" || subcommand == "all")) {
    j["n_max"] = n_max;
    j["k_max"] = k_max;
  }
  if (command == "family") {
    j["source"] = source_name(source);
    if (target) j["target"] = *target;
    if (family_file) j["file"] = family_file->generic_string();
    j["spectral"] = spectral;
  }
  return j;
}

Outcome run_verify(const RunConfig& cfg) {
  Outcome out;
  const std::string& suite = cfg.subcommand;
  bool instance_suite = suite == "identities" || suite == "spectrum" || suite == "all";
  if (instance_suite) {
    int n = need(cfg.n, "n"), k = need(cfg.k, "k");
    int q = static_cast<int>(single_q(cfg));
    auto inst = make_instance(cfg, n, k, q);
    if (suite == "identities" || suite == "all") {
      auto r = identities_suite(*inst.ws, cfg);
      out.reports.insert(out.reports.end(), r.begin(), r.end());
    }
    if (suite == "spectrum" || suite == "all") {
      if (n < 2 * k) throw UsageError("the spectrum suite requires n >= 2k");
      out.reports.push_back(verify_spectrum(*inst.ws));
    }
    out.warnings = *inst.warnings;
  }
  if (suite == "inequalities" || suite == "all") {
    RunConfig sweep = cfg;
    if (suite == "all") sweep.qs.clear();
    auto r = sweep_proofchain(grid_of(sweep), cfg.jobs);
    out.reports.insert(out.reports.end(), r.begin(), r.end());
  }
  if (!instance_suite && suite != "inequalities") throw UsageError("unknown suite '" + suite + "'");
  return out;
}

Outcome run_family(const RunConfig& cfg) {
  Outcome out;
  std::optional<FamilyDocument> doc;
  int n, k, q;
  if (cfg.source == FamilySource::file) {
    if (!cfg.family_file) throw UsageError("--file requires a path");
    doc = read_family_document(*cfg.family_file);
    n = doc->n;
    k = doc->k;
    q = doc->q;
  } else {
    n = need(cfg.n, "n");
    k = need(cfg.k, "k");
    q = static_cast<int>(single_q(cfg));
  }
  int d = cfg.d.value_or(1);
  if (d < 1 || d > k) throw UsageError("need 1 <= d <= k");

  auto inst = make_instance(cfg, n, k, q);
  const Workspace& ws = *inst.ws;
  const auto& g = ws.grassmannian(k);
  std::optional<Family> family;
  switch (cfg.source) {
    case FamilySource::pencil:
      family = canonical_pencil(g);
      break;
    case FamilySource::random:
      family = random_intersecting(g, cfg.seed, cfg.target.value_or(g.size()));
      break;
    case FamilySource::file: {
      auto loaded = bind_family(*doc, g);
      family = std::move(loaded.family);
      out.warnings = std::move(loaded.warnings);
      break;
    }
  }
  const Family& f = *family;
  if (cfg.save_path) save_family(f, *cfg.save_path);

  out.reports.push_back(intersection_report(f));
  DegreeProfile profile = degree_profile(f, ws.grassmannian(d), ws.jobs());
  out.reports.push_back(profile.report);
  out.reports.push_back(check_bounds(f, profile));
  if (cfg.spectral) {
    out.reports.push_back(check_disjoint_degree_sum(f, profile, ws));
    if (k > d && n >= 2 * k) {
      out.reports.push_back(hoffman_check(f, d, ws));
      out.reports.push_back(degree_excess_quantity(f, profile, ws));
    }
  }
  out.extra["profile"] = {{"d", d},
                          {"delta", profile.delta},
                          {"argmin", subspace_json(ws.grassmannian(d)[profile.argmin])},
                          {"size", f.size()},
                          {"provenance", f.provenance()}};
  auto more = *inst.warnings;
  out.warnings.insert(out.warnings.end(), more.begin(), more.end());
  return out;
}

Outcome run_cache(const RunConfig& cfg) {
  Outcome out;
  auto dir = cfg.cache_dir.value_or(default_cache_dir());
  const std::string& action = cfg.subcommand;
  if (action == "build") {
    int n = need(cfg.n, "n"), k = need(cfg.k, "k");
    int q = static_cast<int>(single_q(cfg));
    if (k < 0 || k > n) throw UsageError("need 0 <= k <= n");
    auto g = load_or_build(dir, n, k, make_field(q), cfg.cap, &out.warnings);
    out.extra["cache"] = {{"path", cache_path(dir, n, k, q).generic_string()}, {"count", g.size()}};
  } else if (action == "inspect") {
    json entries = json::array();
    for (const auto& path : list_cache(dir)) {
      std::ifstream in(path, std::ios::binary);
      json e = {{"path", path.generic_string()}};
      try {
        auto h = read_cache_header(in);
        e["format_version"] = h.version;
        e["n"] = h.n;
        e["k"] = h.k;
        e["q"] = h.q;
        e["modulus"] = h.modulus;
        e["count"] = h.count;
      } catch (const CacheError& ex) {
        e["error"] = ex.what();
      }
      entries.push_back(std::move(e));
    }
    out.extra["cache"] = std::move(entries);
  } else if (action == "clear") {
    out.extra["cache"] = {{"removed", clear_cache(dir)}};
  } else {
    throw UsageError("unknown cache action '" + action + "'");
  }
  return out;
}

std::string render(const RunConfig& cfg, const Outcome& outcome) {
  std::size_t failed = 0;
  std::map<std::string, std::size_t> statuses;
  for (const auto& r : outcome.reports) {
    if (!r.ok()) ++failed;
    ++statuses[to_string(r.status)];
  }
  switch (cfg.format) {
    case Format::json: {
      json j = {{"schema_version", kReportSchemaVersion}, {"config", cfg.to_json()}, {"warnings", outcome.warnings}};
      for (const auto& [key, v] : outcome.extra.items()) j[key] = v;
      json reports = json::array();
      for (const auto& r : outcome.reports) reports.push_back(to_json(r, cfg.timings));
      j["reports"] = std::move(reports);
      j["summary"] = {{"checks", outcome.reports.size()},
                      {"failed", failed},
                      {"statuses", statuses},
                      {"pass", failed == 0}};
      return j.dump(2) + "\n";
    }
    case Format::csv:
      return sweep_csv(outcome.reports);
    case Format::human: {
      std::ostringstream os;
      for (const auto& w : outcome.warnings) os << "warning: " << w << '\n';
      for (const auto& r : outcome.reports) {
        os << (r.ok() ? "PASS  " : "FAIL  ") << r.check << "  " << param_text(r.params);
        if (r.status != Status::pass && r.status != Status::fail) os << "  [" << to_string(r.status) << ']';
        os << '\n';
        if (!r.ok()) {
          for (const auto& note : r.notes) os << "      " << note << '\n';
          if (r.witness) os << "      witness: " << r.witness->dump() << '\n';
        }
      }
      if (outcome.extra.contains("profile")) {
        const json& p = outcome.extra.at("profile");
        os << "profile: d=" << p.at("d") << " |F|=" << p.at("size") << " delta=" << p.at("delta")
           << " attained at " << p.at("argmin").dump() << '\n';
        for (const auto& r : outcome.reports)
          if (r.check == "degree_bounds")
            for (const auto& [name, v] : r.values.items())
              if (v.is_object())
                os << "  " << name << " = " << v.at("value").get<std::string>() << ", bound "
                   << v.at("bound").get<std::string>() << ", slack " << v.at("slack").get<std::string>() << '\n';
      }
      if (outcome.extra.contains("cache")) os << outcome.extra.at("cache").dump(2) << '\n';
      if (!outcome.reports.empty())
        os << "summary: " << outcome.reports.size() << " checks, " << failed << " failed\n";
      return os.str();
    }
  }
  return {};
}

int exit_code(const Outcome& outcome) { return all_ok(outcome.reports) ? 0 : 1; }

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Exact verification of the degree version of the Erdos-Ko-Rado theorem for vector spaces"};
  app.require_subcommand(1);

  std::string format = "human";
  std::string output;
  std::string cache_dir;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv", "human"}));
    sub->add_option("--output", output, "Write the result to this file");
    sub->add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::Range(1, 256));
    sub->add_option("--cap", cfg.cap, "Largest Grassmannian to enumerate")->check(CLI::PositiveNumber);
    sub->add_option("--dense-budget", cfg.dense_budget, "Largest [n,k] for dense projectors");
    sub->add_option("--cache-dir", cache_dir, "Grassmannian cache directory (default $QEKR_CACHE_DIR)");
    sub->add_flag("--timings", cfg.timings, "Include wall times in reports");
    sub->add_option("--n", cfg.n, "Ambient dimension");
    sub->add_option("--k", cfg.k, "Subspace dimension");
    sub->add_option("--q", cfg.qs, "Field order (comma-separated list for sweeps)")->delimiter(',');
  };

  auto* verify = app.add_subcommand("verify", "Run a check suite");
  verify->add_option("suite", cfg.subcommand, "identities | spectrum | inequalities | all")
      ->required()
      ->check(CLI::IsMember({"identities", "spectrum", "inequalities", "appendix", "all"}));
  verify->add_option("--n-max", cfg.n_max, "Largest n of the inequality sweep");
  verify->add_option("--k-max", cfg.k_max, "Largest k of the inequality sweep");
  verify->add_option("--seed", cfg.seed, "Seed for random test vectors");
  common(verify);

  auto* family = app.add_subcommand("family", "Certify the degree and size bounds for one family");
  bool pencil = false, random = false;
  std::string file, save;
  auto* o_pencil = family->add_flag("--pencil", pencil, "Canonical point pencil");
  auto* o_random = family->add_flag("--random", random, "Seeded greedy random intersecting family");
  auto* o_file = family->add_option("--file", file, "Family file");
  o_pencil->excludes(o_random)->excludes(o_file);
  o_random->excludes(o_file);
  family->add_option("--d", cfg.d, "Degree dimension d (default 1)");
  family->add_option("--seed", cfg.seed, "Seed for --random");
  family->add_option("--target", cfg.target, "Size target for --random (default: until exhaustion)");
  family->add_option("--save", save, "Write the family to this file");
  family->add_flag("--spectral", cfg.spectral, "Also run the spectral inequalities");
  common(family);

  auto* cache = app.add_subcommand("cache", "Manage the Grassmannian cache");
  cache->add_option("action", cfg.subcommand, "build | inspect | clear")
      ->required()
      ->check(CLI::IsMember({"build", "inspect", "clear"}));
  common(cache);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  cfg.format = format == "json" ? Format::json : format == "csv" ? Format::csv : Format::human;
  if (!output.empty()) cfg.output = output;
  if (!cache_dir.empty()) cfg.cache_dir = cache_dir;
  if (!save.empty()) cfg.save_path = save;
  if (cfg.subcommand == "appendix") cfg.subcommand = "inequalities";

  Outcome outcome;
  try {
    if (*verify) {
      cfg.command = "verify";
      outcome = run_verify(cfg);
    } else if (*family) {
      cfg.command = "family";
      if (!pencil && !random && file.empty()) throw UsageError("one of --pencil, --random, --file is required");
      cfg.source = random ? FamilySource::random : !file.empty() ? FamilySource::file : FamilySource::pencil;
      if (!file.empty()) cfg.family_file = file;
      outcome = run_family(cfg);
    } else {
      cfg.command = "cache";
      outcome = run_cache(cfg);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  std::string text = render(cfg, outcome);
  if (cfg.output) {
    std::ofstream file_out(*cfg.output);
    if (!file_out) {
      err << "error: cannot write " << cfg.output->string() << '\n';
      return 2;
    }
    file_out << text;
  } else {
    out << text;
  }
  for (const auto& w : outcome.warnings)
    if (cfg.format != Format::human || cfg.output) err << "warning: " << w << '\n';
  return exit_code(outcome);
}

}  // namespace qekr::cli
