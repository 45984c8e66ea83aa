#include "qekr/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "qekr");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = qekr::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

}  // namespace

TEST(Cli, VerifyIdentities) {
  auto r = run({"verify", "identities", "--n", "5", "--k", "2", "--q", "2"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("summary:"), std::string::npos);
}

TEST(Cli, VerifySpectrumJson) {
  auto r = run({"verify", "spectrum", "--n", "4", "--k", "2", "--q", "2", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = qekr::json::parse(r.out);
  EXPECT_EQ(j.at("schema_version"), 1);
  EXPECT_EQ(j.at("reports")[0].at("values").at("multiplicities"), qekr::json({"1", "14", "20"}));
  EXPECT_TRUE(j.at("summary").at("pass").get<bool>());
}

TEST(Cli, InequalitiesAndAlias) {
  auto a = run({"verify", "inequalities", "--q", "2", "--n-max", "30", "--format", "csv"});
  auto b = run({"verify", "appendix", "--q", "2", "--n-max", "30", "--format", "csv"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.substr(0, a.out.find('\n')), "n,k,d,i,q,check,pass,lhs,rhs");
}

TEST(Cli, FamilyPencil) {
  auto r = run({"family", "--pencil", "--n", "7", "--k", "3", "--q", "2", "--d", "2", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = qekr::json::parse(r.out);
  EXPECT_EQ(j.at("profile").at("delta"), 1);
  for (const auto& rep : j.at("reports"))
    if (rep.at("check") == "degree_bounds") EXPECT_EQ(rep.at("values").at("delta_2").at("slack"), "0");
}

TEST(Cli, FamilyRandomAndFileRoundTrip) {
  auto path = temp("qekr_cli_family.json");
  auto r = run({"family", "--random", "--seed", "9", "--n", "5", "--k", "2", "--q", "2", "--d", "1", "--save",
                path.string(), "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto from_file = run({"family", "--file", path.string(), "--d", "1", "--format", "json"});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  auto a = qekr::json::parse(r.out), b = qekr::json::parse(from_file.out);
  EXPECT_EQ(a.at("profile"), b.at("profile"));
  EXPECT_EQ(a.at("profile").at("provenance").at("kind"), "random");
  std::filesystem::remove(path);
}

TEST(Cli, MalformedFamilyFileExitsTwo) {
  auto path = temp("qekr_bad.fam");
  std::ofstream(path) << "{\"format_version\": 1, \"n\": 3";
  EXPECT_EQ(run({"family", "--file", path.string()}).code, 2);
  std::ofstream(path) << R"({"format_version": 1, "n": 3, "k": 2, "q": 4, "modulus": [1,1,1], "members": [[[1,0,5],[0,1,0]]]})";
  EXPECT_EQ(run({"family", "--file", path.string()}).code, 2);
  std::filesystem::remove(path);
  EXPECT_EQ(run({"family", "--file", path.string()}).code, 2);
}

TEST(Cli, NonIntersectingFamilyFails) {
  auto path = temp("qekr_disjoint.fam");
  std::ofstream(path)
      << R"({"format_version": 1, "n": 4, "k": 2, "q": 2, "modulus": [], "members": [[[1,0,0,0],[0,1,0,0]], [[0,0,1,0],[0,0,0,1]]]})";
  EXPECT_EQ(run({"family", "--file", path.string()}).code, 1);
  std::filesystem::remove(path);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"verify"}).code, 2);
  EXPECT_EQ(run({"verify", "nonsense"}).code, 2);
  EXPECT_EQ(run({"verify", "identities", "--n", "5"}).code, 2);
  EXPECT_EQ(run({"verify", "spectrum", "--n", "3", "--k", "2", "--q", "2"}).code, 2);
  EXPECT_EQ(run({"verify", "identities", "--n", "5", "--k", "2", "--q", "6"}).code, 2);
  EXPECT_EQ(run({"family", "--pencil", "--random", "--n", "5", "--k", "2", "--q", "2"}).code, 2);
  EXPECT_EQ(run({"family", "--pencil", "--n", "8", "--k", "4", "--q", "2", "--cap", "100"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, DeterministicAcrossJobs) {
  auto a = run({"verify", "all", "--n", "5", "--k", "2", "--q", "2", "--format", "json", "--jobs", "1"});
  auto b = run({"verify", "all", "--n", "5", "--k", "2", "--q", "2", "--format", "json", "--jobs", "4"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, CacheCommands) {
  auto dir = temp("qekr_cli_cache");
  std::filesystem::remove_all(dir);
  auto built = run({"cache", "build", "--n", "7", "--k", "3", "--q", "2", "--cache-dir", dir.string(), "--format", "json"});
  ASSERT_EQ(built.code, 0) << built.err;
  EXPECT_EQ(qekr::json::parse(built.out).at("cache").at("count"), 11811);
  auto inspected = run({"cache", "inspect", "--cache-dir", dir.string(), "--format", "json"});
  auto entries = qekr::json::parse(inspected.out).at("cache");
  ASSERT_EQ(entries.size(), 1u);
  EXPECT_EQ(entries[0].at("n"), 7);
  auto cached = run({"family", "--pencil", "--n", "7", "--k", "3", "--q", "2", "--d", "2", "--cache-dir", dir.string()});
  EXPECT_EQ(cached.code, 0);
  auto cleared = run({"cache", "clear", "--cache-dir", dir.string(), "--format", "json"});
  EXPECT_GE(qekr::json::parse(cleared.out).at("cache").at("removed").get<int>(), 1);
  std::filesystem::remove_all(dir);
}
