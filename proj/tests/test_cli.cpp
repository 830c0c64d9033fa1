#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "holoflow/cli/cli.hpp"

namespace cli = holoflow::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << content;
  return p;
}

}  // namespace

TEST(Cli, SameSeedIsByteIdentical) {
  const Result a = run({"matrix-bound", "--count", "20", "--seed", "11"});
  const Result b = run({"matrix-bound", "--count", "20", "--seed", "11"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.err, b.err);
  const Result c = run({"matrix-bound", "--count", "20", "--seed", "12"});
  EXPECT_NE(a.out, c.out);
}

TEST(Cli, VerdictLineAndCsvHeader) {
  const Result r = run({"optimal"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.err.rfind("PASS optimal:", 0), 0u) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')).find(','), r.out.find(','));
}

TEST(Cli, FailedAssertionExitsOne) {
  const Result r = run({"modulus", "--modulus", "power:0.5", "--gammas", "0.25", "--expect", "pass"});
  EXPECT_EQ(r.code, cli::kExitAssertion);
  EXPECT_NE(r.err.find("FAIL modulus"), std::string::npos);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  EXPECT_EQ(run({"no-such-command"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"optimal", "--bogus", "1"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"optimal", "--alpha", "0.95", "--beta", "0.9"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"optimal", "--beta", "1.5"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"disc", "--k", "10,abc"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"norms", "--field", "gaussian:x"}).code, cli::kExitUsage);
}

TEST(Cli, HelpExitsZero) {
  const Result top = run({"--help"});
  EXPECT_EQ(top.code, 0);
  EXPECT_NE(top.out.find("trouve-roundtrip"), std::string::npos);
  EXPECT_EQ(run({"flow", "--help"}).code, 0);
}

TEST(Cli, OutFlagWritesFile) {
  const auto path = std::filesystem::temp_directory_path() / "holoflow_cli_out.csv";
  std::filesystem::remove(path);
  const Result r = run({"optimal", "--out", path.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_FALSE(header.empty());
  EXPECT_EQ(run({"optimal", "--out", "/nonexistent-dir/x.csv"}).code, cli::kExitUsage);
}

TEST(Cli, ConfigValuesAndCommandLineOverride) {
  const auto cfg = temp_file("holoflow_cli.cfg", "# comment\ncount = 5\nseed=3\n");
  const Result from_cfg = run({"matrix-bound", "--config", cfg.string()});
  const Result direct = run({"matrix-bound", "--count", "5", "--seed", "3"});
  EXPECT_EQ(from_cfg.code, 0);
  EXPECT_EQ(from_cfg.out, direct.out);
  const Result overridden = run({"matrix-bound", "--config", cfg.string(), "--seed", "4"});
  EXPECT_EQ(overridden.out, run({"matrix-bound", "--count", "5", "--seed", "4"}).out);
}

TEST(Cli, ConfigErrorsNameTheLine) {
  const auto unknown = temp_file("holoflow_cli_bad1.cfg", "count=5\nfrobnicate=1\n");
  const Result a = run({"matrix-bound", "--config", unknown.string()});
  EXPECT_EQ(a.code, cli::kExitUsage);
  EXPECT_NE(a.err.find(":2: unknown key 'frobnicate'"), std::string::npos) << a.err;
  const auto bad = temp_file("holoflow_cli_bad2.cfg", "seed=1\n\ncount=many\n");
  const Result b = run({"matrix-bound", "--config", bad.string()});
  EXPECT_EQ(b.code, cli::kExitUsage);
  EXPECT_NE(b.err.find(":3: count"), std::string::npos) << b.err;
  EXPECT_EQ(run({"matrix-bound", "--config", "/nonexistent.cfg"}).code, cli::kExitUsage);
}

TEST(Cli, ZeroFlowIsExact) {
  const Result r = run({"flow", "--field", "zero", "--steps", "16"});
  EXPECT_EQ(r.code, 0) << r.err;
}
