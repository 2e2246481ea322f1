#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>
#include <sys/wait.h>

#include "limsup/config.hpp"
#include "limsup/report.hpp"

using namespace limsup;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

std::string lab() {
  const char* p = std::getenv("LIMSUP_LAB");
  return p ? p : LIMSUP_LAB_PATH;
}

std::string cfg(const std::string& name) {
  const char* p = std::getenv("LIMSUP_EXAMPLES");
  return std::string(p ? p : LIMSUP_EXAMPLES_DIR) + "/" + name;
}

Run run(const std::string& args, const std::string& env = "") {
  std::string cmd = env + " " + lab() + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
  int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string temp_file(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST(Config, RejectsUnknownFields) {
  EXPECT_THROW(parse_config(R"({"schema_version":1,"instance":{"n":1,"m":1,"mode":"nonweighted","psi":[{"kind":"power","tau":2}],"extra":1}})"),
               ConfigError);
  EXPECT_THROW(parse_config(R"({"schema_version":1,"instance":{"n":1,"m":1,"mode":"nonweighted","psi":[{"kind":"power","tau":2,"x":0}]}})"),
               ConfigError);
  EXPECT_THROW(parse_config("not json"), ConfigError);
  EXPECT_THROW(parse_config(R"({"schema_version":2,"instance":{"n":1,"m":1,"mode":"nonweighted","psi":[{"kind":"power","tau":2}]}})"),
               ConfigError);
}

TEST(Config, ParsesTheSchemaExample) {
  auto c = parse_config(
      R"({"schema_version":1, "instance":{"n":1,"m":2,"mode":"weighted","psi":[{"kind":"power","tau":1.0,"coeff":1.0},{"kind":"power","tau":3.0,"coeff":1.0}],"f":{"kind":"power","s":1.5}}, "run":{"Kmax":14,"samples":1000000,"seed":42}})");
  EXPECT_EQ(c.instance.m, 2);
  EXPECT_EQ(c.instance.mode, Mode::weighted);
  EXPECT_EQ(c.run.kmax, 14);
  EXPECT_EQ(c.run.samples, 1000000u);
  ASSERT_TRUE(c.instance.f.has_value());
}

TEST(Report, ConfigHashIsGitBlobId) {
  // git hash-object of "hello\n"
  EXPECT_EQ(git_blob_hash("hello\n"), "ce013625030ba8dba906f756967f9e9ca394464a");
  EXPECT_EQ(git_blob_hash(""), "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
}

TEST(Cli, MalformedConfigExitsWithConfigError) {
  EXPECT_EQ(run("criteria --config " + cfg("bad_m0.json")).code, 2);
  EXPECT_EQ(run("criteria --config /nonexistent/x.json").code, 2);
  auto bad = temp_file("limsup_unknown.json",
                       R"({"schema_version":1,"instance":{"n":1,"m":1,"mode":"nonweighted","psi":[{"kind":"power","tau":2}]},"colour":1})");
  EXPECT_EQ(run("dims --config " + bad).code, 2);
  EXPECT_EQ(run("nosuchcommand").code, 2);
}

TEST(Cli, DimsOnWeightedInstance) {
  auto r = run("dims --config " + cfg("weighted_1_3.json"));
  ASSERT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  EXPECT_DOUBLE_EQ(j["results"]["dimensions"]["rynne_dickinson"]["value"].get<double>(), 1.25);
  EXPECT_EQ(j["command"], "dims");
  EXPECT_EQ(j["config_hash"].get<std::string>().size(), 40u);
}

TEST(Cli, CriteriaReportsFlipAndAudit) {
  auto r = run("criteria --config " + cfg("weighted_1_3.json") + " --Kmax 10");
  ASSERT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  EXPECT_NEAR(j["results"]["flip_exponent"].get<double>(), 1.25, 1e-9);
  EXPECT_FALSE(j["results"]["verdicts"]["hausdorff"]["audit"].empty());
  EXPECT_EQ(j["results"]["run"]["Kmax"], 10);
}

TEST(Cli, CriteriaKGConverges) {
  auto r = run("criteria --config " + cfg("kg_square.json"));
  ASSERT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  EXPECT_EQ(j["results"]["series"][0]["kind"], "KG");
  EXPECT_EQ(j["results"]["series"][0]["estimate"]["classification"], "ConvergesSymbolic");
}

TEST(Cli, FourierTwoThirds) {
  auto r = run("fourier --config " + cfg("fourier_1_2.json"));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["results"]["fourier_dim"]["value"].get<double>(), 2.0 / 3.0);
}

TEST(Cli, DecomposeCountsIndices) {
  auto r = run("decompose --config " + cfg("mult_star.json") + " --samples 20000");
  ASSERT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  EXPECT_EQ(j["results"]["count"], 4);
  EXPECT_EQ(j["results"]["sandwich"]["left_violations"], 0);
  auto csv = run("decompose --config " + cfg("mult_star.json") + " --samples 20000 --format csv");
  EXPECT_EQ(csv.out.substr(0, csv.out.find('\n')), "k1,k2,N");
}

TEST(Cli, ReportsAreByteIdenticalAcrossWorkerCounts) {
  std::string args = "measure --config " + cfg("mult_star.json") + " --samples 200000";
  auto a = run(args, "LIMSUP_WORKERS=1");
  auto b = run(args, "LIMSUP_WORKERS=8");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  auto c = run("cover --config " + cfg("kg_square.json"), "LIMSUP_WORKERS=1");
  auto d = run("cover --config " + cfg("kg_square.json"), "LIMSUP_WORKERS=8");
  EXPECT_EQ(c.out, d.out);
}

TEST(Cli, VerifySuiteFilter) {
  auto r = run("verify --suite content");
  ASSERT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  auto crit = j["results"]["criteria"];
  ASSERT_EQ(crit.size(), 2u);
  EXPECT_EQ(crit[0]["id"], 1);
  EXPECT_EQ(crit[1]["id"], 2);
  EXPECT_EQ(run("verify --suite nonsense").code, 2);
}

TEST(Cli, CorruptBaselineFailsLoudly) {
  auto bad = temp_file("limsup_bad_baseline.json", "{ this is not json");
  auto r = run("verify --suite 10 --baseline " + bad);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("baseline missing"), std::string::npos);
  auto gone = run("verify --suite 10 --baseline /nonexistent/baseline.json");
  EXPECT_EQ(gone.code, 1);
}
