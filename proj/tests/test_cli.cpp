#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = CODEG_CLI_PATH;
const std::string kData = CODEG_TEST_DATA;

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run(const std::string& args, const std::string& env = "") {
  CliRun r;
  std::string cmd = env + " '" + kCli + "' " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);)
    if (!l.empty()) v.push_back(l);
  return v;
}

std::string data_flag() { return "--data '" + kData + "' "; }

struct TempDir {
  fs::path dir;
  explicit TempDir(bool copy_data) {
    dir = fs::temp_directory_path() / ("codeg_cli_" + std::to_string(::getpid()) + "_" +
                                       std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    if (copy_data) fs::copy(kData, dir, fs::copy_options::recursive);
    else fs::create_directories(dir);
  }
  ~TempDir() { fs::remove_all(dir); }
};

}  // namespace

TEST(Cli, CodOfRecord) {
  CliRun r = run(data_flag() + "cod U3_3");
  EXPECT_EQ(r.code, 0);
  auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 8U);
  EXPECT_EQ(ls.front(), "2^4.3^2.7\t1008");
  EXPECT_EQ(ls.back(), "1\t1");
}

TEST(Cli, CodOfTrivialGroup) {
  CliRun r = run(data_flag() + "cod trivial");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out), (std::vector<std::string>{"1\t1"}));
}

TEST(Cli, CodOfFamilyPoint) {
  CliRun r = run(data_flag() + "cod Suzuki q2=8");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out).size(), 6U);
  EXPECT_EQ(run(data_flag() + "cod Suzuki q2=16").code, 2);
  EXPECT_EQ(run(data_flag() + "cod Suzuki q2").code, 2);
}

TEST(Cli, UnknownSelector) { EXPECT_EQ(run(data_flag() + "cod NoSuchGroup").code, 2); }

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run(data_flag() + "verify --target U5_2").code, 2);
  EXPECT_EQ(run(data_flag() + "--format xml cod A5").code, 2);
}

TEST(Cli, OracleDiffAndJson) {
  EXPECT_EQ(run(data_flag() + "oracle A5 --diff").code, 0);
  CliRun r = run(data_flag() + "--format json oracle U3_3");
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("order"), "6048");
  EXPECT_EQ(j.at("rows").size(), 14U);
  EXPECT_EQ(j.at("cod").size(), 8U);
}

TEST(Cli, VerifyThenRecheck) {
  TempDir tmp(false);
  std::string out = (tmp.dir / "report.json").string();
  CliRun v = run(data_flag() + "verify --target both -o '" + out + "'");
  ASSERT_EQ(v.code, 0);
  CliRun c = run("recheck '" + out + "'");
  EXPECT_EQ(c.code, 0) << c.out;
  EXPECT_NE(c.out.find("consistent, closed"), std::string::npos);
  CliRun s = run("report '" + out + "'");
  EXPECT_EQ(s.code, 0);
  EXPECT_NE(s.out.find("verdict closed"), std::string::npos);
}

TEST(Cli, MissingFamilyGivesOpenCase) {
  TempDir tmp(true);
  fs::remove(tmp.dir / "families" / "Suzuki.fam");
  std::string out = (tmp.dir / "report.json").string();
  CliRun v = run("--data '" + tmp.dir.string() + "' verify --target U3_3 -o '" + out + "'");
  EXPECT_EQ(v.code, 1);
  std::ifstream in(out);
  auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j.at("open_cases"), nlohmann::json::array({"U33.case3.suzuki"}));
  EXPECT_EQ(run("recheck '" + out + "'").code, 1);
}

TEST(Cli, MalformedReport) {
  TempDir tmp(false);
  std::string bad = (tmp.dir / "bad.json").string();
  std::ofstream(bad) << "{\"format_version\": 2}";
  EXPECT_EQ(run("recheck '" + bad + "'").code, 2);
  std::ofstream(bad) << "{not json";
  EXPECT_EQ(run("recheck '" + bad + "'").code, 2);
  EXPECT_EQ(run("recheck '" + (tmp.dir / "absent.json").string() + "'").code, 2);
}

TEST(Cli, DataFlagBeatsEnvironment) {
  TempDir empty(false);
  std::string env = "CODEG_DATA='" + empty.dir.string() + "'";
  EXPECT_EQ(run("cod U3_3", env).code, 2);
  EXPECT_EQ(run(data_flag() + "cod U3_3", env).code, 0);
  EXPECT_EQ(run("cod U3_3", "CODEG_DATA='" + kData + "'").code, 0);
}
