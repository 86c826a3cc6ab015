#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ghzframe/commands.hpp"

using namespace ghzframe;

namespace {

RunConfig config_for(const std::string& command) {
  RunConfig c;
  c.command = command;
  return c;
}

struct Run {
  int code;
  std::string out;
};

Run run_binary(const std::string& args) {
  const std::string cmd = std::string(GHZFRAME_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, {}};
  std::string out;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Verify, PassesAndReportsTables) {
  auto c = config_for("verify");
  c.trials = 10;
  c.tables = true;
  const auto r = run_command(c);
  EXPECT_EQ(r.exit_code, kExitOk);
  const auto j = json::parse(r.output);
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_TRUE(j["first_failure"].is_null());
  EXPECT_EQ(j["decompositions"]["checks"].size(), 8u);
  EXPECT_EQ(j["decision_tree"]["branches"].size(), 4u);
  EXPECT_EQ(j["logical_z_table"]["transcripts"].size(), 16u);
}

TEST(Verify, CorruptExitsOne) {
  auto c = config_for("verify");
  c.trials = 5;
  c.corrupt = true;
  const auto r = run_command(c);
  EXPECT_EQ(r.exit_code, kExitCheckFailed);
  EXPECT_EQ(json::parse(r.output)["first_failure"], "GHZ:ZZZ");
}

TEST(Play, JsonAndCsv) {
  auto c = config_for("play");
  c.trials = 50;
  c.strategy = StrategyKind::frame_free;
  c.adversary = Adversary::scramble_all;
  const auto j = json::parse(run_command(c).output);
  EXPECT_EQ(j["wins"], 50);
  EXPECT_EQ(j["win_rate"], 1.0);
  EXPECT_EQ(j["rng"], "mt19937_64");

  c.format = OutputFormat::csv;
  c.transcripts_path = "t.csv";
  const auto r = run_command(c);
  std::istringstream rows(r.output);
  std::string line;
  int n = 0;
  std::getline(rows, line);
  EXPECT_EQ(line, "trial,seed,questions,answers,win");
  while (std::getline(rows, line)) ++n;
  EXPECT_EQ(n, 50);
  ASSERT_EQ(r.files.count("t.csv"), 1u);
  std::istringstream t(r.files.at("t.csv"));
  int entries = -1;
  while (std::getline(t, line)) ++entries;
  EXPECT_EQ(entries, 50 * 12);
}

TEST(Play, TranscriptsNeedFrameFree) {
  auto c = config_for("play");
  c.trials = 5;
  c.transcripts_path = "x.csv";
  EXPECT_EQ(run_command(c).exit_code, kExitUsage);
}

TEST(Bound, BothGames) {
  auto c = config_for("bound");
  EXPECT_EQ(json::parse(run_command(c).output)["bound"], "3/4");
  c.game = "apples";
  EXPECT_EQ(json::parse(run_command(c).output)["bound"], "3/4");
  c.game = "chess";
  EXPECT_EQ(run_command(c).exit_code, kExitUsage);
}

TEST(Bell, CountsAndUsage) {
  auto c = config_for("bell");
  EXPECT_EQ(json::parse(run_command(c).output)["satisfying"], 0);
  c.drop_constraint = 2;
  const auto j = json::parse(run_command(c).output);
  EXPECT_EQ(j["satisfying"], 8);
  EXPECT_EQ(j["active_constraints"].size(), 3u);
  c.drop_constraint = 5;
  EXPECT_EQ(run_command(c).exit_code, kExitUsage);
}

TEST(Tasks, ApplesAndSecretShare) {
  auto c = config_for("tasks");
  c.trials = 2;
  c.task = "apples-frame-free";
  c.adversary = Adversary::scramble_all;
  auto j = json::parse(run_command(c).output);
  EXPECT_EQ(j["success_rate"], 1.0);
  EXPECT_EQ(j["n_trials"], 64);

  c.task = "apples";
  EXPECT_EQ(run_command(c).exit_code, kExitUsage);

  c.task = "secret-share";
  c.trials = 400;
  j = json::parse(run_command(c).output);
  EXPECT_EQ(j["qber"], 0.0);
  EXPECT_EQ(j["success_rate"], 1.0);
}

TEST(Usage, UnknownCommandAndCsvWhereUnsupported) {
  EXPECT_EQ(run_command(config_for("dance")).exit_code, kExitUsage);
  auto c = config_for("verify");
  c.format = OutputFormat::csv;
  EXPECT_EQ(run_command(c).exit_code, kExitUsage);
}

TEST(Binary, ExitCodes) {
  EXPECT_EQ(run_binary("verify --trials 5").code, 0);
  EXPECT_EQ(run_binary("verify --trials 5 --corrupt").code, 1);
  EXPECT_EQ(run_binary("play --strategy nope").code, 2);
  EXPECT_EQ(run_binary("play --format xml").code, 2);
  EXPECT_EQ(run_binary("bell --drop-constraint 9").code, 2);
  EXPECT_EQ(run_binary("").code, 2);
}

TEST(Binary, RepeatRunsAreByteIdentical) {
  const std::string args = "play --strategy frame-free --adversary scramble_all --trials 40 --seed 77 --format csv";
  const auto a = run_binary(args);
  const auto b = run_binary(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_FALSE(a.out.empty());
  EXPECT_EQ(a.out, b.out);
  const auto c = run_binary("play --strategy frame-free --adversary scramble_all --trials 40 --seed 78 --format csv");
  EXPECT_NE(a.out, c.out);
}

TEST(Binary, WritesOutFile) {
  const auto dir = std::filesystem::temp_directory_path() / "ghzframe_cli_test";
  std::filesystem::create_directories(dir);
  const auto report = dir / "bell.json";
  const auto r = run_binary("bell --drop-constraint 1 --out " + report.string());
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(json::parse(read_file(report))["satisfying"], 8);
  std::filesystem::remove_all(dir);
}
