#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct CliRun {
  int code = -1;
  std::string output;
};

std::string data_args() { return std::string(" --data-dir ") + SIMPLEDS_DATA_DIR + " "; }

// Runs the CLI through the shell with stderr folded into stdout.
CliRun run(const std::string& args, const std::string& stdin_text = "") {
  const std::string input = ::testing::TempDir() + "/cli-stdin.txt";
  std::ofstream(input) << stdin_text;
  const std::string cmd = std::string(SIMPLEDS_CLI) + " " + args + " < " + input + " 2>&1";
  CliRun r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp(const std::string& name) { return ::testing::TempDir() + "/" + name; }

// Trains once with the default configuration and shares the policy.
const std::string& trained_policy() {
  static const std::string path = [] {
    // per process: ctest may run the tests that share this concurrently
    const std::string tag = std::to_string(::getpid());
    const std::string p = temp("cli-policy-" + tag + ".bin");
    const CliRun r = run(data_args() + "--seed 1 train --policy " + p + " --curve " + temp("cli-curve-" + tag + ".csv"));
    EXPECT_EQ(r.code, 0) << r.output;
    return p;
  }();
  return path;
}

}  // namespace

TEST(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("fly").code, 1);
  EXPECT_EQ(run("train --steps -3").code, 1);
  EXPECT_EQ(run("--noise maybe eval --expert").code, 1);
  EXPECT_EQ(run("--config /no/such/file.json train").code, 1);
  EXPECT_EQ(run("chat").code, 1);
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(run("--help").code, 0); }

TEST(Cli, DataAndConfigErrorsExitTwo) {
  const CliRun missing = run("--data-dir /nonexistent-data eval --expert --episodes 1");
  EXPECT_EQ(missing.code, 2) << missing.output;
  const std::string bad = temp("bad-config.json");
  std::ofstream(bad) << "{\n\"learner\": {\"gamma\": 2}\n}\n";
  EXPECT_EQ(run(data_args() + "--config " + bad + " train --steps 0").code, 2);
  const std::string broken = temp("broken-config.json");
  std::ofstream(broken) << "{\n\"learner\": {\n\"gamma\": ,\n}}\n";
  const CliRun r = run(data_args() + "--config " + broken + " train --steps 0");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find(broken + ":3"), std::string::npos) << r.output;
  const std::string junk = temp("junk-policy.bin");
  std::ofstream(junk) << "not a policy";
  EXPECT_EQ(run(data_args() + "eval --policy " + junk).code, 2);
}

TEST(Cli, ZeroStepTrainingWritesTheInitialPolicy) {
  const std::string policy = temp("zero.bin");
  const std::string curve = temp("zero.csv");
  std::filesystem::remove(policy);
  const CliRun r = run(data_args() + "train --steps 0 --policy " + policy + " --curve " + curve);
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_TRUE(std::filesystem::exists(policy));
  EXPECT_EQ(slurp(curve), "episode_index,total_reward,turns,epsilon\n");
  EXPECT_NE(r.output.find("steps: 0"), std::string::npos);
}

TEST(Cli, SameSeedSameCurve) {
  for (const char* name : {"a", "b"}) {
    const CliRun r = run(data_args() + "--seed 4 train --steps 1500 --policy " + temp(std::string(name) + ".bin") +
                      " --curve " + temp(std::string(name) + ".csv"));
    ASSERT_EQ(r.code, 0) << r.output;
  }
  const std::string a = slurp(temp("a.csv"));
  EXPECT_GT(a.size(), 50u);
  EXPECT_EQ(a, slurp(temp("b.csv")));
  EXPECT_EQ(slurp(temp("a.bin")), slurp(temp("b.bin")));
}

TEST(Cli, EvalReports) {
  const CliRun empty = run(data_args() + "eval --expert --episodes 0");
  EXPECT_EQ(empty.code, 0);
  EXPECT_NE(empty.output.find("episodes: 0"), std::string::npos) << empty.output;
  const CliRun expert = run(data_args() + "--noise off eval --expert --episodes 50");
  EXPECT_EQ(expert.code, 0);
  EXPECT_NE(expert.output.find("task_success_rate: 1\n"), std::string::npos) << expert.output;
  EXPECT_EQ(run(data_args() + "eval --episodes 3").code, 1);  // neither policy nor expert
}

TEST(Cli, TrainedPolicyEvaluatesAndChats) {
  const std::string& policy = trained_policy();
  const CliRun eval = run(data_args() + "--noise off eval --policy " + policy + " --episodes 50");
  ASSERT_EQ(eval.code, 0) << eval.output;
  const auto pos = eval.output.find("task_success_rate: ");
  ASSERT_NE(pos, std::string::npos);
  const double rate = std::stod(eval.output.substr(pos + 19));
  EXPECT_GE(rate, 0.0);
  EXPECT_LE(rate, 1.0);

  const std::string transcript = temp("chat.tsv");
  const CliRun chat = run(data_args() + "chat --policy " + policy + " --transcript " + transcript,
                       "reasonably priced mexican food in the east of town\nno\n");
  EXPECT_EQ(chat.code, 0) << chat.output;
  EXPECT_NE(chat.output.find("system: okay , talk to you soon . bye !"), std::string::npos) << chat.output;
  EXPECT_NE(slurp(transcript).find("Salutation(closing)"), std::string::npos);
}

TEST(Cli, ChatSurvivesGibberishAndEof) {
  const std::string& policy = trained_policy();
  const CliRun eof = run(data_args() + "chat --policy " + policy);
  EXPECT_EQ(eof.code, 0) << eof.output;
  const CliRun gibberish = run(data_args() + "chat --policy " + policy, "blorp zonk\nquux\n");
  EXPECT_EQ(gibberish.code, 0) << gibberish.output;
  EXPECT_NE(gibberish.output.find("system: "), std::string::npos);
}

TEST(Cli, ReplayWritesACorpus) {
  const std::string out = temp("demos.json");
  const CliRun r = run(data_args() + "--seed 7 replay --dialogues 2 --output " + out);
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("# dialogue 1"), std::string::npos);
  EXPECT_NE(r.output.find("wrote 2 dialogues"), std::string::npos);
  EXPECT_NE(slurp(out).find("\"Salutation(greeting)\""), std::string::npos);
}
