#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lrc/cli.hpp"

using namespace lrc;
using json = nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

json run_json(std::vector<std::string> args, int* code = nullptr) {
  args.insert(args.begin(), {"--format", "json"});
  Outcome r = run(args);
  if (code) *code = r.code;
  return json::parse(r.out);
}

// The "key: value" line of a text report, or "" when absent.
std::string text_field(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    auto b = line.find_first_not_of(' ');
    if (b != std::string::npos && line.compare(b, key.size() + 2, key + ": ") == 0) return line.substr(b + key.size() + 2);
  }
  return "";
}

}  // namespace

TEST(Cli, MembershipVerified) {
  int code = -1;
  json j = run_json({"membership", "--z", "2,3", "--d", "2", "--N", "1", "--delta", "1/4"}, &code);
  EXPECT_EQ(code, 0);
  EXPECT_EQ(j["verdict"], "verified");
  EXPECT_EQ(j["result"]["witness"], "1/4");
  EXPECT_NE(j["result"]["residual"].get<std::string>().find("{3/4}"), std::string::npos);
  EXPECT_EQ(j["manifest"]["subcommand"], "membership");
  EXPECT_EQ(j["manifest"]["version"], kToolVersion);
  EXPECT_EQ(j["manifest"]["verdict"], "verified");
}

TEST(Cli, MembershipRefuted) {
  int code = -1;
  json j = run_json({"membership", "--z", "12987/5000,3201367/935000,123253/27500,15191241/2571250", "--d", "4"}, &code);
  EXPECT_EQ(code, 1);
  EXPECT_EQ(j["verdict"], "refuted");
}

TEST(Cli, TextAndJsonAgree) {
  std::vector<std::vector<std::string>> cases = {
      {"membership", "--z", "2,3", "--d", "2", "--delta", "1/4"},
      {"membership", "--z", "12987/5000,3201367/935000,123253/27500,15191241/2571250", "--d", "4"},
      {"counterexample", "--eps", "1/1000,3/1000,2/1000,4/1000"},
      {"measure", "--z", "5", "--delta", "1/6"},
      {"polytope", "--rows", "0 < x;x < 0"},
      {"runner", "--speeds", "1,2,3", "--delta", "1/4"},
  };
  for (const auto& c : cases) {
    int jcode = -1;
    json j = run_json(c, &jcode);
    Outcome t = run(c);
    EXPECT_EQ(t.code, jcode) << c[0];
    EXPECT_EQ(text_field(t.out, "verdict"), j["verdict"].get<std::string>()) << c[0];
    if (j["result"].contains("witness")) {
      EXPECT_EQ(text_field(t.out, "witness"), j["result"]["witness"]);
    }
  }
}

TEST(Cli, Counterexample) {
  int code = -1;
  json j = run_json({"counterexample", "--eps", "1/1000,3/1000,2/1000,4/1000"}, &code);
  EXPECT_EQ(code, 0);
  EXPECT_EQ(j["result"]["residual_one_round"], "{}");
  EXPECT_TRUE(j["result"]["covered_in_two_rounds"].get<bool>());
  EXPECT_EQ(run({"counterexample", "--eps", "1/100,1/100,1/100,1/100"}).code, 2);
}

TEST(Cli, ChainsEnumerateOneBlock) {
  int code = -1;
  json j = run_json({"chains-enumerate", "--L", "1"}, &code);
  EXPECT_EQ(code, 0);
  EXPECT_EQ(j["result"]["count"], 44);
  EXPECT_EQ(j["result"]["chains"].size(), 44u);
}

TEST(Cli, LongRunsNeedTheFlag) {
  EXPECT_EQ(run({"chains-enumerate", "--L", "4"}).code, 2);
  EXPECT_EQ(run({"chains-forbidden", "--L", "6"}).code, 2);
  EXPECT_EQ(run({"treecover", "--region", "four-speed", "--d", "4"}).code, 2);
}

TEST(Cli, PolytopeVerdicts) {
  int code = -1;
  json j = run_json({"polytope", "--rows", "0 < x;x < 1"}, &code);
  EXPECT_EQ(code, 0);
  j = run_json({"polytope", "--rows", "0 < x;x < 0"}, &code);
  EXPECT_EQ(code, 1);
  EXPECT_TRUE(j["result"]["certificate_checked"].get<bool>());
  EXPECT_EQ(j["result"]["certificate"].size(), 2u);
  auto path = std::filesystem::temp_directory_path() / ("lrc_sys_" + std::to_string(::getpid()));
  std::ofstream(path) << "vars: x y\n0 <= x\nx <= 0\ny > x\n";
  EXPECT_EQ(run({"polytope", "--file", path.string()}).code, 0);
  EXPECT_EQ(run({"polytope", "--file", path.string(), "--strict"}).code, 1);
  std::filesystem::remove(path);
}

TEST(Cli, TreecoverSmall) {
  int code = -1;
  json j = run_json({"treecover", "--d", "2", "--box", "6"}, &code);
  EXPECT_EQ(code, 0);
  EXPECT_EQ(j["result"]["verdict"], "covered");
  EXPECT_EQ(j["result"]["leaves_checked"], 17);
  j = run_json({"treecover", "--d", "3", "--box", "4", "--spot", "50"}, &code);
  EXPECT_EQ(code, 0);
}

TEST(Cli, ExitCodeIndependentOfJobs) {
  for (const char* jobs : {"1", "2", "4"}) {
    int code = -1;
    json j = run_json({"--jobs", jobs, "treecover", "--d", "3", "--box", "4"}, &code);
    EXPECT_EQ(code, 0) << jobs;
    EXPECT_EQ(j["result"]["leaves_checked"], 10);
  }
}

TEST(Cli, MeasureCsv) {
  Outcome r = run({"measure", "--csv", "--delta", "1/10", "--from", "1", "--to", "3", "--step", "1/2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "z,measure,bound");
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 6);
}

TEST(Cli, RunnerAndGapBounds) {
  int code = -1;
  json j = run_json({"runner", "--speeds", "10285,26740,35319,46187,61005", "--delta", "1/6", "--horizon", "2/10285"},
                    &code);
  EXPECT_EQ(code, 0);
  EXPECT_EQ(j["result"]["first"], "19/160440");
  j = run_json({"runner", "--speeds", "10285,26740,35319,46187,61005", "--N", "1"}, &code);
  EXPECT_EQ(code, 1);
  j = run_json({"gap-bounds", "--d", "4"}, &code);
  EXPECT_EQ(code, 0);
  EXPECT_EQ(j["result"]["lower"], "1/9");
  EXPECT_EQ(j["result"]["upper"], "1/6");
}

TEST(Cli, TransfersReportFigureDifference) {
  int code = -1;
  json j = run_json({"chains-transfers", "--check-reference"}, &code);
  EXPECT_EQ(code, 1);
  EXPECT_EQ(j["result"]["missing_from_reference"], json({"H -> D", "H -> H"}));
  EXPECT_EQ(j["result"]["absent_from_reference"], json({"E -> Gamma", "H -> O", "H -> R"}));
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({"membership", "--z", "2,x", "--d", "2"}).code, 2);
  EXPECT_EQ(run({"membership", "--z", "2/0", "--d", "1"}).code, 2);
  EXPECT_EQ(run({"membership", "--z", "2,3", "--d", "2", "--bogus"}).code, 2);
  EXPECT_EQ(run({"membership", "--z", "1/2,3", "--d", "2"}).code, 2);
  EXPECT_EQ(run({"membership", "--z", "2,3", "--d", "3"}).code, 2);
  EXPECT_EQ(run({"--format", "xml", "gap-bounds", "--d", "2"}).code, 2);
  EXPECT_EQ(run({"polytope", "--rows", "x $ 1"}).code, 2);
  Outcome r = run({"membership", "--z", "2,x", "--d", "2"});
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, Version) {
  Outcome r = run({"--version"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find(kToolVersion), std::string::npos);
}
