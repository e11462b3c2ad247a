#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hofa/cli.h"
#include "json.hpp"

using namespace hofa;
using nlohmann::json;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string data_path(const std::string& name) { return std::string(HOFA_TEST_DATA_DIR) + "/" + name; }

std::string write_file(const std::string& name, const std::string& body) {
  const auto path = data_path(name);
  std::ofstream(path) << body;
  return path;
}

// Noisy linear function on F_2^10: x1 + x2 with ~5% of the points flipped.
std::string noisy_linear_file() {
  std::ostringstream s;
  s << "2 10 2\n";
  std::uint64_t state = 12345;
  for (int x = 0; x < 1024; ++x) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    const bool flip = (state >> 33) % 20 == 0;
    s << (((x & 1) ^ ((x >> 1) & 1)) ^ (flip ? 1 : 0)) << (x % 32 == 31 ? '\n' : ' ');
  }
  return write_file("noisy.txt", s.str());
}

}  // namespace

TEST(Cli, GowersOfConstant) {
  const auto fn = write_file("one.txt", "2 3 2\n1 1 1 1 1 1 1 1\n");
  const auto r = run({"gowers", "--fn", fn, "--order", "2", "--exact"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_DOUBLE_EQ(j["value"].get<double>(), 1.0);
  EXPECT_EQ(j["meta"]["tool"], "hofa");
  EXPECT_EQ(j["meta"]["command"], "gowers");
}

TEST(Cli, MalformedFileNamesFlagAndLine) {
  const auto fn = write_file("bad.txt", "2 2 2\n0 1 2 0\n");
  const auto r = run({"gowers", "--fn", fn, "--order", "2"});
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("--fn"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("bad.txt:2"), std::string::npos) << r.err;
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, MissingFileIsAnError) {
  const auto r = run({"dist", "--fn1", data_path("absent.txt"), "--fn2", data_path("absent.txt")});
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("--fn1"), std::string::npos) << r.err;
}

TEST(Cli, UnknownOptionIsAnError) {
  EXPECT_EQ(run({"gowers", "--bogus"}).code, kExitError);
  EXPECT_EQ(run({}).code, kExitError);
}

TEST(Cli, TesterCompletenessScenario) {
  const auto fn = noisy_linear_file();
  const auto r = run({"test", "--fn", fn, "--property", "rm:1", "--delta", "0.05", "--eps", "0.2", "-m", "6",
                      "--trials", "200", "--seed", "7"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_GE(j["accept_fraction"].get<double>(), 2.0 / 3.0);
  EXPECT_EQ(j["verdict"], "accept");
  EXPECT_EQ(j["per_trial_distances"].size(), 200u);
  EXPECT_EQ(j["meta"]["seed"], 7);
}

TEST(Cli, CheckIsDeterministic) {
  const auto a = run({"check", "--scale", "small", "--seed", "0"});
  const auto b = run({"check", "--scale", "small", "--seed", "0", "--threads", "1"});
  ASSERT_EQ(a.code, kExitOk) << a.out;
  EXPECT_EQ(a.out, b.out);
  EXPECT_TRUE(json::parse(a.out)["passed"].get<bool>());
}

TEST(Cli, SabotageFailsFourierCheck) {
  const auto r = run({"check", "--scale", "small", "--sabotage", "gowers"});
  EXPECT_EQ(r.code, kExitCheckFailed);
  bool fourier_failed = false;
  const auto j = json::parse(r.out);
  for (const auto& c : j["checks"]) {
    if (c["name"] == "gowers_u2_fourier") fourier_failed = !c["passed"].get<bool>();
  }
  EXPECT_TRUE(fourier_failed);
  // The hook must not leak into later runs.
  EXPECT_EQ(run({"check", "--scale", "small"}).code, kExitOk);
}

TEST(Cli, CsvAndOutFile) {
  const auto fn = write_file("lin.txt", "2 2 2\n0 1 0 1\n");
  const auto out = data_path("lin.csv");
  const auto r = run({"gowers", "--fn", fn, "--order", "2", "--format", "csv", "--out", out});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(out);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "key,value");
  std::stringstream rest;
  rest << in.rdbuf();
  EXPECT_NE(rest.str().find("value,"), std::string::npos);
}

TEST(Cli, PolyEvalAndVerify) {
  // |x1| / 4 on F_2^2
  const auto poly = write_file("quarter.txt", "2 2\n1 1 1 0\n");
  const auto eval = run({"poly-eval", "--poly", poly, "--point", "1,0"});
  ASSERT_EQ(eval.code, kExitOk) << eval.err;
  EXPECT_DOUBLE_EQ(json::parse(eval.out)["value"].get<double>(), 0.25);
  EXPECT_EQ(run({"poly-verify", "--poly", poly, "--degree", "2"}).code, kExitOk);
  const auto low = run({"poly-verify", "--poly", poly, "--degree", "1"});
  EXPECT_EQ(low.code, kExitOk);
  EXPECT_FALSE(json::parse(low.out)["verified"].get<bool>());
}

TEST(Cli, DecomposeBundle) {
  const auto fn = noisy_linear_file();
  const auto dir = data_path("bundle");
  std::filesystem::remove_all(dir);
  const auto r = run({"decompose", "--fn", fn, "--degree", "1", "--tau", "0.2", "--bundle", dir, "--check"});
  ASSERT_EQ(r.code, kExitOk) << r.err << r.out;
  for (const char* name : {"f1.txt", "f2.txt", "f3.txt", "factor.txt", "certificate.json"}) {
    EXPECT_TRUE(std::filesystem::exists(std::filesystem::path(dir) / name)) << name;
  }
  const auto j = json::parse(r.out);
  EXPECT_GE(j["complexity"].get<int>(), 1);
}

TEST(Cli, MuOfConstantIsPointMass) {
  const auto fn = write_file("zero.txt", "2 3 2\n0 0 0 0 0 0 0 0\n");
  const auto r = run({"mu", "--fn", fn, "-k", "1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto outcomes = json::parse(r.out)["distribution"]["outcomes"];
  ASSERT_EQ(outcomes.size(), 1u);
  EXPECT_DOUBLE_EQ(outcomes[0]["prob"].get<double>(), 1.0);
}
