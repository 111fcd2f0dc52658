#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include "transport/json_io.hpp"

using namespace transport;
using nlohmann::json;

namespace {

struct CommandResult {
  int exit_code = -1;
  std::string stdout_text;
};

CommandResult run_cli(const std::string& args) {
  std::string command = std::string(TRANSPORT_CLI_PATH) + " " + args + " 2>/dev/null";
  std::array<char, 4096> chunk{};
  CommandResult result;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::size_t n = 0;
  while ((n = fread(chunk.data(), 1, chunk.size(), pipe)) > 0) {
    result.stdout_text.append(chunk.data(), n);
  }
  int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string write_temp(const std::string& name, const std::string& contents) {
  std::string path = "/tmp/transport_test_" + name;
  std::ofstream out(path);
  out << contents;
  return path;
}

const char* kMeasureA = R"({"dim": 1, "atoms": [[0.0], [1.0]],
                            "weights": [{"num": 1, "den": 2}, "0.5"]})";
const char* kMeasureHalf = R"({"dim": 1, "atoms": [[0.5]], "weights": [{"num": 1, "den": 1}]})";

}  // namespace

TEST_CASE("rational JSON accepts objects, integers, and decimal strings") {
  CHECK(rational_from_json(json::parse(R"({"num": 3, "den": 6})")) == Rational(1, 2));
  CHECK(rational_from_json(json(2)) == Rational(2));
  CHECK(rational_from_json(json("0.25")) == Rational(1, 4));
  CHECK_THROWS_AS(rational_from_json(json(0.25)), ValidationError);  // raw floats are ambiguous
}

TEST_CASE("measure JSON round-trips") {
  DiscreteMeasure mu({Point{0.0, 1.0}, Point{2.0, 3.0}}, {Rational(1, 3), Rational(2, 3)});
  CHECK(measure_from_json(measure_to_json(mu)) == mu);
}

TEST_CASE("labeled measure JSON round-trips") {
  LabeledMeasure lm(DiscreteMeasure({Point{0.0}, Point{1.0}}, {Rational(1, 2), Rational(1, 2)}),
                    {Point{5.0}, Point{6.0}});
  LabeledMeasure back = labeled_from_json(labeled_to_json(lm));
  CHECK(back.base == lm.base);
  CHECK(back.labels == lm.labels);
}

TEST_CASE("parse errors carry line and column") {
  try {
    parse_json("{\n  \"atoms\": [[0.0]\n}");
    FAIL("expected a parse error");
  } catch (const ValidationError& e) {
    std::string message = e.what();
    CHECK(message.find("line 3") != std::string::npos);
    CHECK(message.find("column") != std::string::npos);
  }
}

TEST_CASE("cli wasserstein computes the textbook example") {
  std::string a = write_temp("a.json", kMeasureA);
  std::string b = write_temp("b.json", kMeasureHalf);
  auto result = run_cli("wasserstein " + a + " " + b + " --p 1");
  REQUIRE(result.exit_code == 0);
  json payload = json::parse(result.stdout_text);
  CHECK(payload.at("distance").get<double>() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(payload.contains("entries"));
}

TEST_CASE("cli wasserstein on identical files returns zero") {
  std::string a = write_temp("a.json", kMeasureA);
  auto result = run_cli("wasserstein " + a + " " + a + " --p 2");
  REQUIRE(result.exit_code == 0);
  CHECK(json::parse(result.stdout_text).at("distance").get<double>() ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("cli rejects mismatched dimensions with exit code 2") {
  std::string a = write_temp("a.json", kMeasureA);
  std::string c = write_temp(
      "c.json", R"({"dim": 2, "atoms": [[0.0, 0.0]], "weights": [{"num": 1, "den": 1}]})");
  auto result = run_cli("wasserstein " + a + " " + c);
  CHECK(result.exit_code == 2);
  CHECK(json::parse(result.stdout_text).contains("error"));
}

TEST_CASE("cli rejects malformed JSON with exit code 2") {
  std::string bad = write_temp("bad.json", "{nope");
  std::string b = write_temp("b.json", kMeasureHalf);
  auto result = run_cli("wasserstein " + bad + " " + b);
  CHECK(result.exit_code == 2);
  std::string error = json::parse(result.stdout_text).at("error").get<std::string>();
  CHECK(error.find("line") != std::string::npos);
}

TEST_CASE("cli reports solver caps with exit code 3") {
  std::string a = write_temp("a.json", kMeasureA);
  std::string b = write_temp("b.json", kMeasureHalf);
  auto result = run_cli("wasserstein " + a + " " + b + " --cap-atoms 2");
  CHECK(result.exit_code == 3);
}

TEST_CASE("cli tlp distance of identical labeled files is zero") {
  const char* labeled = R"({"dim": 1, "atoms": [[0.0], [1.0]],
                            "weights": ["0.5", "0.5"], "labels": [[0.25], [0.5]]})";
  std::string a = write_temp("lma.json", labeled);
  auto result = run_cli("tlp " + a + " " + a + " --p 2");
  REQUIRE(result.exit_code == 0);
  CHECK(json::parse(result.stdout_text).at("distance").get<double>() ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("cli tlp single-atom closed form") {
  std::string a = write_temp(
      "lm1.json", R"({"dim": 1, "atoms": [[0.0]], "weights": ["1"], "labels": [[0.0]]})");
  std::string b = write_temp(
      "lm2.json", R"({"dim": 1, "atoms": [[1.0]], "weights": ["1"], "labels": [[2.0]]})");
  auto result = run_cli("tlp " + a + " " + b + " --p 1");
  REQUIRE(result.exit_code == 0);
  CHECK(json::parse(result.stdout_text).at("distance").get<double>() ==
        doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("cli tlp regression: swapped labels on the unit pair cost exactly 1") {
  // Every coupling pays |x - x'| + |y - y'| = 1 here, so the value is pinned.
  std::string a = write_temp(
      "swap_a.json",
      R"({"dim": 1, "atoms": [[0.0], [1.0]], "weights": ["0.5", "0.5"], "labels": [[0.0], [1.0]]})");
  std::string b = write_temp(
      "swap_b.json",
      R"({"dim": 1, "atoms": [[0.0], [1.0]], "weights": ["0.5", "0.5"], "labels": [[1.0], [0.0]]})");
  auto result = run_cli("tlp " + a + " " + b + " --p 1");
  REQUIRE(result.exit_code == 0);
  CHECK(json::parse(result.stdout_text).at("distance").get<double>() ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("cli generic verdicts and nearest repair") {
  std::string uniform = write_temp(
      "uniform.json", R"({"dim": 1, "atoms": [[0.0], [1.0]], "weights": ["0.5", "0.5"]})");
  auto verdict = run_cli("generic " + uniform);
  REQUIRE(verdict.exit_code == 0);
  json payload = json::parse(verdict.stdout_text);
  CHECK_FALSE(payload.at("generic").get<bool>());
  CHECK(payload.contains("witness"));

  auto repaired = run_cli("generic " + uniform + " --nearest 1/10");
  REQUIRE(repaired.exit_code == 0);
  CHECK(json::parse(repaired.stdout_text).contains("nearest"));
}

TEST_CASE("cli nonsplit pair mode") {
  std::string mu = write_temp(
      "mu.json",
      R"({"dim": 1, "atoms": [[0.0], [1.0], [2.0]],
          "weights": ["0.5", {"num": 3, "den": 10}, "0.2"]})");
  std::string nu = write_temp(
      "nu.json", R"({"dim": 1, "atoms": [[5.0], [6.0]], "weights": ["0.5", "0.5"]})");
  auto result = run_cli("nonsplit " + mu + " " + nu);
  REQUIRE(result.exit_code == 0);
  json payload = json::parse(result.stdout_text);
  CHECK(payload.at("feasible").get<bool>());
  CHECK(payload.at("assignment") == json({0, 1, 1}));
}

TEST_CASE("cli reconstruct: exact values on binary weights, exit 5 on splits") {
  std::string mu = write_temp(
      "gen.json",
      R"({"dim": 1, "atoms": [[0.0], [1.0], [2.0]],
          "weights": [{"num": 1, "den": 7}, {"num": 2, "den": 7}, {"num": 4, "den": 7}]})");
  auto result = run_cli("reconstruct " + mu + " --oracle square");
  REQUIRE(result.exit_code == 0);
  json payload = json::parse(result.stdout_text);
  CHECK(payload.at("values") == json({{0.0}, {1.0}, {4.0}}));

  std::string dirac = write_temp(
      "dirac.json", R"({"dim": 1, "atoms": [[0.0]], "weights": ["1"]})");
  auto split = run_cli("reconstruct " + dirac + " --oracle constant-split");
  CHECK(split.exit_code == 5);

  std::string uniform = write_temp(
      "uniform.json", R"({"dim": 1, "atoms": [[0.0], [1.0]], "weights": ["0.5", "0.5"]})");
  auto refused = run_cli("reconstruct " + uniform + " --oracle square");
  CHECK(refused.exit_code == 4);
  CHECK(json::parse(refused.stdout_text).contains("witness"));
}

TEST_CASE("cli reconstruct with the sign-ratio oracle matches the s formula") {
  // mu_9^- = (1/9) d_1 + (8/9) d_{-1/3}.
  std::string mu = write_temp(
      "minus.json",
      R"({"dim": 1, "atoms": [[1.0], [-0.3333333333333333]],
          "weights": [{"num": 1, "den": 9}, {"num": 8, "den": 9}]})");
  auto result = run_cli("reconstruct " + mu + " --oracle sign-ratio");
  REQUIRE(result.exit_code == 0);
  json payload = json::parse(result.stdout_text);
  double s = (1.0 / 9.0 - 8.0 / 9.0 * 0.3333333333333333) /
             (1.0 / 9.0 + 8.0 / 9.0 * 0.3333333333333333);
  CHECK(payload.at("values")[0][0].get<double>() == doctest::Approx(s).epsilon(1e-12));
}

TEST_CASE("cli verify-lipschitz and lagrangian commands") {
  std::string mu = write_temp(
      "gen.json",
      R"({"dim": 1, "atoms": [[0.1], [0.5], [0.9]],
          "weights": [{"num": 1, "den": 7}, {"num": 2, "den": 7}, {"num": 4, "den": 7}]})");
  auto lip = run_cli("verify-lipschitz " + mu + " --oracle tent --lipschitz 2");
  REQUIRE(lip.exit_code == 0);
  CHECK(json::parse(lip.stdout_text).at("ok").get<bool>());

  std::string points = write_temp("pts.json", R"([[0.1], [0.9], [0.4]])");
  auto lift = run_cli("lagrangian " + points + " --oracle sign-ratio --permutations 5");
  REQUIRE(lift.exit_code == 0);
  json payload = json::parse(lift.stdout_text);
  CHECK(payload.at("equivariant").get<bool>());
  CHECK(payload.at("lifted").size() == 3);
}

TEST_CASE("cli surfaces oracle failures with exit code 6") {
  std::string mu = write_temp(
      "gen.json",
      R"({"dim": 1, "atoms": [[0.0], [1.0], [2.0]],
          "weights": [{"num": 1, "den": 7}, {"num": 2, "den": 7}, {"num": 4, "den": 7}]})");
  auto result = run_cli("reconstruct " + mu + " --oracle-cmd false --timeout-ms 500 --retries 0");
  CHECK(result.exit_code == 6);
}

TEST_CASE("cli example-suite filters rows and keeps verdicts across seeds") {
  auto csv = run_cli("example-suite --only mixing --format csv --seed 7");
  REQUIRE(csv.exit_code == 0);
  CHECK(csv.stdout_text.find("mixing-construction") != std::string::npos);
  CHECK(csv.stdout_text.find("name,measured,bound,pass") != std::string::npos);
  CHECK(csv.stdout_text.find("lipschitz-sign-ratio") == std::string::npos);  // filtered out

  // Different seeds change the sampled values but not the verdict.
  std::vector<std::string> measured;
  for (const char* seed : {"7", "8", "9"}) {
    auto run = run_cli(std::string("example-suite --only mixing --seed ") + seed);
    REQUIRE(run.exit_code == 0);
    json payload = json::parse(run.stdout_text);
    CHECK(payload.at("all_pass").get<bool>());
    measured.push_back(payload.at("criteria")[0].at("measured").dump());
  }
  CHECK((measured[0] != measured[1] || measured[1] != measured[2]));
}
