#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <sys/wait.h>

#include "job.hpp"

using namespace susyqes::cli;

namespace {

// Every number in a must equal the one at the same path in b within tol (relative).
void expect_numbers_match(const json& a, const json& b, double tol, const std::string& path = "") {
  ASSERT_EQ(a.type(), b.type()) << path;
  if (a.is_object()) {
    ASSERT_EQ(a.size(), b.size()) << path;
    for (auto it = a.begin(); it != a.end(); ++it) {
      ASSERT_TRUE(b.contains(it.key())) << path << '/' << it.key();
      expect_numbers_match(it.value(), b.at(it.key()), tol, path + "/" + it.key());
    }
  } else if (a.is_array()) {
    ASSERT_EQ(a.size(), b.size()) << path;
    for (std::size_t i = 0; i < a.size(); ++i) expect_numbers_match(a[i], b[i], tol, path + "/" + std::to_string(i));
  } else if (a.is_number()) {
    const double x = a.get<double>();
    const double y = b.get<double>();
    EXPECT_LE(std::fabs(x - y), tol * std::max(1.0, std::fabs(x))) << path;
  } else {
    EXPECT_EQ(a, b) << path;
  }
}

JobConfig config(std::string command) {
  JobConfig c;
  c.command = std::move(command);
  return c;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SUSYQES_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  return WEXITSTATUS(std::system(cmd.c_str()));
}

}  // namespace

TEST(Cli, RoundTripReproducesNumbers) {
  auto c = config("spectrum");
  c.family = "hermite-odd";
  c.k = 1;
  c.epsilon = 2.0;
  c.half_width = 10.0;
  c.points = 2001;
  c.levels = 3;
  const auto first = run_job(c);
  ASSERT_EQ(first.exit_code, kOk) << first.document.dump(2);
  const auto reparsed = json::parse(first.document.dump());
  const auto second = run_job(config_from_json(reparsed));
  expect_numbers_match(first.document, second.document, 1e-12);

  auto ces = config("ces");
  ces.base = "rosen-morse";
  ces.alpha = 2.5;
  ces.k = 1;
  ces.points = 2001;
  ces.levels = 3;
  const auto a = run_job(ces);
  ASSERT_EQ(a.exit_code, kOk) << a.document.dump(2);
  expect_numbers_match(a.document, run_job(config_from_json(json::parse(a.document.dump()))).document, 1e-12);
}

TEST(Cli, ExitCodes) {
  auto bad_ratio = config("construct");
  bad_ratio.family = "hermite-ratio";
  bad_ratio.k = 1;
  bad_ratio.m = 2;
  EXPECT_EQ(run_job(bad_ratio).exit_code, kUsage);

  auto perturbed = config("validate");
  perturbed.family = "hermite-odd";
  perturbed.k = 1;
  perturbed.epsilon = 2.0;
  perturbed.perturb_w1 = 1e-3;
  const auto p = run_job(perturbed);
  EXPECT_EQ(p.exit_code, kValidationFailure);
  EXPECT_FALSE(p.document["validation"]["riccati"]["pass"].get<bool>());

  auto overflow = config("construct");
  overflow.family = "hermite-odd";
  overflow.k = 20;
  overflow.epsilon = 2.0;
  overflow.half_width = 1e20;
  const auto o = run_job(overflow);
  EXPECT_EQ(o.exit_code, kNumerical);
  EXPECT_TRUE(o.document["error"].contains("threshold"));

  auto even = config("ces");
  even.base = "rosen-morse";
  even.alpha = 2.5;
  even.k = 2;
  const auto e = run_job(even);
  EXPECT_EQ(e.exit_code, kUsage);
  EXPECT_NE(e.document["error"]["message"].get<std::string>().find("is even"), std::string::npos);

  EXPECT_EQ(run_job(config("bogus")).exit_code, kUsage);
}

TEST(Cli, MonomialGridExport) {
  auto c = config("export-grid");
  c.family = "monomial";
  c.epsilon = 2.0;
  c.half_width = 3.0;
  c.points = 101;
  const auto out = run_job(c);
  ASSERT_EQ(out.exit_code, kOk) << out.document.dump(2);
  std::istringstream in(out.csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("x,V_minus,V_plus,W,W1,psi0,psi1", 0), 0u) << line;
  int rows = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string cell;
    std::getline(ls, cell, ',');
    const double x = std::stod(cell);
    std::getline(ls, cell, ',');
    EXPECT_NEAR(std::stod(cell), 0.5 * (4.0 * x * x - 2.0), 1e-12);
    ++rows;
  }
  EXPECT_EQ(rows, 101);
}

TEST(Cli, BinaryExitCodes) {
  EXPECT_EQ(run_cli("spectrum --family hermite-odd --k 1 --epsilon 2 --L 10 --N 1001 --levels 2"), 0);
  EXPECT_EQ(run_cli("construct --family hermite-ratio --k 1 --m 2"), 2);
  EXPECT_EQ(run_cli("validate --family hermite-odd --k 1 --epsilon 2 --perturb-w1 1e-3"), 1);
  EXPECT_EQ(run_cli("construct --family hermite-odd --k 20 --epsilon 2 --L 1e20"), 3);
  EXPECT_EQ(run_cli("ces --base rosen-morse --alpha 2.5 --k 2"), 2);
  EXPECT_EQ(run_cli("spectrum --no-such-flag"), 2);
  EXPECT_EQ(run_cli(""), 2);
}

TEST(Cli, BinaryConfigRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "susyqes_roundtrip.json";
  auto read = [&] {
    std::ifstream in(path);
    return json::parse(in);
  };
  ASSERT_EQ(run_cli("validate --family sinh --k 3 --alpha 2.5 --epsilon 12 --out " + path.string()), 0);
  const auto first = read();
  // The echoed config carries the same --out, so the re-run overwrites the file.
  ASSERT_EQ(run_cli("validate --config " + path.string()), 0);
  expect_numbers_match(first, read(), 1e-12);
  std::filesystem::remove(path);
}
