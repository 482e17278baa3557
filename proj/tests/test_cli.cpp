#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "oujump/cli.hpp"

using namespace oujump;

namespace {

const std::vector<std::string> kRefModel = {
    "--kappa", "1",      "--lambda", "1", "--p",    "0.6666666666666666",
    "--alphas", "1",     "--mus",    "1", "--betas", "1",
    "--nus",    "1"};

std::vector<std::string> with_model(std::vector<std::string> args) {
  args.insert(args.end(), kRefModel.begin(), kRefModel.end());
  return args;
}

/// Extracts "key = value" from a result document section.
std::string document_value(const std::string& doc, const std::string& key) {
  std::istringstream in(doc);
  std::string line;
  const std::string prefix = key + " = ";
  while (std::getline(in, line)) {
    if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
  }
  return {};
}

}  // namespace

TEST_CASE("validate: classified points and exit 0") {
  std::string out;
  int code = run_cli(with_model({"validate"}), out);
  CHECK(code == 0);
  CHECK(document_value(out, "r") == "1");
  CHECK(document_value(out, "s") == "1");
  CHECK(document_value(out, "point_0_kind") == "singularity");
  CHECK(document_value(out, "point_-1_kind") == "singularity");
  CHECK(out.find("[config]") != std::string::npos);
  CHECK(out.find("[results]") != std::string::npos);
}

TEST_CASE("undershoot-limit: closed-form value emitted") {
  std::string out;
  int code = run_cli({"undershoot-limit", "--zeta", "1", "--kappa", "-1",
                      "--lambda", "1", "--p", "0.7", "--alphas", "1", "--mus",
                      "2", "--betas", "1", "--nus", "1"},
                     out);
  CHECK(code == 0);
  const std::string v = document_value(out, "undershoot_limit");
  REQUIRE_FALSE(v.empty());
  CHECK(std::stod(v) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("result documents: diagnostics attached to every probability") {
  std::string out;
  int code = run_cli(with_model({"ruin", "--x", "1", "--level", "-1"}), out);
  CHECK(code == 0);
  CHECK_FALSE(document_value(out, "ruin_probability").empty());
  CHECK_FALSE(document_value(out, "ruin_probability_imag_residual").empty());
  CHECK_FALSE(document_value(out, "ruin_probability_condition").empty());
  CHECK_FALSE(document_value(out, "ruin_probability_quad_budget").empty());
}

TEST_CASE("round-trip: re-running the emitted document reproduces the values") {
  const char* path = "roundtrip_test.doc";
  std::string first;
  int code = run_cli(
      with_model({"ruin", "--x", "1", "--level", "-1", "--out", path}), first);
  REQUIRE(code == 0);

  std::string second;
  code = run_cli({"ruin", "--config", path}, second);
  CHECK(code == 0);
  const std::string v1 = document_value(first, "ruin_probability");
  const std::string v2 = document_value(second, "ruin_probability");
  REQUIRE_FALSE(v1.empty());
  CHECK(v1 == v2);  // bit-for-bit
  CHECK(document_value(first, "ruin_probability_continuous_part") ==
        document_value(second, "ruin_probability_continuous_part"));
  std::remove(path);
}

TEST_CASE("exit codes: 0 ok, 2 config, 3 numerical, 4 unsupported") {
  std::string out;
  CHECK(run_cli(with_model({"ruin", "--x", "1", "--level", "-1"}), out) == 0);

  // validation error: p outside (0, 1]
  CHECK(run_cli({"ruin", "--kappa", "1", "--lambda", "1", "--p", "1.5",
                 "--alphas", "1", "--mus", "1", "--betas", "1", "--nus", "1",
                 "--x", "1", "--level", "-1"},
                out) == 2);
  CHECK(out.find("NonDensity") != std::string::npos);

  // config error: weight/rate arrays of different lengths
  CHECK(run_cli({"ruin", "--kappa", "1", "--lambda", "1", "--p", "0.5",
                 "--alphas", "[0.7,0.3]", "--mus", "[1.0]", "--betas", "1",
                 "--nus", "1", "--x", "1", "--level", "-1"},
                out) == 2);

  // unknown subcommand
  CHECK(run_cli({"bogus"}, out) == 2);

  // numerical: kernel evaluated exactly at a branch point
  CHECK(run_cli(with_model({"kernel", "--z-re", "1", "--z-im", "0"}), out) ==
        3);
  CHECK(out.find("AtBranchPoint") != std::string::npos);

  // unsupported scenario: inward drift, positive level, zeta > 0
  CHECK(run_cli({"laplace", "--kappa", "-0.7", "--lambda", "1.2", "--p",
                 "0.55", "--alphas", "1", "--mus", "1.4", "--betas", "1",
                 "--nus", "0.9", "--x", "2", "--level", "0.6", "--zeta",
                 "0.3"},
                out) == 4);
  CHECK(out.find("UnsupportedScenario") != std::string::npos);
}

TEST_CASE("config ingestion: unknown keys rejected") {
  const char* path = "badkey_test.cfg";
  {
    std::ofstream f(path);
    f << "kappa = 1\nlambda = 1\np = 0.5\nalphas = [1]\nmus = [1]\n"
      << "betas = [1]\nnus = [1]\nx = 1\nlevel = -1\nwibble = 3\n";
  }
  std::string out;
  CHECK(run_cli({"ruin", "--config", path}, out) == 2);
  CHECK(out.find("wibble") != std::string::npos);
  std::remove(path);
}

TEST_CASE("sweep: stable table layout, decreasing far-start column") {
  std::string out;
  int code = run_cli(with_model({"sweep", "--var", "x", "--from", "0.5",
                                 "--to", "6", "--points", "8", "asympt-level",
                                 "--format", "table"}),
                     out);
  REQUIRE(code == 0);

  std::istringstream in(out);
  std::string header;
  REQUIRE(std::getline(in, header));
  CHECK(header == "x,value,imag_residual,status");

  double prev = 1e300;
  int rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '[') continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() == 4);
    CHECK(cells[3] == "ok");
    const double v = std::stod(cells[1]);
    CHECK(v > 0.0);
    CHECK(v < prev);  // the deep-level limit falls with the start point
    prev = v;
    ++rows;
  }
  CHECK(rows == 8);
}

TEST_CASE("sweep: golden table reproduced byte for byte") {
  std::string out;
  int code = run_cli({"sweep",  "--var",  "x",     "--from",  "0.5",  "--to",
                      "4",      "--points", "8",   "ruin",    "--kappa", "1",
                      "--lambda", "1",    "--p",   "0.625",   "--alphas", "1",
                      "--mus",  "1",     "--betas", "1",      "--nus", "1",
                      "--level", "-1",   "--format", "table"},
                     out);
  REQUIRE(code == 0);
  std::ifstream golden(std::string(OUJUMP_GOLDEN_DIR) + "/sweep_ruin_x.csv");
  REQUIRE(golden.good());
  std::stringstream want;
  want << golden.rdbuf();
  CHECK(out == want.str());
}

TEST_CASE("verify-generator: reference model annihilates on the default grid") {
  std::string out;
  int code = run_cli(
      with_model({"verify-generator", "--level", "-1", "--grid", "12"}), out);
  CHECK(code == 0);
  const std::string rel = document_value(out, "relative_residual");
  REQUIRE_FALSE(rel.empty());
  CHECK(std::stod(rel) < 1e-6);
  CHECK(out.find("flag") == std::string::npos);
}
