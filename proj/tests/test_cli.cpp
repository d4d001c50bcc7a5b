#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <numbers>

#include "cli_harness.hpp"
#include "lapmeas/experiments.hpp"
#include "lapmeas/io.hpp"
#include "lapmeas/measure.hpp"
#include "lapmeas/random.hpp"

using namespace lapmeas;
using harness::run_cli;

namespace {

const double e = std::numbers::e;

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST_CASE("usage errors") {
  CHECK(run_cli({}).code == cli::kUsage);
  CHECK(run_cli({"bogus"}).code == cli::kUsage);
  CHECK(run_cli({"measure", "--n", "3"}).code == cli::kUsage);
  CHECK(run_cli({"verify", "--suite", "nothing"}).code == cli::kUsage);
  const auto help = run_cli({"--help"});
  CHECK(help.code == cli::kSuccess);
  CHECK(help.out.find("counterexample") != std::string::npos);
}

TEST_CASE("measure on the 2x2 example") {
  harness::ScratchDir dir("cli_measure");
  const auto [ca, cb] = counterexample_pair();
  const auto a = dir.write_matrix("A.json", ca);
  const auto b = dir.write_matrix("B.json", cb);
  const auto out = dir.file("m64.json");

  const auto r = run_cli({"measure", "--a", a, "--b", b, "--n", "64", "--out", out, "--trace-csv", dir.file("trace.csv")});
  REQUIRE(r.code == cli::kSuccess);
  CHECK(r.out.rfind("atoms=65 support=[0,2]", 0) == 0);
  const auto m = io::read_measure(out);
  CHECK(m.size() == 65);
  CHECK(total_variation(m) <= 2.0 * e * e);
  CHECK(csv_rows(io::read_file(dir.file("trace.csv"))).size() == 66);

  const auto to_stdout = run_cli({"measure", "--a", a, "--b", b, "--n", "2"});
  REQUIRE(to_stdout.code == cli::kSuccess);
  CHECK(io::measure_from_json(nlohmann::json::parse(to_stdout.out)).size() == 3);
  CHECK(to_stdout.err.rfind("atoms=3", 0) == 0);

  const auto one = run_cli({"measure", "--a", a, "--b", b, "--n", "1", "--out", dir.file("m1.json")});
  REQUIRE(one.code == cli::kSuccess);
  const auto m1 = io::read_measure(dir.file("m1.json"));
  const auto d = decompose(ca);
  REQUIRE(m1.size() == 2);
  for (std::size_t j = 0; j < 2; ++j) CHECK(max_abs_diff(m1.atoms()[j].weight, d.projectors[j] * matrix_exp(cb)) < 1e-14);

  const auto zero_b = dir.write_matrix("Z.json", Matrix::zero(2));
  REQUIRE(run_cli({"measure", "--a", a, "--b", zero_b, "--n", "6", "--out", dir.file("mz.json")}).code == cli::kSuccess);
  const auto mz = io::read_measure(dir.file("mz.json"));
  CHECK(total_variation(mz) <= 2.0 + 1e-12);

  const auto brute = run_cli({"measure", "--a", a, "--b", b, "--n", "6", "--method", "bruteforce", "--out", dir.file("mb.json")});
  CHECK(brute.code == cli::kSuccess);
}

TEST_CASE("measure error exits") {
  harness::ScratchDir dir("cli_measure_err");
  const auto [ca, cb] = counterexample_pair();
  const auto a = dir.write_matrix("A.json", ca);
  const auto b = dir.write_matrix("B.json", cb);
  const auto b3 = dir.write_matrix("B3.json", Matrix::identity(3));
  const auto nonherm = dir.write_matrix("N.json", Matrix::from_rows({{0.0, 1.0}, {0.0, 0.0}}));
  io::write_file(dir.file("bad.json"), "[1, 2");

  CHECK(run_cli({"measure", "--a", a, "--b", b3, "--n", "4"}).code == cli::kInvalidInput);
  CHECK(run_cli({"measure", "--a", nonherm, "--b", b, "--n", "4"}).code == cli::kInvalidInput);
  CHECK(run_cli({"measure", "--a", dir.file("bad.json"), "--b", b, "--n", "4"}).code == cli::kInvalidInput);
  CHECK(run_cli({"measure", "--a", dir.file("missing.json"), "--b", b, "--n", "4"}).code == cli::kInvalidInput);
  CHECK(run_cli({"measure", "--a", a, "--b", b, "--n", "30", "--method", "bruteforce"}).code == cli::kResourceGuard);
  CHECK(run_cli({"measure", "--a", a, "--b", b, "--n", "100", "--dp-guard", "10"}).code == cli::kResourceGuard);
  CHECK(run_cli({"measure", "--a", a, "--b", b, "--n", "0"}).code == cli::kUsage);
}

TEST_CASE("transform round trip") {
  harness::ScratchDir dir("cli_transform");
  const auto [ca, cb] = counterexample_pair();
  const auto a = dir.write_matrix("A.json", ca);
  const auto b = dir.write_matrix("B.json", cb);
  const auto mpath = dir.file("m.json");
  const auto measure = run_cli({"measure", "--a", a, "--b", b, "--n", "256", "--out", mpath});
  REQUIRE(measure.code == cli::kSuccess);

  const auto tr = run_cli({"transform", "--measure", mpath, "--a", a, "--b", b, "--t-grid", "-1:1:0.1", "--out", dir.file("t.csv")});
  REQUIRE(tr.code == cli::kSuccess);
  CHECK(first_line(tr.out) == first_line(measure.out));

  const auto rows = csv_rows(io::read_file(dir.file("t.csv")));
  REQUIRE(rows.size() == 22);
  CHECK(rows[0] == std::vector<std::string>{"t_re", "t_im", "err_vs_LN", "err_vs_truth"});
  for (std::size_t k = 1; k < rows.size(); ++k) {
    CHECK(std::stod(rows[k][2]) <= 1e-9 * std::max(1.0, std::exp(2.0 * std::abs(std::stod(rows[k][0])) + 1.0)));
    CHECK(std::stod(rows[k][3]) <= 0.05);
    if (std::abs(std::stod(rows[k][0])) < 1e-12) CHECK(std::stod(rows[k][3]) <= 1e-10);
  }

  const auto bare = run_cli({"transform", "--measure", mpath, "--t-grid", "0:0.5:0.5+1i"});
  REQUIRE(bare.code == cli::kSuccess);
  const auto bare_rows = csv_rows(bare.out);
  REQUIRE(bare_rows.size() == 3);
  CHECK(bare_rows[1] == std::vector<std::string>{"0", "1", "nan", "nan"});

  io::write_file(dir.file("broken.json"), R"({"n": 2, "atoms": [{"lambda": 0}]})");
  CHECK(run_cli({"transform", "--measure", dir.file("broken.json")}).code == cli::kInvalidInput);
  CHECK(run_cli({"transform", "--measure", mpath, "--a", a}).code == cli::kUsage);
  CHECK(run_cli({"transform", "--measure", mpath, "--t-grid", "1:0:1"}).code == cli::kInvalidInput);
}

TEST_CASE("verify") {
  const auto r = run_cli({"verify", "--suite", "norms", "--trials", "1000", "--seed", "42", "--dim", "4"});
  CHECK(r.code == cli::kSuccess);
  CHECK(r.out.find("FAIL") == std::string::npos);
  CHECK(r.out.find("entry-sum bound") != std::string::npos);

  const auto bounds = run_cli({"verify", "--suite", "bounds", "--trials", "50"});
  CHECK(bounds.code == cli::kSuccess);
  CHECK(bounds.out.find("variation bound") != std::string::npos);

  const auto approx = run_cli({"verify", "--suite", "approximant", "--trials", "50"});
  CHECK(approx.code == cli::kSuccess);
  CHECK(approx.out.find("DP equals brute force") != std::string::npos);

  CHECK(run_cli({"verify", "--trials", "0"}).code == cli::kUsage);
}

TEST_CASE("converge") {
  harness::ScratchDir dir("cli_converge");
  const auto [ca, cb] = counterexample_pair();
  const auto a = dir.write_matrix("A.json", ca);
  const auto b = dir.write_matrix("B.json", cb);

  const auto r = run_cli({"converge", "--a", a, "--b", b, "--t-grid", "-1:1:0.1"});
  REQUIRE(r.code == cli::kSuccess);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 9);
  CHECK(rows[0][0] == "N");
  for (std::size_t k = 2; k < rows.size(); ++k) CHECK(std::stod(rows[k][1]) < std::stod(rows[k - 1][1]));

  const auto json = run_cli({"converge", "--a", a, "--b", b, "--schedule", "4,8", "--format", "json"});
  REQUIRE(json.code == cli::kSuccess);
  const auto j = nlohmann::json::parse(json.out);
  CHECK(j["per_N"].size() == 2);
  CHECK(j["per_N"][0]["cauchy_distance"].is_number());

  const auto da = dir.write_matrix("DA.json", Matrix::diagonal(std::vector<double>{1.0, -1.0}));
  const auto db = dir.write_matrix("DB.json", Matrix::diagonal(std::vector<double>{0.5, 0.25}));
  const auto commuting = run_cli({"converge", "--a", da, "--b", db, "--schedule", "1,2,4,8"});
  REQUIRE(commuting.code == cli::kSuccess);
  const auto commuting_rows = csv_rows(commuting.out);
  for (std::size_t k = 1; k < commuting_rows.size(); ++k) {
    const auto& row = commuting_rows[k];
    CHECK(std::stod(row[1]) <= 1e-10);
    for (std::size_t c = 3; c < row.size(); ++c) CHECK(std::stod(row[c]) <= 1e-10);
  }

  CHECK(run_cli({"converge", "--a", a, "--b", b, "--schedule", ""}).code == cli::kUsage);
  CHECK(run_cli({"converge", "--a", a, "--b", b, "--schedule", "8,4"}).code == cli::kUsage);
  CHECK(run_cli({"converge", "--a", a, "--b", dir.file("nope.json")}).code == cli::kInvalidInput);
}

TEST_CASE("counterexample") {
  const auto r = run_cli({"counterexample"});
  REQUIRE(r.code == cli::kSuccess);
  CHECK(r.out.find("detD = -0.381097") != std::string::npos);
  CHECK(r.out.find("positive semidefinite: false") != std::string::npos);

  const auto j = nlohmann::json::parse(run_cli({"counterexample", "--format", "json"}).out);
  CHECK(j["detD"].get<double>() < 0.0);
  CHECK_FALSE(j["psd_verdict"].get<bool>());
  const auto& rows = j["moment1_by_N"];
  REQUIRE(rows.size() == 6);
  for (std::size_t k = 1; k < rows.size(); ++k) CHECK(rows[k]["error"].get<double>() < rows[k - 1]["error"].get<double>());
  CHECK(run_cli({"counterexample", "--schedule", ""}).code == cli::kUsage);
  CHECK(run_cli({"counterexample", "--schedule", "32,16"}).code == cli::kUsage);
  CHECK(run_cli({"counterexample", "--schedule", "16,x"}).code == cli::kInvalidInput);
}

TEST_CASE("plot") {
  harness::ScratchDir dir("cli_plot");
  const auto [ca, cb] = counterexample_pair();
  const auto a = dir.write_matrix("A.json", ca);
  const auto b = dir.write_matrix("B.json", cb);
  REQUIRE(run_cli({"measure", "--a", a, "--b", b, "--n", "128", "--out", dir.file("m.json")}).code == cli::kSuccess);
  REQUIRE(run_cli({"plot", "--measure", dir.file("m.json"), "--out", dir.file("stems")}).code == cli::kSuccess);

  const auto dat = csv_rows(io::read_file(dir.file("stems.dat")));
  CHECK(dat.size() == 130);
  const auto gp = io::read_file(dir.file("stems.gp"));
  for (unsigned char c : gp) CHECK(c < 128);
  CHECK(gp.find("'stems.dat'") != std::string::npos);
  CHECK(gp.find(dir.file("")) == std::string::npos);
  CHECK(gp.find("impulses") != std::string::npos);

  const auto z = dir.write_matrix("Z.json", Matrix::zero(2));
  REQUIRE(run_cli({"measure", "--a", a, "--b", z, "--n", "1", "--out", dir.file("mz.json")}).code == cli::kSuccess);
  REQUIRE(run_cli({"plot", "--measure", dir.file("mz.json"), "--out", dir.file("proj")}).code == cli::kSuccess);
  std::istringstream in(io::read_file(dir.file("proj.dat")));
  std::string header;
  std::getline(in, header);
  double lambda, norm, tre, tim;
  int stems = 0;
  while (in >> lambda >> norm >> tre >> tim) {
    ++stems;
    CHECK(norm == doctest::Approx(1.0));
  }
  CHECK(stems == 2);

  io::write_file(dir.file("broken.json"), "{}");
  CHECK(run_cli({"plot", "--measure", dir.file("broken.json"), "--out", dir.file("x")}).code == cli::kInvalidInput);
}
