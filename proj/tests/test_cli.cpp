#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "minicubes/experiments.hpp"
#include "minicubes/report.hpp"

using namespace minicubes;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream b;
  b << in.rdbuf();
  return b.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "minicubes-cli-tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("spec examples") {
  auto r = run({"count", "--n", "4", "--theta", "0.33"});
  REQUIRE(r.code == 0);
  auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"n", "theta", "variant", "count"});
  CHECK(rows[1][3] == "1");

  r = run({"expsum", "--q", "2", "--a", "1"});
  REQUIRE(r.code == 0);
  rows = parse_csv(r.out);
  CHECK(rows[0] == std::vector<std::string>{"q", "a", "re", "im"});
  CHECK(rows[1][2] == "0");
  CHECK(rows[1][3] == "0");

  r = run({"meanvalue", "--shape", "G4", "--R", "10", "--grid", "4096"});
  REQUIRE(r.code == 0);
  rows = parse_csv(r.out);
  CHECK(std::stod(rows[1][2]) == doctest::Approx(190.0).epsilon(1e-12));
  CHECK(rows[1][4] == "190");
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"bogus"}).code == kExitUsage);
  CHECK(run({"count", "--n", "4", "--frobnicate", "1"}).code == kExitUsage);
  CHECK(run({"count", "--n", "notanumber"}).code == kExitUsage);
  CHECK(run({"count", "--n", "4", "--format", "xml"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
  CHECK(run({"count", "--n", "4", "--theta", "0.5"}).code == kExitPrecondition);
  CHECK(run({"count"}).code == kExitPrecondition);
  CHECK(run({"expsum", "--q", "5", "--n", "3", "--qmax", "0"}).code == kExitOk);
  CHECK(run({"arcs", "--N", "4000", "--style", "Q"}).code == kExitPrecondition);
  CHECK(run({"count", "--n", "40000000000"}).code == kExitResource);
  CHECK(run({"meanvalue", "--shape", "G4", "--R", "400", "--grid", "60000000"}).code == kExitResource);
  CHECK(run({"genfun", "--kind", "w", "--N", "4000", "--alpha-grid", "100:100:1", "--tol", "1e-300"}).code ==
        kExitConvergence);
}

TEST_CASE("machine output carries 17 significant digits") {
  auto r = run({"predict", "--n", "4", "--qmax", "2000"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  CHECK(rows[0] == std::vector<std::string>{"n", "theta", "Qmax", "series", "tail", "gamma_const", "main_term"});
  CHECK(rows[1][5] == "0.58887958342848334");
  CHECK(format_real(1.0 / 3.0, kMachineDigits) == "0.33333333333333331");
  CHECK(format_real(1.0 / 3.0, kHumanDigits) == "0.333333");
}

TEST_CASE("csv and json carry the same payload") {
  for (std::vector<std::string> args : {std::vector<std::string>{"scan", "--n-lo", "1000", "--n-hi", "1100", "--theta", "0.3", "--qmax", "300"},
                                        std::vector<std::string>{"expsum", "--q", "9"},
                                        std::vector<std::string>{"arcs", "--N", "32000", "--style", "M", "--cutoff", "5"},
                                        std::vector<std::string>{"genfun", "--kind", "G", "--N", "32000", "--alpha-grid", "0:0.5:7"},
                                        std::vector<std::string>{"residual", "--P", "20", "--qmax", "3", "--samples", "3"}}) {
    const auto csv = run(args);
    args.insert(args.end(), {"--format", "json"});
    const auto js = run(args);
    REQUIRE(csv.code == 0);
    REQUIRE(js.code == 0);
    const auto rows = parse_csv(csv.out);
    const auto j = nlohmann::json::parse(js.out);
    REQUIRE(j.contains("manifest"));
    REQUIRE(j["rows"].size() + 1 == rows.size());
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto& rec = j["rows"][i - 1];
      for (std::size_t c = 0; c < rows[0].size(); ++c) {
        const auto& v = rec.at(rows[0][c]);
        const std::string cell = c < rows[i].size() ? rows[i][c] : "";
        if (v.is_null()) CHECK(cell.empty());
        else if (v.is_boolean()) CHECK(cell == (v.get<bool>() ? "1" : "0"));
        else if (v.is_string()) CHECK(cell == v.get<std::string>());
        else if (v.is_number_float()) CHECK(std::stod(cell) == v.get<double>());
        else CHECK(cell == v.dump());
      }
    }
  }
}

TEST_CASE("config file and manifest") {
  const auto cfg = scratch("run.cfg");
  {
    std::ofstream f(cfg);
    f << "N=32000\ntheta=0.25\ntau=0.001\neta=0.4\nL=6\nseed=7\ntol=1e-8\n";
  }
  const auto r = run({"arcs", "--config", cfg.string(), "--style", "P", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  const auto& m = j["manifest"];
  CHECK(m["command"] == "arcs");
  CHECK(m["config"]["N"] == "32000");
  CHECK(m["config"]["L"] == "6");
  CHECK(m["config"]["seed"] == "7");
  CHECK(m["summary"]["cutoff"].get<double>() == 6.0);
  CHECK(m.contains("version"));
  CHECK(m.contains("timestamp"));
  CHECK(m["input_hashes"].contains("config_file"));
  // P-style arcs: q <= 6, half width L/N
  for (const auto& row : j["rows"]) CHECK(row["half_width"].get<double>() == doctest::Approx(6.0 / 32000));

  const auto bad = scratch("bad.cfg");
  {
    std::ofstream f(bad);
    f << "N=32000\nwhatever=3\n";
  }
  CHECK(run({"arcs", "--config", bad.string()}).code == kExitUsage);
}

TEST_CASE("file output is reproducible and references its manifest") {
  const auto a = scratch("scan_a.csv");
  const auto b = scratch("scan_b.csv");
  for (const auto& p : {a, b}) {
    auto args = std::vector<std::string>{"scan", "--n-lo", "5000", "--n-hi", "5400", "--theta", "0.25", "--qmax", "500",
                                         "--workers", p == a ? "1" : "4", "--out", p.string()};
    REQUIRE(run(args).code == 0);
  }
  const auto ta = slurp(a), tb = slurp(b);
  CHECK(ta.rfind("# manifest=scan_a.csv.manifest.json\n", 0) == 0);
  CHECK(fs::exists(a.string() + ".manifest.json"));
  // identical apart from the manifest reference line
  CHECK(ta.substr(ta.find('\n')) == tb.substr(tb.find('\n')));

  // rerun with the same name: byte-identical data file
  REQUIRE(run({"scan", "--n-lo", "5000", "--n-hi", "5400", "--theta", "0.25", "--qmax", "500", "--out", a.string()}).code == 0);
  CHECK(slurp(a) == ta);

  const auto ma = nlohmann::json::parse(slurp(a.string() + ".manifest.json"));
  CHECK(ma["summary"]["size"] == 400);
}

TEST_CASE("smooth emits one integer per line") {
  const auto r = run({"smooth", "--R", "10", "--eta", "0.30103"});
  REQUIRE(r.code == 0);
  CHECK(r.out == "1\n2\n4\n8\n");
  const auto b = run({"smooth", "--X", "5", "--Z", "100", "--eta", "0.5"});
  CHECK(b.out == "6\n7\n8\n9\n10\n");
}

TEST_CASE("count variants through the CLI") {
  auto r = run({"count", "--variant", "sigma", "--N", "864", "--n", "1000", "--theta", "0.2"});
  CHECK(r.code == 0);
  r = run({"count", "--variant", "rho", "--N", "864", "--n", "1000", "--Y", "3", "--J", "1", "--eta", "0.5"});
  CHECK(r.code == 0);
  r = run({"count", "--variant", "rho", "--N", "864", "--n", "100"});
  CHECK(r.code == kExitPrecondition);
  r = run({"count", "--variant", "zeta", "--n", "100"});
  CHECK(r.code == kExitPrecondition);
}
