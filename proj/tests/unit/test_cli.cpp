#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "config.hpp"
#include "doctest.h"
#include "expr.hpp"

using namespace meridian;
using namespace meridian::cli;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir() {
  fs::path d = MERIDIAN_TEST_TMP;
  fs::create_directories(d);
  return d;
}

std::string write_file(const std::string& name, const std::string& body) {
  const fs::path p = tmp_dir() / name;
  std::ofstream(p) << body;
  return p.string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> cells(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

int run_binary(const std::string& args, const std::string& stdout_name = "stdout.txt") {
  const std::string cmd = std::string(MERIDIAN_BIN) + " " + args + " > " +
                          (tmp_dir() / stdout_name).string() + " 2> " +
                          (tmp_dir() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

int run_args(std::vector<std::string> args, std::string* out_text = nullptr,
             std::string* err_text = nullptr) {
  args.insert(args.begin(), "meridian");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int rc = run(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return rc;
}

const char* kCosConfig = R"json({
  "geometry": "hyperbolic",
  "curve": {"kind": "constant", "b": 1},
  "profile": {"kind": "explicit_f", "f": "cos(u)", "g0": "sin(pi/4 - 0.5)"},
  "domain": {"u": ["pi/4 - 0.5", "pi/4 + 0.5"], "v": [0.2, 0.4]},
  "grid": {"nu": 3, "nv": 3}
})json";

const char* kSinhConfig = R"json({
  "geometry": "elliptic",
  "curve": {"kind": "constant", "b": 0},
  "profile": {"kind": "explicit_f", "f": "sinh(u)", "g0": "cosh(0.5)"},
  "domain": {"u": [0.5, 1.5], "v": [0, 1]},
  "grid": {"nu": 3, "nv": 3}
})json";

}  // namespace

TEST_CASE("expression parser") {
  const Expression e = Expression::parse("2*u^2 - sin(u) + e");
  CHECK(e.eval(1.0) == doctest::Approx(2 - std::sin(1.0) + std::numbers::e));
  const Jet2 j = e.eval(Jet2::variable(1.0));
  CHECK(j.d1 == doctest::Approx(4 - std::cos(1.0)));
  CHECK(j.d2 == doctest::Approx(4 + std::sin(1.0)));
  const Jet3 k = e.eval(Jet3::variable(1.0));
  CHECK(k.d3 == doctest::Approx(std::cos(1.0)));
  CHECK(Expression::parse("-u^2").eval(3.0) == -9.0);
  CHECK(Expression::parse("2^3^2").eval(0.0) == 512.0);
  CHECK(Expression::parse("arcsinh(t) + ln(t)").eval(1.0) == doctest::Approx(std::asinh(1.0)));
  CHECK_FALSE(Expression::parse("pi/4 + 1").uses_variable());
  CHECK(Expression::parse("v").uses_variable());
  CHECK_THROWS_AS(Expression::parse("sin(u"), DomainError);
  CHECK_THROWS_AS(Expression::parse("foo(u)"), DomainError);
  CHECK_THROWS_AS(Expression::parse("u +"), DomainError);
  const ScalarFn f = Expression::parse("cosh(u)").to_scalar_fn();
  REQUIRE(f.has_third());
  CHECK(f.jet3(0.3)->d3 == doctest::Approx(std::sinh(0.3)));
  CHECK(Expression::parse("3").to_scalar_fn().constant_value() == 3.0);
}

TEST_CASE("nine significant digits") {
  CHECK(fmt9(0.0) == "0.0");
  CHECK(fmt9(-0.0) == "0.0");
  CHECK(fmt9(1.0) == "1.0");
  CHECK(fmt9(-2.0) == "-2.0");
  CHECK(fmt9(std::sinh(1.0)) == "1.17520119");
  CHECK(fmt9(1e-12) == "1e-12");
  CHECK(fmt9(0.5) == "0.5");
}

TEST_CASE("grid flag parsing") {
  const Grid g = parse_grid("3,4");
  CHECK(g.nu == 3);
  CHECK(g.nv == 4);
  CHECK_THROWS_AS(parse_grid("3"), DomainError);
  CHECK_THROWS_AS(parse_grid("0,3"), DomainError);
  CHECK_THROWS_AS(parse_grid("3,x"), DomainError);
}

TEST_CASE("config errors name the field") {
  using nlohmann::json;
  CHECK_THROWS_WITH_AS(parse_config(json::object()), "missing field: geometry", ConfigError);
  CHECK_THROWS_WITH_AS(load_config(write_file("empty.json", "")), "missing field: geometry",
                       ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config(json::parse(R"json({"geometry":"elliptic","curve":{"kind":"constant","b":1},
                                  "profile":{"kind":"explicit_f","f":"u"}})json")),
      "missing field: domain.u", ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(json::parse(R"json({"geometry":"parabolic"})json")),
                       doctest::Contains("geometry"), ConfigError);
  const auto bad = parse_config(json::parse(R"json({"geometry":"elliptic","curve":{"kind":"constant","b":1},
      "profile":{"kind":"explicit_f","f":"cos(u)"},"domain":{"u":[0.2,1]}})json"));
  CHECK_THROWS_WITH(build_surface(bad), doctest::Contains("elliptic normalization requires ḟ² > 1"));
}

TEST_CASE("build writes a reloadable descriptor") {
  const std::string cfg = write_file("gauss.json", R"json({
    "geometry": "elliptic",
    "profile": {"kind": "family", "family": "constant_gauss", "params": {"K0": -1, "alpha": 0, "beta": 1}}
  })json");
  const std::string out = (tmp_dir() / "gauss_surface.json").string();
  std::string log;
  REQUIRE(run_args({"build", "--config", cfg, "--out", out}, &log) == kExitOk);
  const auto d = nlohmann::json::parse(read_file(out));
  CHECK(d["domain"]["u"][0].get<double>() == 0.5);
  CHECK(d["domain"]["u"][1].get<double>() == 2.0);
  CHECK(d["domain"]["v"][0].get<double>() == 0.0);
  CHECK(d["domain"]["v"][1].get<double>() == doctest::Approx(2 * std::numbers::pi));
  CHECK(d["geometry"] == "elliptic");
  const auto again = parse_config(d);
  CHECK(again.profile.family.K0 == -1);

  const std::string bad = write_file("cos_elliptic.json", R"json({"geometry":"elliptic",
      "curve":{"kind":"constant","b":1},"profile":{"kind":"explicit_f","f":"cos(u)"},
      "domain":{"u":[0.2,1]}})json");
  std::string err;
  CHECK(run_args({"build", "--config", bad, "--out", out}, nullptr, &err) == kExitInvalidInput);
  CHECK(err.find("elliptic normalization requires ḟ² > 1") != std::string::npos);
  CHECK(run_args({"build", "--config", write_file("blank.json", "  \n"), "--out", out}, nullptr,
                 &err) == kExitInvalidInput);
  CHECK(err.find("missing field: geometry") != std::string::npos);
}

TEST_CASE("invariants CSV") {
  const std::string cfg = write_file("cos.json", kCosConfig);
  const std::string out = (tmp_dir() / "cos.csv").string();
  REQUIRE(run_args({"invariants", "--config", cfg, "--out", out}) == kExitOk);
  const std::string text = read_file(out);
  const auto rows = lines(text);
  REQUIRE(rows.size() == 10);
  CHECK(rows[0] == kInvariantsHeader);
  CHECK(text.find('\r') == std::string::npos);
  // Middle of the 3x3 grid: (pi/4, 0.3).
  const auto c = cells(rows[5]);
  REQUIRE(c.size() == 20);
  CHECK(std::stod(c[0]) == doctest::Approx(std::numbers::pi / 4).epsilon(1e-8));
  CHECK(std::stod(c[1]) == doctest::Approx(0.3));
  CHECK(c[5] == "-2.0");
  CHECK(c[6] == "0.0");
  CHECK(c[7] == "1.0");
  CHECK(std::stod(c[15]) == doctest::Approx(-0.707107).epsilon(1e-6));
  CHECK(c[16] == "-1.0");
  CHECK(c[17] == "-1.0");
  CHECK(c[18] == "1.0");
  CHECK(c[19] == "general");

  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(cells(rows[i])[6] == "0.0");

  const std::string again = (tmp_dir() / "cos_again.csv").string();
  REQUIRE(run_args({"invariants", "--config", cfg, "--out", again}) == kExitOk);
  CHECK(read_file(again) == text);

  const std::string serial = (tmp_dir() / "cos_serial.csv").string();
  std::ostringstream log;
  REQUIRE(cmd_invariants(cfg, std::nullopt, serial, log, Exec::serial) == kExitOk);
  CHECK(read_file(serial) == text);
}

TEST_CASE("flat surfaces carry the class tag and empty cells") {
  const std::string cfg = write_file("flat.json", R"json({
    "geometry": "elliptic",
    "curve": {"kind": "constant", "b": 0},
    "profile": {"kind": "explicit_f", "f": "sinh(u)"},
    "domain": {"u": [0.5, 1.5]},
    "grid": {"nu": 4, "nv": 5}
  })json");
  const std::string out = (tmp_dir() / "flat.csv").string();
  REQUIRE(run_args({"invariants", "--config", cfg, "--out", out, "--grid", "3,3"}) == kExitOk);
  const auto rows = lines(read_file(out));
  REQUIRE(rows.size() == 10);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto c = cells(rows[i]);
    REQUIRE(c.size() == 20);
    CHECK(c[19] == "flat_case_I");
    CHECK(c[6] == "0.0");
    for (int k = 10; k < 19; ++k) CHECK(c[k].empty());
  }
}

TEST_CASE("export") {
  const std::string cfg = write_file("sinh.json", kSinhConfig);
  const std::string csv = (tmp_dir() / "sinh.csv").string();
  REQUIRE(run_args({"export", "--config", cfg, "--format", "csv4", "--out", csv}) == kExitOk);
  const auto rows = lines(read_file(csv));
  REQUIRE(rows.size() == 10);
  CHECK(rows[0] == "u,v,x1,x2,x3,x4");
  // (u, v) = (1, 0) is the middle row of the first v column.
  const auto c = cells(rows[4]);
  CHECK(c[0] == "1.0");
  CHECK(c[1] == "0.0");
  const double expect[4] = {1.175201, 0.0, 0.0, 1.543081};
  for (int i = 0; i < 4; ++i) CHECK(std::abs(std::stod(c[2 + i]) - expect[i]) < 5e-7);
  CHECK(c[3] == "0.0");
  CHECK(c[4] == "0.0");

  const std::string obj = (tmp_dir() / "sinh.obj").string();
  REQUIRE(run_args({"export", "--config", cfg, "--format", "obj3", "--grid", "4,5", "--out", obj}) ==
          kExitOk);
  int verts = 0, faces = 0;
  for (const auto& l : lines(read_file(obj))) {
    if (l.rfind("v ", 0) == 0) ++verts;
    if (l.rfind("f ", 0) == 0) ++faces;
  }
  CHECK(verts == 20);
  CHECK(faces == 12);

  std::string err;
  CHECK(run_args({"export", "--config", cfg, "--format", "stl", "--out", obj}, nullptr, &err) ==
        kExitInvalidInput);
  CHECK(err.find("stl") != std::string::npos);
}

TEST_CASE("verify exit codes through the installed binary") {
  const std::string jsonl = (tmp_dir() / "reports.jsonl").string();
  fs::remove(jsonl);
  CHECK(run_binary("verify --family constant_k --geometry elliptic --a 1 --b 1 --C 0 --tol 1e-6 --jsonl " +
                   jsonl) == 0);
  CHECK(read_file((tmp_dir() / "stdout.txt").string()).find("result: PASS") != std::string::npos);
  CHECK(run_binary("verify --family constant_k --geometry elliptic --a 1 --b 1 --C 0 --tol 1e-12") == 1);
  CHECK(run_binary("verify --family constant_mean --geometry hyperbolic --epsilon-branch printed-vs-eq18") ==
        1);
  CHECK(run_binary("verify --family constant_k --geometry elliptic --a 0") == 2);
  CHECK(run_binary("verify --family torus") == 2);
  CHECK(run_binary("frobnicate") == 2);
  CHECK(run_binary("verify --family chen --geometry elliptic --a 1 --b 1") == 2);

  const auto reports = lines(read_file(jsonl));
  REQUIRE(reports.size() == 3);
  for (const auto& r : reports) {
    const auto j = nlohmann::json::parse(r);
    CHECK(j["pass"] == true);
    CHECK(j.contains("max_abs_residual"));
    CHECK(j.contains("argmax"));
  }
}
