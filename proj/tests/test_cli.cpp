#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "freeineq/errors.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "freeineq");
  std::vector<char*> argv;
  for (std::string& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = freeineq::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(f), {});
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "freeineq_cli_test" / name;
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("equilibrium command") {
  const fs::path dir = scratch("quadratic");
  const Result r = invoke({"equilibrium", "--family", "quadratic", "--rho", "2", "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.err.empty());
  const json j = json::parse(slurp(dir / "equilibrium.json"));
  CHECK(j["endpoints"][0].get<double>() == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(j["endpoints"][1].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  // 1 + log 4 for the semicircle on [-1, 1] under 2 x^2.
  CHECK(j["robin_constant"].get<double>() == doctest::Approx(1.0 + std::log(4.0)).epsilon(1e-10));
  CHECK(j["residual"].get<double>() < 1e-10);
  const auto rows = lines(slurp(dir / "density.csv"));
  CHECK(rows.size() == 202);
  CHECK(rows[0] == "x,density");

  const fs::path mp = scratch("mp");
  CHECK(invoke({"equilibrium", "--family", "mp", "--r", "1", "--s", "3", "--out", mp.string()}).code == 0);
  const json k = json::parse(slurp(mp / "equilibrium.json"));
  CHECK(k["endpoints"][0].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(k["endpoints"][1].get<double>() == doctest::Approx(9.0).epsilon(1e-12));
}

TEST_CASE("residual above tolerance exits 2 and still writes files") {
  const fs::path dir = scratch("strict");
  const Result r = invoke({"equilibrium", "--family", "quartic", "--tolerance", "0", "--out", dir.string()});
  CHECK(r.code == 2);
  CHECK(json::parse(r.err)["error"] == "residual");
  CHECK(fs::exists(dir / "equilibrium.json"));
}

TEST_CASE("malformed input exits 1 without files") {
  for (std::vector<std::string> args :
       {std::vector<std::string>{"equilibrium", "--rho", "two"},
        {"equilibrium", "--no-such-flag", "1"},
        {"equilibrium", "--family", "cubic"},
        {"verify", "--kind", "transport", "--measure", "perturb"},
        {"verify", "--kind", "nope"},
        {"counterexample", "--kind", "pinsker", "--n", "2"},
        {"counterexample", "--kind", "pinsker", "--n", "4,x"}}) {
    const fs::path dir = scratch("bad");
    args.push_back("--out");
    args.push_back(dir.string());
    const Result r = invoke(args);
    CHECK(r.code == 1);
    const json e = json::parse(r.err);
    CHECK(e.contains("error"));
    CHECK(e.contains("message"));
    CHECK(!fs::exists(dir));
  }
  const Result seed = invoke({"verify", "--kind", "lsi", "--measure", "shift"});
  CHECK(json::parse(seed.err)["error"] == "seed_required");
}

TEST_CASE("config merging") {
  const fs::path dir = scratch("config");
  fs::create_directories(dir);
  std::ofstream(dir / "mp.json") << R"({"family":"mp","r":1.0,"s":3.0})";
  const fs::path out = dir / "out";
  CHECK(invoke({"equilibrium", "--config", (dir / "mp.json").string(), "--out", out.string()}).code == 0);
  CHECK(json::parse(slurp(out / "equilibrium.json"))["endpoints"][1].get<double>() ==
        doctest::Approx(9.0));
  // Flags win over the file.
  CHECK(invoke({"equilibrium", "--config", (dir / "mp.json").string(), "--s", "0", "--out",
                out.string()}).code == 0);
  CHECK(json::parse(slurp(out / "equilibrium.json"))["endpoints"][1].get<double>() ==
        doctest::Approx(4.0));

  std::ofstream(dir / "bad.json") << R"({"family":"mp","radius":2})";
  const Result r = invoke({"equilibrium", "--config", (dir / "bad.json").string(), "--out",
                           (dir / "never").string()});
  CHECK(r.code == 1);
  CHECK(json::parse(r.err)["error"] == "config");
  CHECK(!fs::exists(dir / "never"));

  CHECK_THROWS_AS(freeineq::cli::merge_config("verify", R"({"command":"equilibrium"})", {}),
                  freeineq::Error);
  const auto c = freeineq::cli::merge_config("counterexample", R"({"n":[4,8],"kind":"pinsker"})",
                                             {{"kind", "arcsine-tv"}});
  CHECK(c.kind == "arcsine-tv");
  CHECK(c.n == std::vector<int>{4, 8});
}

TEST_CASE("verify command") {
  const fs::path lsi = scratch("lsi");
  CHECK(invoke({"verify", "--kind", "lsi", "--family", "quadratic", "--rho", "2", "--measure",
                "translate:0.5", "--out", lsi.string()}).code == 0);
  const json rep = json::parse(lines(slurp(lsi / "reports.jsonl")).at(0));
  CHECK(rep["verdict"] == "equality");
  CHECK(rep["kind"] == "lsi");

  const fs::path p2 = scratch("poincare2");
  CHECK(invoke({"verify", "--kind", "poincare2", "--measure", "semicircle:-2,2", "--out",
                p2.string()}).code == 0);
  for (const std::string& l : lines(slurp(p2 / "reports.jsonl"))) {
    CHECK(json::parse(l)["extras"]["constant"].get<double>() == doctest::Approx(1.0).epsilon(1e-8));
  }

  const fs::path sweep = scratch("sweep");
  CHECK(invoke({"verify", "--kind", "transport", "--family", "quartic", "--measure", "seed:42",
                "--count", "50", "--out", sweep.string()}).code == 0);
  const auto reports = lines(slurp(sweep / "reports.jsonl"));
  CHECK(reports.size() == 50);
  for (const std::string& l : reports) CHECK(json::parse(l)["verdict"] == "holds");
  CHECK(lines(slurp(sweep / "summary.csv")).size() == 51);

  const fs::path plus = scratch("plus");
  CHECK(invoke({"verify", "--kind", "plus-poincare", "--family", "mp", "--r", "1", "--s", "3",
                "--phi", "inverse", "--out", plus.string()}).code == 0);
  CHECK(json::parse(lines(slurp(plus / "reports.jsonl")).at(0))["verdict"] == "equality");

  CHECK(invoke({"verify", "--kind", "plus-lsi", "--family", "quadratic"}).code == 1);
}

TEST_CASE("counterexample command") {
  const fs::path dir = scratch("pinsker");
  CHECK(invoke({"counterexample", "--kind", "pinsker", "--n", "4,8,16,32", "--out", dir.string()}).code == 0);
  const auto rows = lines(slurp(dir / "pinsker.csv"));
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == "n,energy_gap,closed_form,distance,ratio,bound");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::vector<double> v;
    std::istringstream in(rows[i]);
    for (std::string cell; std::getline(in, cell, ',');) v.push_back(std::stod(cell));
    CHECK(std::abs(v[1] - v[2]) < 1e-12);
    CHECK(v[4] < v[5]);
  }

  const fs::path arc = scratch("arcsine");
  CHECK(invoke({"counterexample", "--kind", "arcsine-tv", "--n", "10", "--out", arc.string()}).code == 0);
  const auto a = lines(slurp(arc / "arcsine-tv.csv"));
  REQUIRE(a.size() == 2);
  CHECK(a[1].rfind("10,0.05", 0) == 0);
}

TEST_CASE("a gap below the tolerance exits 3 with the witness") {
  const fs::path dir = scratch("witness");
  const Result r = invoke({"verify", "--kind", "plus-poincare", "--family", "mp", "--r", "1",
                           "--s", "3", "--phi", "inverse", "--tolerance", "0", "--out",
                           dir.string()});
  REQUIRE(r.code == 3);
  const json e = json::parse(r.err);
  CHECK(e["error"] == "violated");
  CHECK(e["witness"]["gap"].get<double>() < 0.0);
  CHECK(e["witness"]["phi"]["coeffs"].size() == 61);
  CHECK(json::parse(slurp(dir / "witness.json")) == e["witness"]);
  CHECK(fs::exists(dir / "reports.jsonl"));
}
