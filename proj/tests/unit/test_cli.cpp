#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "catch2/catch_amalgamated.hpp"
#include "osgood/lab/config.hpp"
#include "osgood/lab/report.hpp"

namespace fs = std::filesystem;
using osgood::lab::Json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("osgood_test_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

int lab(const std::string& args) {
  const std::string cmd = std::string(OSGOOD_LAB_PATH) + " " + args + " >/dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

}  // namespace

TEST_CASE("modulus closed-form check passes and writes the comparison table") {
  const fs::path out = scratch("modulus");
  REQUIRE(lab("modulus --kind log_lipschitz --check closed-form --out " + out.string()) == 0);
  CHECK(first_line(out / "modulus.csv") == "r,R_pipeline,R_closed,rel_err");
  const Json m = Json::parse(slurp(out / "manifest.json"));
  CHECK(m["pass"] == true);
  CHECK(m["subcommand"] == "modulus");
  CHECK(m["config"]["points"] == 100);
}

TEST_CASE("acm blowup run records both verdicts in the manifest") {
  const fs::path out = scratch("acm");
  const int status =
      lab("acm --theta log1 --N 8 --condition blowup --s 0.5 --t 0.1 --out " + out.string());
  const Json m = Json::parse(slurp(out / "manifest.json"));
  CHECK(m["verdicts"]["display_verdict"] == "diverging");
  CHECK(m["verdicts"]["expected"] == "diverging");
  CHECK(status == (m["verdicts"]["verdict"] == "diverging" ? 0 : 1));
  CHECK(m["pass"] == (status == 0));
}

TEST_CASE("parse failures exit with status 2") {
  const fs::path cfg = scratch("empty.json");
  std::ofstream(cfg) << "";
  CHECK(lab("--config " + cfg.string()) == 2);
  std::ofstream(cfg) << "{\"subcommand\": \"modulus\", \"colour\": 1}";
  CHECK(lab("--config " + cfg.string()) == 2);
  std::ofstream(cfg) << "{ not json";
  CHECK(lab("--config " + cfg.string()) == 2);
  CHECK(lab("") == 2);
  CHECK(lab("modulus --points abc") == 2);
  CHECK(lab("nosuch") == 2);
}

TEST_CASE("validation failures exit with status 3 before any output") {
  const fs::path out = scratch("invalid");
  CHECK(lab("modulus --points 0 --out " + out.string()) == 3);
  CHECK(lab("acm --theta log9 --out " + out.string()) == 3);
  CHECK(lab("flow --tol -1 --out " + out.string()) == 3);
  CHECK(lab("euler --profile log_singular --radius 0.3 --out " + out.string()) == 3);
  CHECK(lab("interp --threads 0 --out " + out.string()) == 3);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("an unwritable output location exits with status 4") {
  const fs::path blocker = scratch("blocker");
  std::ofstream(blocker) << "file";
  CHECK(lab("modulus --out " + (blocker / "sub").string()) == 4);
}

TEST_CASE("config file values are overridden by flags") {
  const fs::path cfg = scratch("cfg.json");
  const fs::path out = scratch("cfg_out");
  std::ofstream(cfg) << Json{{"subcommand", "modulus"},
                             {"seed", 7},
                             {"out", out.string()},
                             {"params", {{"points", 5}, {"kind", "lipschitz"}}}}
                            .dump();
  REQUIRE(lab("--config " + cfg.string() + " modulus --points 9") == 0);
  const Json m = Json::parse(slurp(out / "manifest.json"));
  CHECK(m["seed"] == 7);
  CHECK(m["config"]["points"] == 9);
  CHECK(m["config"]["kind"] == "lipschitz");
}

TEST_CASE("reruns with the same seed are byte-identical apart from the timestamp") {
  for (const std::string args : {"interp --fields 4 --seed 11", "flow --pairs 200 --seed 3",
                                 "euler --n-grid 32 --t-final 0.1"}) {
    const fs::path a = scratch("rerun_a");
    const fs::path b = scratch("rerun_b");
    REQUIRE(lab(args + " --threads 1 --out " + a.string()) == 0);
    REQUIRE(lab(args + " --threads 3 --out " + b.string()) == 0);
    for (const auto& entry : fs::directory_iterator(a)) {
      const fs::path name = entry.path().filename();
      if (name == "manifest.json") continue;
      CHECK(slurp(a / name) == slurp(b / name));
    }
    Json ma = Json::parse(slurp(a / "manifest.json"));
    Json mb = Json::parse(slurp(b / "manifest.json"));
    for (Json* m : {&ma, &mb}) {
      m->erase("timestamp");
      m->erase("threads");
    }
    CHECK(ma == mb);
  }
}

TEST_CASE("manifest survives a parse and re-emit round trip") {
  const fs::path out = scratch("roundtrip");
  REQUIRE(lab("modulus --check table --out " + out.string()) == 0);
  const std::string text = slurp(out / "manifest.json");
  CHECK(Json::parse(text).dump(2) + "\n" == text);

  osgood::lab::Report report;
  report.verdicts = {{"x", 0.1}, {"tiny", 5e-324}, {"name", "a,b"}};
  report.resolved = {{"list", {1.5, 2, -3e300}}};
  report.pass = false;
  const osgood::lab::ManifestContext ctx{"flow", 42, 2, "2026-01-01T00:00:00Z", 1.25};
  const Json m = osgood::lab::make_manifest(report, ctx);
  CHECK(Json::parse(m.dump()) == m);
}

TEST_CASE("zero-row table emits a header-only CSV") {
  osgood::lab::Table t{"empty", {"a", "b"}, {}};
  CHECK(osgood::lab::to_csv(t) == "a,b\n");
  const fs::path out = scratch("zero_rows");
  osgood::lab::Report report;
  report.tables.push_back(t);
  osgood::lab::emit_report(report, {"modulus", 1, 1, "", 0.0}, out);
  CHECK(slurp(out / "empty.csv") == "a,b\n");
  CHECK(fs::exists(out / "manifest.json"));
}

TEST_CASE("cells format as shortest round-trip text") {
  using osgood::lab::format_cell;
  CHECK(format_cell(0.1) == "0.1");
  CHECK(format_cell(1e-12) == "1e-12");
  CHECK(format_cell(3LL) == "3");
  CHECK(format_cell(std::string("a,b")) == "\"a,b\"");
  for (double x : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300})
    CHECK(std::stod(format_cell(x)) == x);
  osgood::lab::Table t{"t", {"a", "b"}, {}};
  CHECK_THROWS(t.add({1.0}));
}
