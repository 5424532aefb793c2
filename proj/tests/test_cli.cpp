#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "alab/dense_oracle.hpp"
#include "alab/calculus.hpp"
#include "alab/estimators.hpp"
#include "alab/field_io.hpp"
#include "alab/report.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / "alab_cli_test";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = "cd '" + workdir().string() + "' && '" ANNULUS_LAB_PATH "' " + args +
                          " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_config(const std::string& name, const std::string& body) {
  const fs::path p = workdir() / name;
  std::ofstream(p) << body;
  return p;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("identities") {
  CHECK(run("identities --out id1") == 0);
  CHECK(run("identities --out id2") == 0);
  const std::string a = slurp(workdir() / "id1" / "identities.json");
  std::string b = slurp(workdir() / "id2" / "identities.json");
  CHECK(!a.empty());
  // Only the out field differs.
  const auto pos = b.find("\"id2\"");
  REQUIRE(pos != std::string::npos);
  b.replace(pos, 5, "\"id1\"");
  CHECK(a == b);
  const auto bad = write_config("bad.json", R"({"ensemble": {"lambda": 1.5}})");
  CHECK(run("identities --config " + bad.string()) == 1);
  CHECK(run("identities --config " + write_config("unk.json", R"({"colour": 1})").string()) == 1);
  CHECK(run("identities --preset missing") == 1);
  CHECK(run("") == 1);
  CHECK(run("identities --bogus") == 1);
}

TEST_CASE("quenched") {
  CHECK(run("quenched --preset constant-d3 --out cd3") == 0);
  std::ifstream in(workdir() / "cd3" / "quenched.json");
  const auto j = nlohmann::json::parse(in);
  CHECK(j["max_band"].get<double>() <= 2.0);
  CHECK(j["config"]["T"].get<double>() == 256.0);

  const auto cfg = write_config("q.json", R"({"lattice": {"d": 2, "L": 32}, "samples": 3,
    "radii": [1, 2, 4], "quenched": {"mixed_radii": [0.5]}})");
  CHECK(run("quenched --config " + cfg.string() + " --out q1") == 0);
  CHECK(run("quenched --config " + cfg.string() + " --out q1b") == 0);
  CHECK(slurp(workdir() / "q1" / "quenched.csv") == slurp(workdir() / "q1b" / "quenched.csv"));
  CHECK(slurp(workdir() / "q1" / "quenched_mixed.csv") ==
        slurp(workdir() / "q1b" / "quenched_mixed.csv"));
  CHECK(run("quenched --config " + cfg.string() + " --seed 5 --out q2") == 0);
  CHECK(slurp(workdir() / "q1" / "quenched.csv") != slurp(workdir() / "q2" / "quenched.csv"));
  const std::string head = slurp(workdir() / "q1" / "quenched.csv").substr(0, 40);
  CHECK(head.rfind("schema_version,sample,R,value,scaled", 0) == 0);

  const auto wide = write_config("wide.json", R"({"lattice": {"L": 32}, "radii": [8]})");
  CHECK(run("quenched --config " + wide.string()) == 1);
  const auto strict = write_config("strict.json", R"({"lattice": {"L": 32}, "samples": 1,
    "radii": [1, 4], "quenched": {"band_threshold": 1.0}})");
  CHECK(run("quenched --config " + strict.string() + " --out q3") == 3);
  const auto starve = write_config("starve.json", R"({"lattice": {"L": 32}, "samples": 2,
    "solver": {"max_iter": 2}})");
  CHECK(run("quenched --config " + starve.string() + " --out q4") == 2);
}

TEST_CASE("annealed") {
  CHECK(run("annealed --preset tiny-ring --out ring") == 0);
  const alab::CsvData csv = alab::read_csv(workdir() / "ring" / "moments.csv");
  const auto ring = alab::build_torus(1, 6);
  const int cr = csv.column("r_bin"), cp = csv.column("p"), ce = csv.column("estimate");
  REQUIRE(csv.rows.size() == 6);
  for (const auto& row : csv.rows) {
    const double r = std::stod(row[static_cast<std::size_t>(cr)]);
    const int p = std::stoi(row[static_cast<std::size_t>(cp)]);
    const auto bin = alab::gradient_bin_edges(*ring, r);
    const double exact = alab::enumeration_oracle(
        ring, 0.25, 2.25, [&](const alab::CoefficientField&, const alab::DenseGreenOracle& o) {
          const alab::EdgeField g = alab::grad(o.column(0));
          double s = 0.0;
          for (const alab::Edge& e : bin) s += std::pow(std::abs(g.at(e)), p);
          return s / bin.size();
        });
    CHECK(std::stod(row[static_cast<std::size_t>(ce)]) ==
          doctest::Approx(std::pow(exact, 1.0 / p)).epsilon(1e-10));
  }

  CHECK(run("annealed --preset constant-d2 --out cd2") == 0);
  for (const char* f : {"moments.csv", "mixed_moments.csv"}) {
    const alab::CsvData c = alab::read_csv(workdir() / "cd2" / f);
    const int cs = c.column("stderr");
    REQUIRE(cs >= 0);
    for (const auto& row : c.rows) CHECK(row[static_cast<std::size_t>(cs)] == "0");
  }

  const auto tight = write_config("tight.json", R"({"lattice": {"L": 64}, "samples": 2,
    "radii": [4, 8, 16], "annealed": {"mixed": false,
    "gradient_fit": {"slope_lo": 5, "slope_hi": 6, "enforce": true}}})");
  CHECK(run("annealed --config " + tight.string() + " --out tight") == 3);
  CHECK(run("fit --out tight") == 0);
  const auto fitcfg = write_config("fit.json", R"({"fit": {"input": "tight/moments.csv"},
    "annealed": {"gradient_fit": {"slope_lo": 5, "slope_hi": 6, "enforce": true}}})");
  CHECK(run("fit --config " + fitcfg.string() + " --out fitout") == 3);
  CHECK(run("fit --out nowhere") == 1);
}

TEST_CASE("solve") {
  CHECK(run("solve --out s2") == 0);
  CHECK(fs::exists(workdir() / "s2" / "grad_green.bin"));
  CHECK_FALSE(fs::exists(workdir() / "s2" / "green.bin"));
  CHECK(fs::exists(workdir() / "s2" / "field.bin"));
  const auto cfg = write_config("s3.json", R"({"lattice": {"d": 3, "L": 8}})");
  CHECK(run("solve --config " + cfg.string() + " --out s3") == 0);
  CHECK(fs::file_size(workdir() / "s3" / "green.bin") == alab::kRecordHeaderBytes + 8 * 512);
  std::ifstream in(workdir() / "s3" / "solve.json");
  const auto j = nlohmann::json::parse(in);
  CHECK(j["mass_defect"].get<double>() <= 1e-8);
  CHECK(j["positive"].get<bool>());
}

}  // TEST_SUITE
