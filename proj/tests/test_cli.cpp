#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "sqz/cli.hpp"

using namespace sqz;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("sqz_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int run_cli(const std::string& args) {
  const int rc = std::system((std::string(SQZ_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "run.cfg";
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = cli::Config::parse("atoms = 12  # comment\nalpha=2.5\n\ntilt = 3*pi/4\nnbar_list = 1, 2,3\n");
  CHECK(c.integer("atoms") == 12);
  CHECK(c.real("alpha") == doctest::Approx(2.5));
  CHECK(c.real("tilt") == doctest::Approx(0.75 * M_PI));
  CHECK(c.reals("nbar_list").size() == 3);
  CHECK(c.given("atoms"));
  CHECK_FALSE(c.given("gamma_f"));
  CHECK(c.real("gamma_f") == 0.0);
  CHECK(c.real("tilt_step") == doctest::Approx(M_PI / 30));
  CHECK_THROWS_AS(cli::Config::parse("gamma_photon = 1\n"), cli::ParseError);
  CHECK_THROWS_AS(cli::Config::parse("atoms = 1\natoms = 2\n"), cli::ParseError);
  CHECK_THROWS_AS(cli::Config::parse("atoms = 1.5\n"), cli::ParseError);
  CHECK_THROWS_AS(cli::Config::parse("gate = maybe\n"), cli::ParseError);
  CHECK_THROWS_AS(cli::Config::parse("just text\n"), cli::ParseError);
  CHECK(cli::parse_real("pi/4") == doctest::Approx(M_PI / 4));
  CHECK(cli::parse_real("2*pi") == doctest::Approx(2 * M_PI));
  CHECK_THROWS_AS(cli::parse_real("pie"), cli::ParseError);
}

TEST_CASE("numbers round-trip through the text format") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 6.02214076e23, 0.0}) {
    const std::string s = cli::format_real(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(cli::format_real(NAN) == "nan");
  const cli::Table t{{"x", "y"}, {{1.0, 0.5}, {2.0, NAN}}};
  CHECK(cli::csv_text(t) == "x,y\n1,0.5\n2,nan\n");
  CHECK(cli::json_text(t) == "{\"columns\":[\"x\",\"y\"],\"rows\":[[1.0,0.5],[2.0,null]]}\n");
  CHECK(cli::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("validate reports without computing") {
  const auto ok = cli::validate(cli::Config::parse("atoms = 10\nphoton_cut = 50\n"));
  REQUIRE_FALSE(ok.empty());
  CHECK(ok.front() == "ok");
  CHECK(ok[1].find("= 561") != std::string::npos);
  const auto neg = cli::validate(cli::Config::parse("gamma_a = -0.1\n"));
  CHECK(neg.front().rfind("error", 0) == 0);
  const auto big = cli::validate(cli::Config::parse("atoms = 100\nalpha = 10\ngamma_f = 0.01\n"));
  bool warned = false;
  for (const auto& l : big) warned = warned || l.find("desk-scale budget") != std::string::npos;
  CHECK(warned);
}

TEST_CASE("unknown key exits with the parse status") {
  const fs::path d = scratch("unknown");
  const fs::path cfg = write_config(d, "gamma_photon = 0.1\n");
  CHECK(run_cli("prepare --config " + cfg.string() + " --out " + (d / "out").string()) == cli::kParseError);
  CHECK(run_cli("no-such-command --out " + (d / "out").string()) == cli::kParseError);
  CHECK(run_cli("prepare --format xml") == cli::kParseError);
}

TEST_CASE("bad physics input exits with the scenario status") {
  const fs::path d = scratch("scenario");
  const fs::path cfg = write_config(d, "atoms = 0\n");
  CHECK(run_cli("prepare --config " + cfg.string() + " --out " + (d / "out").string()) == cli::kScenarioError);
  const fs::path cut = write_config(d, "alpha = 5\nphoton_cut = 10\n");
  CHECK(run_cli("prepare --config " + cut.string() + " --out " + (d / "out").string()) == cli::kNumericalError);
}

TEST_CASE("prep records header is pinned") {
  const fs::path d = scratch("golden");
  const fs::path cfg = write_config(d, "atoms = 3\nalpha = 1\nprep_gt = 0.1\nprep_samples = 2\n");
  REQUIRE(run_cli("prepare --config " + cfg.string() + " --out " + (d / "out").string()) == 0);
  const std::string body = slurp(d / "out" / "prep_records.csv");
  const std::string header = body.substr(0, body.find('\n'));
  CHECK(header ==
        "gt,sx,sy,sz,spin_length,var_sx,var_tan_min,var_tan_max,chi_min,squeezing,re_a,im_a,var_a1,var_a2,"
        "var_a_min,var_a_max,phi_min,n_mean,n_var,fano,phase_var,phase_ratio,purity_field,purity_atoms");
  CHECK(std::count(body.begin(), body.end(), '\n') == 4);
}

TEST_CASE("runs are deterministic and the manifest hashes match") {
  const fs::path d = scratch("determinism");
  const fs::path cfg = write_config(
      d, "atoms = 5\nalpha = 2\nprep_gt = 0.3\nprep_samples = 10\nrad_gt = 1\nrad_samples = 40\n"
         "field_points = 21\ntheta_points = 19\nphi_points = 37\n");
  REQUIRE(run_cli("tailor --config " + cfg.string() + " --out " + (d / "a").string()) == 0);
  REQUIRE(run_cli("tailor --threads 1 --config " + cfg.string() + " --out " + (d / "b").string()) == 0);
  const auto manifest = nlohmann::json::parse(slurp(d / "a" / "manifest.json"));
  CHECK(manifest["command"] == "tailor");
  CHECK(manifest["config"]["atoms"] == "5");
  REQUIRE(manifest["files"].size() == 4);
  for (const auto& f : manifest["files"]) {
    const std::string name = f["name"];
    const std::string a = slurp(d / "a" / name);
    CHECK(cli::sha256_hex(a) == f["sha256"]);
    CHECK(a == slurp(d / "b" / name));
  }
  CHECK(fs::exists(d / "a" / "spin_qgrid.csv"));
  CHECK(fs::exists(d / "a" / "field_qgrid.csv"));
  CHECK(fs::exists(d / "a" / "radiation_records.csv"));
}

TEST_CASE("json output carries the same table") {
  const fs::path d = scratch("json");
  const fs::path cfg = write_config(d, "nbar_list = 1\nphase_cut = 30\n");
  REQUIRE(run_cli("phase-min --format json --config " + cfg.string() + " --out " + d.string()) == 0);
  const auto j = nlohmann::json::parse(slurp(d / "phase_min.json"));
  CHECK(j["columns"][0] == "nbar");
  CHECK(j["rows"].size() == 1);
  CHECK(j["rows"][0][6].get<double>() < 1.0);
}
