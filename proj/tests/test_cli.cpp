#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "config.hpp"
#include "report.hpp"
#include "sgdlab/core.hpp"

using namespace sgdlab;
using namespace sgdlab::cli;
namespace fs = std::filesystem;

namespace {

const std::string kConfigs = std::string(SGDLAB_SOURCE_DIR) + "/configs/";

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("sgdlab_test_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "run.cfg";
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Cell of a CSV column by header name, row index counted after the header.
std::string csv_cell(const fs::path& p, const std::string& column, int row) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  auto split = [](const std::string& l) {
    std::vector<std::string> out;
    std::stringstream ss(l);
    std::string c;
    while (std::getline(ss, c, ',')) out.push_back(c);
    return out;
  };
  const auto header = split(line);
  const auto col = std::find(header.begin(), header.end(), column) - header.begin();
  for (int r = 0; r <= row; ++r) std::getline(in, line);
  return split(line).at(static_cast<size_t>(col));
}

int run(const std::string& cmd, const std::string& config, const fs::path& out) {
  RunOptions o;
  o.config_path = config;
  o.out_dir = out.string();
  return run_command(cmd, o);
}

const char* kSmall = R"(name = small
seed = 3
[landscape]
kind = bumps
form = density
minima = [-1 1]
weights = [0.021 0.1]
sigmas = [0.1 0.5]
c = 0.001
[shift]
value = 0.1
[diffusion]
kind = constant
d = 1.0
[domain]
lo = -4
hi = 4
[temperatures]
values = 0.001, 0.01, 0.1
[quadrature]
grid_n = 2049
)";

}  // namespace

TEST_CASE("config parsing") {
  const Config c = Config::parse(
      "seed = 12  # trailing comment\n"
      "# full-line comment\n"
      "[landscape]\n"
      "minima = [-1 1]\n"
      "weights = 0.5, 0.25\n"
      "kind = bumps\n"
      "[sgd]\n"
      "steps = 1000\n",
      "inline");
  CHECK(c.get_u64("", "seed") == 12);
  CHECK(c.get_list("landscape", "minima") == std::vector<double>{-1, 1});
  CHECK(c.get_list("landscape", "weights") == std::vector<double>{0.5, 0.25});
  CHECK(c.get_string("landscape", "kind") == "bumps");
  CHECK(c.get_int("sgd", "steps") == 1000);
  CHECK(c.get_double("sgd", "learning_rate", 0.5) == 0.5);
  CHECK(c.has_section("sgd"));
  CHECK_FALSE(c.has("sgd", "chains"));
}

TEST_CASE("config errors name the line") {
  auto message = [](const std::string& text) {
    try {
      Config::parse(text, "bad.cfg");
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("seed = 1\n[landscape]\nbogus = 3\n").find("bad.cfg:3") != std::string::npos);
  CHECK(message("seed = 1\n[nowhere]\n").find("bad.cfg:2") != std::string::npos);
  CHECK(message("seed = 1\n[sgd]\nsteps = 1\nsteps = 2\n").find("bad.cfg:4") != std::string::npos);
  CHECK_FALSE(message("[sgd]\nsteps = 1\n").empty());
  CHECK_FALSE(message("seed = -4\n").empty());
  CHECK_FALSE(message("seed = 1\nno equals sign\n").empty());
  const Config c = Config::parse("seed = 1\n[sgd]\nsteps = ten\n");
  CHECK_THROWS_AS(c.get_int("sgd", "steps"), ConfigError);
}

TEST_CASE("number formatting round-trips") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) CHECK(std::stod(fmt(x)) == x);
  CHECK(fmt(0.5) == "0.5");
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch("exit");
  CHECK(run("sweep", (dir / "missing.cfg").string(), dir / "o") == kConfigError);
  CHECK(run("sweep", write_config(dir, "seed = 1\n[landscape]\nkind = bumps\nwidth = 2\n"), dir / "o") ==
        kConfigError);
  std::string empty_grid = kSmall;
  empty_grid.replace(empty_grid.find("values = 0.001, 0.01, 0.1"), 25, "values = []");
  CHECK(run("sweep", write_config(dir, empty_grid), dir / "o") == kConfigError);
  CHECK(run("teleport", write_config(dir, kSmall), dir / "o") == kConfigError);

  // Shift larger than half the basin spacing: no test minimum pairs up.
  std::string far = kSmall;
  far.replace(far.find("value = 0.1"), 11, "value = 1.5");
  CHECK(run("probe", write_config(dir, far), dir / "o") == kNumericError);
}

TEST_CASE("validate passes on the benchmark and flags a rotation field") {
  const fs::path dir = scratch("validate");
  CHECK(run("validate", kConfigs + "two_basin_left.cfg", dir / "ok") == kOk);
  CHECK(csv_cell(dir / "ok" / "validate.csv", "status", 0) == "PASS");
  std::string rot = kSmall;
  rot += "[validate]\ninject_rotation = true\n";
  CHECK(run("validate", write_config(dir, rot), dir / "rot") == kCheckFailed);
}

TEST_CASE("sweep writes the documented tables") {
  const fs::path dir = scratch("sweep");
  REQUIRE(run("sweep", write_config(dir, kSmall), dir / "o") == kOk);
  const fs::path o = dir / "o";
  for (const char* f : {"sweep_all.csv", "sweep_quadrature.csv", "sweep_laplace.csv", "breakdown.csv",
                        "landscape.csv", "loss_vs_T.svg", "basin_prob_vs_T.svg", "density.svg"}) {
    CHECK(fs::exists(o / f));
  }
  std::ifstream in(o / "sweep_quadrature.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "T,method,E_train,E_test,p_basin_0,p_basin_1,shift_curv_0,shift_curv_1");
  CHECK(csv_cell(o / "sweep_quadrature.csv", "T", 2) == "0.1");
  std::ifstream dens(o / "density_T0.01.csv");
  std::getline(dens, header);
  CHECK(header == "theta,rho,v");
  std::ifstream mix(o / "mixture_T0.01.csv");
  std::getline(mix, header);
  CHECK(header == "k,mu,b,sigma,w,v_k");
}

TEST_CASE("probe") {
  const fs::path dir = scratch("probe");
  SUBCASE("quadratic pair is exact") {
    REQUIRE(run("probe", kConfigs + "quadratic_probe.cfg", dir / "q") == kOk);
    CHECK(std::abs(std::stod(csv_cell(dir / "q" / "probe.csv", "gap", 0))) <= 1e-12);
  }
  SUBCASE("zero shift predicts the test minimum") {
    std::string zero = kSmall;
    zero.replace(zero.find("value = 0.1"), 11, "value = 0.0");
    REQUIRE(run("probe", write_config(dir, zero), dir / "z") == kOk);
    for (int k : {0, 1}) CHECK(std::abs(std::stod(csv_cell(dir / "z" / "probe.csv", "gap", k))) <= 1e-10);
  }
  SUBCASE("two-basin pair") {
    REQUIRE(run("probe", kConfigs + "two_basin_left.cfg", dir / "t") == kOk);
    for (int k : {0, 1}) {
      CAPTURE(k);
      CHECK(std::stod(csv_cell(dir / "t" / "probe.csv", "rel_gap", k)) <= 0.1);
    }
  }
}

TEST_CASE("reruns are byte-identical") {
  const fs::path dir = scratch("determinism");
  const std::string cfg = write_config(dir, std::string(kSmall) + "[sgd]\nsteps = 20000\nchains = 2\n");
  RunOptions o;
  o.config_path = cfg;
  o.methods = "quadrature,laplace,sgd_mc";
  for (const char* run_dir : {"a", "b"}) {
    o.out_dir = (dir / run_dir).string();
    REQUIRE(run_command("sweep", o) == kOk);
  }
  int files = 0;
  for (const auto& f : fs::directory_iterator(dir / "a")) {
    ++files;
    CAPTURE(f.path().filename().string());
    CHECK(slurp(f.path()) == slurp(dir / "b" / f.path().filename()));
  }
  CHECK(files >= 8);

  o.seed = "4";
  o.out_dir = (dir / "c").string();
  REQUIRE(run_command("sweep", o) == kOk);
  CHECK(slurp(dir / "a" / "sweep_sgd_mc.csv") != slurp(dir / "c" / "sweep_sgd_mc.csv"));
}
