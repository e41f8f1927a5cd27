#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tomo/grid_io.hpp"
#include "tomo/quadrature.hpp"
#include "tomo/radon.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace tomo;
namespace fs = std::filesystem;

namespace {
fs::path workdir() {
  fs::path p = fs::temp_directory_path() / "phasetomo_io_test";
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}
}  // namespace

TEST_CASE("format_double round-trips doubles exactly") {
  for (double v : {0.0, 1.0 / 3.0, -2.718281828459045e-12, 6.02214076e23, 0.1,
                   -0.15915494309189535}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("tomogram grid files round trip bitwise") {
  DensityState st = DensityState::gibbs(ModeSpec{{1.0}, 1.0});
  TomogramGrid grid = make_tomogram_grid(st, TomogramGridSpec{32, 128});
  grid.state_descriptor = "test";
  fs::path p = workdir() / "grid.csv";
  write_tomogram_grid(p.string(), grid, {{"case", "roundtrip"}});
  TomogramGrid back = read_tomogram_grid(p.string());
  REQUIRE(back.modes.size() == 1);
  CHECK(back.modes[0].x_axis.count == 128);
  CHECK(back.modes[0].x_axis.min == grid.modes[0].x_axis.min);
  CHECK(back.modes[0].nodes == grid.modes[0].nodes);
  CHECK((back.modes[0].values - grid.modes[0].values).abs().maxCoeff() == 0.0);
  CHECK(back.max_normalization_error == grid.max_normalization_error);
  CHECK(back.state_descriptor == "test");

  // deterministic bytes
  fs::path p2 = workdir() / "grid2.csv";
  write_tomogram_grid(p2.string(), grid, {{"case", "roundtrip"}});
  CHECK(slurp(p) == slurp(p2));

  // sidecar metadata carries the timestamp, the body does not
  write_sidecar_meta(p.string(), {{"command", "test"}});
  CHECK(fs::exists(p.string() + ".meta.json"));
  CHECK(slurp(p).find("written_at") == std::string::npos);
}

TEST_CASE("multimode tomogram files carry a mode column") {
  DensityState st = DensityState::gibbs(ModeSpec{{1.0, 2.0}, 1.0});
  TomogramGrid grid = make_tomogram_grid(st, TomogramGridSpec{16, 64});
  fs::path p = workdir() / "grid_mm.csv";
  write_tomogram_grid(p.string(), grid, {});
  std::ifstream in(p);
  std::string header, cols;
  std::getline(in, header);
  std::getline(in, cols);
  CHECK(cols == "mode,X,mu,nu,W");
  TomogramGrid back = read_tomogram_grid(p.string());
  REQUIRE(back.modes.size() == 2);
  for (int k = 0; k < 2; ++k)
    CHECK((back.modes[k].values - grid.modes[k].values).abs().maxCoeff() == 0.0);
}

TEST_CASE("grid density files round trip and audit mass") {
  int n = 101;
  ArrayXd ax = uniform_axis(-6, 6, n);
  ArrayXXd vals(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      vals(i, j) = 0.5 / M_PI * std::exp(-0.5 * (ax[i] * ax[i] + ax[j] * ax[j]));
  GridDensity d(-6, 6, -6, 6, vals);
  fs::path p = workdir() / "density.csv";
  write_grid_density(p.string(), d, {{"case", "roundtrip"}});
  GridDensity back = read_grid_density(p.string());
  CHECK(back.xi_count() == n);
  CHECK((back.values() - d.values()).abs().maxCoeff() < 1e-15);

  // mass off by more than 1% is rejected at load
  ArrayXXd off = vals * 1.05;
  GridDensity bad(-6, 6, -6, 6, off);  // normalized in memory
  fs::path pb = workdir() / "density_bad.csv";
  {
    // hand-write a file with the raw (unnormalized) values
    std::ostringstream body;
    nlohmann::json header{{"type", "grid_density"},
                          {"columns", "xi,eta,rho"},
                          {"extents", {{"xi", {-6.0, 6.0}}, {"eta", {-6.0, 6.0}}}},
                          {"counts", {n, n}},
                          {"units", nlohmann::json::object()},
                          {"config", nlohmann::json::object()}};
    body << header.dump() << "\nxi,eta,rho\n";
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        body << format_double(ax[i]) << "," << format_double(ax[j]) << ","
             << format_double(off(i, j)) << "\n";
    atomic_write(pb.string(), body.str());
  }
  CHECK_THROWS_AS(read_grid_density(pb.string()), numerics_error);
}

TEST_CASE("malformed files are rejected") {
  fs::path p = workdir() / "broken.csv";
  atomic_write(p.string(), "{\"type\":\"grid_density\"}\nxi,eta,rho\n");
  CHECK_THROWS(read_tomogram_grid(p.string()));

  // degenerate (0, 0) node in a tomogram file
  nlohmann::json header{
      {"type", "tomogram_grid"},
      {"columns", "X,mu,nu,W"},
      {"state", ""},
      {"quad_level", "standard"},
      {"modes", {{{"x_axis", {{"min", -1.0}, {"max", 1.0}, {"count", 2}}}, {"nodes", 1}}}},
      {"config", nlohmann::json::object()}};
  std::string body = header.dump() + "\nX,mu,nu,W\n-1,0,0,0.5\n1,0,0,0.5\n";
  atomic_write(p.string(), body);
  CHECK_THROWS_AS(read_tomogram_grid(p.string()), std::invalid_argument);
}
