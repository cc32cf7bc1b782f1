#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "warpgraph/errors.hpp"
#include "warpgraph/io.hpp"

using namespace warpgraph;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

ScalarField random_field(const FiberGrid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-5.0, 5.0);
  ScalarField out(g);
  for (double& v : out.values) v = d(rng);
  return out;
}

}  // namespace

TEST_CASE("field CSV round trip preserves every double") {
  const FiberGrid g =
      FiberGrid::torus({GridAxis{0.0, 2.0, 8}, GridAxis{-1.0, 1.0, 6}});
  const ScalarField f = random_field(g, 5);
  const std::string path = temp_path("wg_field.csv");
  write_field_csv(path, f);
  const ScalarField back = read_field_csv(path, g);
  for (std::size_t id = 0; id < g.node_count(); ++id) {
    CHECK(back[id] == f[id]);  // %.17g is lossless for doubles
  }
  std::remove(path.c_str());
}

TEST_CASE("binary field round trip: header and payload") {
  const FiberGrid g =
      FiberGrid::torus({GridAxis{0.0, 1.0, 12}, GridAxis{0.0, 3.0, 10}});
  const ScalarField f = random_field(g, 9);
  const std::string path = temp_path("wg_field.wgf");
  write_field_binary(path, f);
  const ScalarField back = read_field_binary(path);
  CHECK(back.grid.dim() == 2);
  CHECK(back.grid.count(0) == 12);
  CHECK(back.grid.count(1) == 10);
  CHECK(back.grid.spacing(0) == f.grid.spacing(0));
  CHECK(back.grid.spacing(1) == f.grid.spacing(1));
  CHECK(back.grid.topology() == Topology::Periodic);
  for (std::size_t id = 0; id < g.node_count(); ++id) {
    CHECK(back[id] == f[id]);
  }
  // 32-byte header then raw doubles
  CHECK(std::filesystem::file_size(path) ==
        32 + sizeof(double) * g.node_count());
  std::remove(path.c_str());
}

TEST_CASE("bad magic is rejected") {
  const std::string path = temp_path("wg_bad.wgf");
  std::ofstream os(path, std::ios::binary);
  os << "NOTAFIELDFILE___________________payload";
  os.close();
  CHECK_THROWS_AS(read_field_binary(path), IoError);
  std::remove(path.c_str());
}

TEST_CASE("state CSV carries the documented columns") {
  const FiberGrid g =
      FiberGrid::torus({GridAxis{0.0, 1.0, 8}, GridAxis{0.0, 1.0, 8}});
  ScalarField u(g);
  std::fill(u.values.begin(), u.values.end(), 0.25);
  const GraphState st = assemble_state(g, presets::cosh_t(), u);
  const std::string path = temp_path("wg_state.csv");
  write_state_csv(path, st);
  std::ifstream is(path);
  std::string header;
  std::getline(is, header);
  CHECK(header == "x,y,u,w,cos_theta,mean_curvature");
  std::size_t rows = 0;
  std::string line;
  while (std::getline(is, line)) rows += !line.empty();
  CHECK(rows == g.node_count());
  std::remove(path.c_str());
}

TEST_CASE("warp table CSV feeds the tabulated constructor") {
  const std::string path = temp_path("wg_table.csv");
  {
    std::ofstream os(path);
    os << "t,f\n";
    for (int i = 0; i <= 40; ++i) {
      const double t = -2.0 + 4.0 * i / 40.0;
      os << t << "," << std::cosh(t) << "\n";
    }
  }
  const auto [ts, fs] = read_table_csv(path);
  REQUIRE(ts.size() == 41);
  const WarpingFunction w = tabulated_warping(ts, fs);
  CHECK(w.value(0.5) == doctest::Approx(std::cosh(0.5)).epsilon(1e-4));
  std::remove(path.c_str());
}

TEST_CASE("stable serialization strips only the timing subtree") {
  SolverReport a, b;
  a.method = b.method = "newton_damped";
  a.iterations = b.iterations = 4;
  a.residual_history = b.residual_history = {1.0, 1e-9};
  a.converged = b.converged = true;
  a.wall_time_ms = 12.5;
  b.wall_time_ms = 99.0;
  const Json ja = report_envelope("solve", to_json(a));
  const Json jb = report_envelope("solve", to_json(b));
  CHECK(ja.dump() != jb.dump());
  CHECK(stable_serialization(ja) == stable_serialization(jb));
}
