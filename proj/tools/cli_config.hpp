#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "warpgraph/grid.hpp"
#include "warpgraph/solver.hpp"
#include "warpgraph/warp.hpp"

namespace warplab {

/// Config/flag validation failure; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridSpec {
  int dim = 2;
  std::string topology = "torus";  // torus | box
  std::vector<double> extents{1.0, 1.0};
  std::vector<int> resolutions{64, 64};
  std::vector<double> origins{0.0, 0.0};
  std::vector<double> metric{1.0, 1.0};
};

struct WarpSpec {
  std::string preset = "cosh";
  std::string table;  // CSV path; overrides preset when set
  std::optional<double> domain_lo;
  std::optional<double> domain_hi;
};

struct InitSpec {
  std::string expr = "constant:0";
  std::string file;  // field CSV; overrides expr when set
};

struct OutputSpec {
  std::string dir;  // default: WARPLAB_OUTDIR or "."
  bool binary_fields = false;
};

struct RunConfig {
  std::string command;
  GridSpec grid;
  WarpSpec warp;
  InitSpec init;
  warpgraph::SolverConfig solver;
  OutputSpec output;

  // command-specific knobs
  std::vector<std::string> which;          // identities / counterexamples
  std::vector<int> levels{32, 64, 128};    // identity refinement ladder
  double amp = 0.1;                        // identity-suite field amplitude
  std::vector<double> radii{0.5, 1.0, 1.5};
  int snapshot_stride = 50;
  int samples = 2001;                      // classify-warp sampling
};

/// Parse "torus2:64", "torus2:64x48", "box1:129" into the grid spec.
void apply_grid_shorthand(GridSpec& grid, const std::string& shorthand);

/// Load an INI-style config file with sections [grid], [warp], [solver],
/// [init], [output]. Unknown sections or keys are rejected.
void load_config_file(RunConfig& cfg, const std::string& path);

/// Full validation (resolutions >= 8, referenced files exist, known
/// presets/expressions). Throws ConfigError.
void validate(const RunConfig& cfg);

warpgraph::FiberGrid make_grid(const GridSpec& spec);
warpgraph::WarpingFunction make_warping(const WarpSpec& spec);
warpgraph::ScalarField make_initial_field(const InitSpec& spec,
                                          const warpgraph::FiberGrid& grid,
                                          std::uint64_t seed);

std::vector<std::string> split(const std::string& s, char sep);

}  // namespace warplab
