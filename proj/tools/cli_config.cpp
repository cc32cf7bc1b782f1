#include "cli_config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "warpgraph/errors.hpp"
#include "warpgraph/io.hpp"

namespace warplab {

using warpgraph::FiberGrid;
using warpgraph::GridAxis;
using warpgraph::ScalarField;
using warpgraph::WarpingFunction;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

namespace {

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("expected a number for " + what + ", got '" + s + "'");
  }
}

int to_int(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("expected an integer for " + what + ", got '" + s + "'");
  }
}

std::vector<double> to_doubles(const std::string& s, const std::string& what) {
  std::vector<double> out;
  for (const std::string& c : split(s, ',')) out.push_back(to_double(c, what));
  return out;
}

std::vector<int> to_ints(const std::string& s, const std::string& what) {
  std::vector<int> out;
  for (const std::string& c : split(s, ',')) out.push_back(to_int(c, what));
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

}  // namespace

void apply_grid_shorthand(GridSpec& grid, const std::string& shorthand) {
  // torus2:64, torus2:64x48, box1:129
  const auto colon = shorthand.find(':');
  if (colon == std::string::npos) {
    throw ConfigError("grid shorthand must look like 'torus2:64' or 'box1:129'");
  }
  const std::string head = shorthand.substr(0, colon);
  const std::string tail = shorthand.substr(colon + 1);
  if (head.size() < 2) throw ConfigError("bad grid shorthand '" + shorthand + "'");
  const char dim_ch = head.back();
  const std::string topo = head.substr(0, head.size() - 1);
  if (topo != "torus" && topo != "box") {
    throw ConfigError("grid topology must be 'torus' or 'box', got '" + topo + "'");
  }
  if (dim_ch != '1' && dim_ch != '2') {
    throw ConfigError("grid dimension must be 1 or 2 in '" + shorthand + "'");
  }
  grid.topology = topo;
  grid.dim = dim_ch - '0';
  std::vector<int> res;
  for (const std::string& c : split(tail, 'x')) res.push_back(to_int(c, "grid resolution"));
  if (res.size() == 1 && grid.dim == 2) res.push_back(res[0]);
  if (static_cast<int>(res.size()) != grid.dim) {
    throw ConfigError("grid shorthand resolution count does not match dimension");
  }
  grid.resolutions = res;
  grid.extents.resize(grid.dim, grid.extents.empty() ? 1.0 : grid.extents[0]);
  grid.origins.resize(grid.dim, 0.0);
  grid.metric.resize(grid.dim, 1.0);
}

void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file '" + path + "'");

  static const std::map<std::string, std::set<std::string>> known = {
      {"grid", {"dim", "topology", "extent", "resolution", "origin", "metric"}},
      {"warp", {"preset", "table", "domain"}},
      {"init", {"expr", "file"}},
      {"solver",
       {"method", "tol", "max_iter", "damping", "backtrack", "dt_safety",
        "seed"}},
      {"output", {"dir", "binary"}},
  };

  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("malformed section header at line " +
                          std::to_string(lineno));
      }
      section = trim(line.substr(1, line.size() - 2));
      if (!known.count(section)) {
        throw ConfigError("unknown config section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected key = value at line " + std::to_string(lineno));
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) {
      throw ConfigError("key '" + key + "' outside any section");
    }
    if (!known.at(section).count(key)) {
      throw ConfigError("unknown key '" + key + "' in section [" + section + "]");
    }

    if (section == "grid") {
      if (key == "dim") cfg.grid.dim = to_int(value, "grid.dim");
      else if (key == "topology") cfg.grid.topology = value;
      else if (key == "extent") cfg.grid.extents = to_doubles(value, "grid.extent");
      else if (key == "resolution") cfg.grid.resolutions = to_ints(value, "grid.resolution");
      else if (key == "origin") cfg.grid.origins = to_doubles(value, "grid.origin");
      else if (key == "metric") cfg.grid.metric = to_doubles(value, "grid.metric");
    } else if (section == "warp") {
      if (key == "preset") cfg.warp.preset = value;
      else if (key == "table") cfg.warp.table = value;
      else if (key == "domain") {
        const auto v = to_doubles(value, "warp.domain");
        if (v.size() != 2) throw ConfigError("warp.domain needs two numbers");
        cfg.warp.domain_lo = v[0];
        cfg.warp.domain_hi = v[1];
      }
    } else if (section == "init") {
      if (key == "expr") cfg.init.expr = value;
      else cfg.init.file = value;
    } else if (section == "solver") {
      if (key == "method") cfg.solver.method = warpgraph::method_from_string(value);
      else if (key == "tol") cfg.solver.tol_residual = to_double(value, "solver.tol");
      else if (key == "max_iter") cfg.solver.max_iter = to_int(value, "solver.max_iter");
      else if (key == "damping") cfg.solver.damping = to_double(value, "solver.damping");
      else if (key == "backtrack") cfg.solver.backtrack = to_double(value, "solver.backtrack");
      else if (key == "dt_safety") cfg.solver.flow_dt_safety = to_double(value, "solver.dt_safety");
      else if (key == "seed") cfg.solver.seed = static_cast<std::uint64_t>(
          std::stoull(value));
    } else if (section == "output") {
      if (key == "dir") cfg.output.dir = value;
      else cfg.output.binary_fields = (value == "true" || value == "1");
    }
  }
}

void validate(const RunConfig& cfg) {
  const GridSpec& g = cfg.grid;
  if (g.dim < 1 || g.dim > 2) throw ConfigError("grid dim must be 1 or 2");
  if (g.topology != "torus" && g.topology != "box") {
    throw ConfigError("grid topology must be 'torus' or 'box'");
  }
  if (static_cast<int>(g.resolutions.size()) < g.dim) {
    throw ConfigError("grid resolution needs one entry per axis");
  }
  for (int i = 0; i < g.dim; ++i) {
    if (g.resolutions[i] < 8) {
      throw ConfigError("grid resolutions must be >= 8 per axis");
    }
    if (static_cast<int>(g.extents.size()) > i && !(g.extents[i] > 0.0)) {
      throw ConfigError("grid extents must be positive");
    }
  }
  if (!cfg.warp.table.empty() && !std::filesystem::exists(cfg.warp.table)) {
    throw ConfigError("warp table file '" + cfg.warp.table + "' does not exist");
  }
  if (cfg.warp.table.empty()) {
    const auto names = warpgraph::presets::names();
    if (std::find(names.begin(), names.end(), cfg.warp.preset) == names.end()) {
      throw ConfigError("unknown warp preset '" + cfg.warp.preset + "'");
    }
  }
  if (!cfg.init.file.empty() && !std::filesystem::exists(cfg.init.file)) {
    throw ConfigError("init field file '" + cfg.init.file + "' does not exist");
  }
  if (!(cfg.solver.tol_residual > 0.0)) throw ConfigError("solver tol must be > 0");
  if (cfg.solver.max_iter < 1) throw ConfigError("solver max_iter must be >= 1");
  if (!(cfg.solver.damping > 0.0 && cfg.solver.damping <= 1.0)) {
    throw ConfigError("solver damping must be in (0, 1]");
  }
}

FiberGrid make_grid(const GridSpec& spec) {
  std::vector<GridAxis> axes;
  for (int i = 0; i < spec.dim; ++i) {
    GridAxis a;
    a.origin = static_cast<int>(spec.origins.size()) > i ? spec.origins[i] : 0.0;
    a.extent = static_cast<int>(spec.extents.size()) > i ? spec.extents[i] : 1.0;
    a.count = spec.resolutions[i];
    axes.push_back(a);
  }
  std::array<double, 2> metric{1.0, 1.0};
  for (int i = 0; i < spec.dim && i < static_cast<int>(spec.metric.size()); ++i) {
    metric[i] = spec.metric[i];
  }
  return spec.topology == "torus" ? FiberGrid::torus(axes, metric)
                                  : FiberGrid::box(axes,
                                                   warpgraph::BoundaryPolicy::Dirichlet,
                                                   metric);
}

WarpingFunction make_warping(const WarpSpec& spec) {
  std::optional<warpgraph::IntervalDomain> dom;
  if (spec.domain_lo || spec.domain_hi) {
    warpgraph::IntervalDomain d;
    if (spec.domain_lo) d.lower = *spec.domain_lo;
    if (spec.domain_hi) d.upper = *spec.domain_hi;
    dom = d;
  }
  if (!spec.table.empty()) {
    auto [ts, fs] = warpgraph::read_table_csv(spec.table);
    WarpingFunction w = warpgraph::tabulated_warping(std::move(ts), std::move(fs));
    return dom ? w.restricted(*dom) : w;
  }
  return warpgraph::presets::by_name(spec.preset, dom);
}

ScalarField make_initial_field(const InitSpec& spec, const FiberGrid& grid,
                               std::uint64_t seed) {
  if (!spec.file.empty()) {
    return warpgraph::read_field_csv(spec.file, grid);
  }
  const auto parts = split(spec.expr, ':');
  const std::string name = parts.front();
  std::vector<double> args;
  if (parts.size() > 1) {
    for (const std::string& c : split(parts[1], ',')) {
      args.push_back(to_double(c, "init expression argument"));
    }
  }
  auto arg = [&](std::size_t i, double dflt) {
    return args.size() > i ? args[i] : dflt;
  };
  constexpr double two_pi = 2.0 * std::numbers::pi;

  if (name == "constant") {
    ScalarField u(grid);
    std::fill(u.values.begin(), u.values.end(), arg(0, 0.0));
    return u;
  }
  if (name == "affine") {
    const double ax = arg(0, 1.0), ay = arg(1, 0.0), c = arg(2, 0.0);
    return ScalarField::sample(grid, [=](double x, double y) {
      return ax * x + ay * y + c;
    });
  }
  if (name == "sincos") {
    const double a = arg(0, 0.1);
    const double lx = grid.extent(0);
    const double ly = grid.dim() > 1 ? grid.extent(1) : 1.0;
    const double ox = grid.origin(0);
    const double oy = grid.dim() > 1 ? grid.origin(1) : 0.0;
    return ScalarField::sample(grid, [=](double x, double y) {
      return a * std::sin(two_pi * (x - ox) / lx) *
             std::cos(two_pi * (y - oy) / ly);
    });
  }
  if (name == "sin") {
    const double a = arg(0, 0.1);
    const double lx = grid.extent(0);
    const double ox = grid.origin(0);
    return ScalarField::sample(grid, [=](double x, double) {
      return a * std::sin(two_pi * (x - ox) / lx);
    });
  }
  if (name == "tanh") {
    const double s = arg(0, 1.0);
    return ScalarField::sample(grid, [=](double x, double) {
      return std::tanh(s * x);
    });
  }
  if (name == "fourier") {
    const double a = arg(0, 0.1);
    ScalarField u = warpgraph::seeded_fourier_field(grid, seed);
    for (double& v : u.values) v *= a;
    return u;
  }
  throw ConfigError("unknown init expression '" + name +
                    "' (catalogue: constant, affine, sincos, sin, tanh, fourier)");
}

}  // namespace warplab
