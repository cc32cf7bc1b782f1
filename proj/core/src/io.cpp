#include "warpgraph/io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "warpgraph/errors.hpp"

namespace warpgraph {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  return os;
}

std::ifstream open_in(const std::string& path, bool binary = false) {
  std::ifstream is(path, binary ? std::ios::binary : std::ios::in);
  if (!is) throw IoError("cannot open '" + path + "' for reading");
  return is;
}

}  // namespace

void write_field_csv(const std::string& path, const ScalarField& field) {
  std::ofstream os = open_out(path);
  const FiberGrid& g = field.grid;
  os << (g.dim() > 1 ? "index,x,y,value\n" : "index,x,value\n");
  for (std::size_t id = 0; id < g.node_count(); ++id) {
    const auto p = g.position(id);
    os << id << ',' << fmt(p[0]);
    if (g.dim() > 1) os << ',' << fmt(p[1]);
    os << ',' << fmt(field[id]) << '\n';
  }
}

ScalarField read_field_csv(const std::string& path, const FiberGrid& grid) {
  std::ifstream is = open_in(path);
  std::string line;
  if (!std::getline(is, line)) throw IoError("empty field CSV " + path);
  ScalarField out(grid);
  std::size_t seen = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() < 3) throw IoError("malformed row in " + path);
    const std::size_t id = std::stoul(cells.front());
    if (id >= grid.node_count()) {
      throw IoError("node index " + cells.front() + " out of range in " + path);
    }
    out[id] = std::stod(cells.back());
    ++seen;
  }
  if (seen != grid.node_count()) {
    throw IoError("field CSV row count does not match the grid");
  }
  return out;
}

namespace {

#pragma pack(push, 1)
struct BinaryHeader {
  char magic[4];
  std::uint16_t dim;
  std::uint16_t topology;  // 0 periodic, 1 bounded
  std::uint32_t nx;
  std::uint32_t ny;
  double hx;
  double hy;
};
#pragma pack(pop)
static_assert(sizeof(BinaryHeader) == 32, "field header must be 32 bytes");

}  // namespace

void write_field_binary(const std::string& path, const ScalarField& field) {
  std::ofstream os = open_out(path, true);
  const FiberGrid& g = field.grid;
  BinaryHeader h{};
  std::memcpy(h.magic, "WGF1", 4);
  h.dim = static_cast<std::uint16_t>(g.dim());
  h.topology = g.topology() == Topology::Periodic ? 0 : 1;
  h.nx = static_cast<std::uint32_t>(g.count(0));
  h.ny = g.dim() > 1 ? static_cast<std::uint32_t>(g.count(1)) : 1;
  h.hx = g.spacing(0);
  h.hy = g.dim() > 1 ? g.spacing(1) : 0.0;
  os.write(reinterpret_cast<const char*>(&h), sizeof h);
  os.write(reinterpret_cast<const char*>(field.values.data()),
           static_cast<std::streamsize>(field.values.size() * sizeof(double)));
}

ScalarField read_field_binary(const std::string& path) {
  std::ifstream is = open_in(path, true);
  BinaryHeader h{};
  is.read(reinterpret_cast<char*>(&h), sizeof h);
  if (!is || std::memcmp(h.magic, "WGF1", 4) != 0) {
    throw IoError("bad magic in field file " + path);
  }
  if (h.dim < 1 || h.dim > 2) throw IoError("bad dimension in " + path);

  std::vector<GridAxis> axes;
  const bool periodic = h.topology == 0;
  auto extent = [&](std::uint32_t n, double sp) {
    return periodic ? sp * n : sp * (n - 1);
  };
  axes.push_back({0.0, extent(h.nx, h.hx), static_cast<int>(h.nx)});
  if (h.dim == 2) axes.push_back({0.0, extent(h.ny, h.hy), static_cast<int>(h.ny)});
  const FiberGrid grid = periodic ? FiberGrid::torus(axes)
                                  : FiberGrid::box(axes);
  ScalarField out(grid);
  is.read(reinterpret_cast<char*>(out.values.data()),
          static_cast<std::streamsize>(out.values.size() * sizeof(double)));
  if (!is) throw IoError("truncated field file " + path);
  return out;
}

void write_state_csv(const std::string& path, const GraphState& state) {
  std::ofstream os = open_out(path);
  const FiberGrid& g = state.grid;
  os << (g.dim() > 1 ? "x,y,u,w,cos_theta,mean_curvature\n"
                     : "x,u,w,cos_theta,mean_curvature\n");
  for (std::size_t id = 0; id < g.node_count(); ++id) {
    const auto p = g.position(id);
    os << fmt(p[0]);
    if (g.dim() > 1) os << ',' << fmt(p[1]);
    os << ',' << fmt(state.u[id]) << ',' << fmt(state.w[id]) << ','
       << fmt(state.cos_theta[id]) << ',' << fmt(state.mean_curvature[id])
       << '\n';
  }
}

std::pair<std::vector<double>, std::vector<double>> read_table_csv(
    const std::string& path) {
  std::ifstream is = open_in(path);
  std::vector<double> ts, fs;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    // tolerate a header row
    if (line.find_first_not_of("0123456789+-.eE, \t") != std::string::npos) {
      continue;
    }
    std::istringstream ls(line);
    std::string a, b;
    if (!std::getline(ls, a, ',') || !std::getline(ls, b)) {
      throw IoError("table rows need two columns (t, f): " + path);
    }
    ts.push_back(std::stod(a));
    fs.push_back(std::stod(b));
  }
  if (ts.size() < 4) throw IoError("table needs at least 4 rows: " + path);
  return {std::move(ts), std::move(fs)};
}

// ---------------------------------------------------------------------------

Json to_json(const SolverReport& rep) {
  Json j;
  j["method"] = rep.method;
  j["iterations"] = rep.iterations;
  j["residuals"] = rep.residual_history;
  j["converged"] = rep.converged;
  j["mean"] = rep.mean;
  j["std"] = rep.stddev;
  j["min"] = rep.min;
  j["max"] = rep.max;
  j["message"] = rep.message;
  j["timing"] = Json{{"wall_time_ms", rep.wall_time_ms}};
  return j;
}

namespace {

Json to_json(const EndpointIntegral& e) {
  Json j;
  j["finite"] = e.finite();
  j["verdict"] = e.verdict == IntegralVerdict::Finite      ? "finite"
                 : e.verdict == IntegralVerdict::Divergent ? "divergent"
                                                           : "indeterminate";
  if (e.finite()) {
    j["value"] = e.value;
    j["error_estimate"] = e.error_estimate;
  }
  return j;
}

}  // namespace

Json to_json(const WarpClassification& wc) {
  Json j;
  j["positive"] = wc.positive;
  j["inf_f"] = wc.inf_f;
  j["sup_f"] = wc.sup_f;
  j["monotone"] = to_string(wc.monotone);
  j["log_convex"] = wc.log_convex;
  j["non_locally_constant"] = wc.non_locally_constant;
  j["l1_at_a"] = to_json(wc.l1_at_a);
  j["l1_at_b"] = to_json(wc.l1_at_b);
  j["zeros_of_d1"] = wc.zeros_of_d1;
  return j;
}

Json to_json(const HypothesisReport& rep) {
  Json j;
  j["gradient_bound_c"] = rep.gradient_bound_c;
  j["angle_gap"] = rep.angle_gap;
  j["warping"] = to_json(rep.warping);
  j["applicable_theorems"] = rep.applicable_theorems;
  j["predicted_conclusion"] = rep.predicted_conclusion;
  j["notes"] = rep.notes;
  return j;
}

Json to_json(const IdentityReport& rep) {
  Json j;
  j["which"] = to_string(rep.which);
  j["levels"] = rep.levels;
  j["max_abs_gap"] = rep.max_abs_gap;
  j["observed_order"] = rep.observed_order;
  j["order_overall"] = rep.order_overall;
  j["exact"] = rep.exact;
  j["order_threshold"] = rep.order_threshold;
  j["pass"] = rep.pass;
  if (rep.which == IdentityKind::Arccot) {
    j["display_variant_gap"] = rep.display_variant_gap;
  }
  return j;
}

Json to_json(const QuasiIsometryCheck& qi) {
  Json j;
  j["lambda_min"] = qi.lambda_min;
  j["lambda_max"] = qi.lambda_max;
  j["qi_constant"] = qi.qi_constant;
  j["gradient_bound_c"] = qi.gradient_bound_c;
  j["pass"] = qi.pass;
  return j;
}

Json to_json(const SuperharmonicScan& scan) {
  Json j;
  j["max_laplacian"] = scan.max_laplacian;
  j["fraction_nonpositive"] = scan.fraction_nonpositive;
  j["tol"] = scan.tol;
  j["nodes"] = scan.nodes;
  return j;
}

Json to_json(const WitnessReport& rep) {
  Json j;
  j["max_analytic_laplacian"] = rep.max_analytic_laplacian;
  j["max_display_gap"] = rep.max_display_gap;
  j["max_discrete_laplacian"] = rep.max_discrete_laplacian;
  j["sign_discrepancy_flagged"] = rep.sign_discrepancy_flagged;
  j["note"] =
      "the displayed rational expression is positive and equals the "
      "Laplacian of minus the witness; the claimed '< 0' sign is recorded "
      "as a discrepancy, the positive witness 1/cosh^2 is superharmonic";
  j["samples"] = rep.samples;
  return j;
}

Json to_json(const AreaGrowth& ag) {
  Json j;
  j["center"] = ag.center;
  j["radii"] = ag.radii;
  j["areas"] = ag.areas;
  j["truncated"] = Json::array();
  for (bool t : ag.truncated) j["truncated"].push_back(t);
  return j;
}

Json report_envelope(const std::string& command, Json payload) {
  Json j;
  j["schema_version"] = kReportSchemaVersion;
  j["command"] = command;
  j["report"] = std::move(payload);
  return j;
}

void write_json(const std::string& path, const Json& j) {
  std::ofstream os = open_out(path);
  os << j.dump(2) << '\n';
}

namespace {

void erase_timing(Json& j) {
  if (j.is_object()) {
    j.erase("timing");
    for (auto& [k, v] : j.items()) erase_timing(v);
  } else if (j.is_array()) {
    for (auto& v : j) erase_timing(v);
  }
}

}  // namespace

std::string stable_serialization(Json j) {
  erase_timing(j);
  return j.dump(2);
}

}  // namespace warpgraph
