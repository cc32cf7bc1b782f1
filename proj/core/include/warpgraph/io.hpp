#pragma once

#include <json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "warpgraph/analysis.hpp"
#include "warpgraph/geometry.hpp"
#include "warpgraph/grid.hpp"
#include "warpgraph/solver.hpp"

namespace warpgraph {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchemaVersion = "1";

// Field CSV: "index,x[,y],value", row-major, axis x fastest.
void write_field_csv(const std::string& path, const ScalarField& field);
ScalarField read_field_csv(const std::string& path, const FiberGrid& grid);

// Raw binary, 32-byte header: magic "WGF1", u16 dim, u16 topology, u32
// counts (ny == 1 for 1-D), f64 spacings; then doubles row-major. Origins
// and the fiber metric are not stored; readers get default values there.
void write_field_binary(const std::string& path, const ScalarField& field);
ScalarField read_field_binary(const std::string& path);

// Graph state export: "x[,y],u,w,cos_theta,mean_curvature".
void write_state_csv(const std::string& path, const GraphState& state);

// Two-column (t, f) table for tabulated warpings.
std::pair<std::vector<double>, std::vector<double>> read_table_csv(
    const std::string& path);

// ---------------------------------------------------------------------------
// JSON report serialization (stable keys; volatile timing kept under the
// single "timing" key so reports can be compared byte-for-byte without it).

Json to_json(const SolverReport& rep);
Json to_json(const WarpClassification& wc);
Json to_json(const HypothesisReport& rep);
Json to_json(const IdentityReport& rep);
Json to_json(const QuasiIsometryCheck& qi);
Json to_json(const SuperharmonicScan& scan);
Json to_json(const WitnessReport& rep);
Json to_json(const AreaGrowth& ag);

/// Wrap a payload with {"schema_version": ..., "command": ...}.
Json report_envelope(const std::string& command, Json payload);

void write_json(const std::string& path, const Json& j);

/// The report with its "timing" subtrees erased, serialized; two runs of the
/// same command and seed must agree byte-for-byte on this.
std::string stable_serialization(Json j);

}  // namespace warpgraph
