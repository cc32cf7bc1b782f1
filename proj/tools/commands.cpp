#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>

#include "warpgraph/analysis.hpp"
#include "warpgraph/errors.hpp"
#include "warpgraph/geometry.hpp"
#include "warpgraph/io.hpp"
#include "warpgraph/solver.hpp"
#include "warpgraph/warped_plane.hpp"

namespace warplab {

namespace fs = std::filesystem;
using warpgraph::FiberGrid;
using warpgraph::GridAxis;
using warpgraph::Json;
using warpgraph::ScalarField;
using warpgraph::WarpingFunction;

namespace {

std::string out_path(const RunConfig& cfg, const std::string& name) {
  fs::path dir = cfg.output.dir.empty() ? fs::path(".") : fs::path(cfg.output.dir);
  fs::create_directories(dir);
  return (dir / name).string();
}

void emit(const RunConfig& cfg, const std::string& name, const Json& j) {
  const std::string path = out_path(cfg, name);
  warpgraph::write_json(path, j);
  std::cout << "wrote " << path << "\n";
}

int cmd_classify_warp(const RunConfig& cfg) {
  const WarpingFunction f = make_warping(cfg.warp);
  warpgraph::SampleConfig sc;
  sc.samples = cfg.samples;
  const warpgraph::WarpClassification wc = warpgraph::classify_warping(f, sc);
  Json payload = warpgraph::to_json(wc);
  payload["warping"] = f.name();
  emit(cfg, "classify_warp_report.json",
       warpgraph::report_envelope("classify-warp", payload));
  return kOk;
}

int cmd_verify_identities(const RunConfig& cfg) {
  std::vector<std::string> which = cfg.which;
  if (which.empty() || (which.size() == 1 && which[0] == "all")) {
    which = {"angle", "dtau", "dftau", "conf_tau", "conf_ftau", "F_low", "lcos"};
  }

  std::vector<FiberGrid> levels;
  for (int n : cfg.levels) {
    levels.push_back(FiberGrid::torus({GridAxis{0.0, 1.0, n},
                                       GridAxis{0.0, 1.0, n}}));
  }
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double amp = cfg.amp;
  auto u_fn = [amp, two_pi](double x, double y) {
    return amp * std::sin(two_pi * x) * std::cos(two_pi * y);
  };

  Json items = Json::array();
  bool all_pass = true;
  for (const std::string& name : which) {
    if (name == "angle") {
      // pointwise identity |grad tau|^2 = 1 - cos^2(theta)
      Json j;
      j["which"] = "angle";
      Json gaps = Json::array();
      bool pass = true;
      const WarpingFunction f = make_warping(cfg.warp);
      for (const FiberGrid& grid : levels) {
        const ScalarField u = ScalarField::sample(grid, u_fn);
        const auto st = warpgraph::assemble_state(grid, f, u);
        const ScalarField q = warpgraph::grad_norm_sq(
            warpgraph::MetricKind::graph(st.u, st.warp), st.u);
        double gap = 0.0;
        for (std::size_t id = 0; id < grid.node_count(); ++id) {
          const double c = st.cos_theta[id];
          gap = std::max(gap, std::abs(q[id] + c * c - 1.0));
        }
        gaps.push_back(gap);
        pass = pass && gap <= 1e-12;
      }
      j["max_abs_gap"] = gaps;
      j["exact"] = pass;
      j["pass"] = pass;
      items.push_back(j);
      all_pass = all_pass && pass;
      continue;
    }
    const warpgraph::IdentityKind kind = warpgraph::identity_from_string(name);
    // lcos is a product-case identity; it runs with the constant warping
    const WarpingFunction f = (kind == warpgraph::IdentityKind::LCos)
                                  ? warpgraph::presets::constant(1.0)
                                  : make_warping(cfg.warp);
    const warpgraph::IdentityReport rep =
        warpgraph::identity_report(kind, f, u_fn, levels);
    items.push_back(warpgraph::to_json(rep));
    all_pass = all_pass && rep.pass;
  }

  Json payload;
  payload["warping"] = cfg.warp.preset;
  payload["amp"] = cfg.amp;
  payload["identities"] = items;
  payload["pass"] = all_pass;
  emit(cfg, "verify_identities_report.json",
       warpgraph::report_envelope("verify-identities", payload));
  return all_pass ? kOk : kCheckFailure;
}

int cmd_verify_counterexamples(const RunConfig& cfg) {
  std::vector<std::string> which = cfg.which;
  if (which.empty() || (which.size() == 1 && which[0] == "all")) {
    which = {"a", "b", "witness", "ode", "transform"};
  }

  Json items = Json::array();
  bool all_pass = true;
  const auto xs = warpgraph::uniform_samples(-10.0, 10.0, 10001);

  for (const std::string& name : which) {
    Json j;
    j["which"] = name;
    bool pass = false;
    if (name == "a") {
      const auto f = warpgraph::presets::sqrt1p_cosh4();
      const auto scan = warpgraph::first_integral(f, warpgraph::curves::tanh_x(), xs);
      double dev_from_one = 0.0;
      for (double c : scan.c_values) {
        dev_from_one = std::max(dev_from_one, std::abs(c - 1.0));
      }
      j["first_integral_median"] = scan.median_c;
      j["max_deviation_from_1"] = dev_from_one;
      pass = dev_from_one < 1e-10;
    } else if (name == "b") {
      const auto h = warpgraph::presets::quartic_rational();
      const auto scan =
          warpgraph::first_integral(h, warpgraph::curves::x_plus_arctan(), xs);
      double dev_from_one = 0.0;
      for (double c : scan.c_values) {
        dev_from_one = std::max(dev_from_one, std::abs(c - 1.0));
      }
      double hmin = 1e300, hmax = 0.0;
      for (double x : xs) {
        hmin = std::min(hmin, h.value(x));
        hmax = std::max(hmax, h.value(x));
      }
      const double lo_bound = std::sqrt(5.0) / 2.0;
      const double hi_bound = std::sqrt(2.0);
      j["first_integral_median"] = scan.median_c;
      j["max_deviation_from_1"] = dev_from_one;
      j["inf_h"] = hmin;
      j["sup_h"] = hmax;
      pass = dev_from_one < 1e-10 && hmin >= lo_bound - 1e-12 &&
             hmax < hi_bound - 1e-12;
    } else if (name == "witness") {
      const auto rep = warpgraph::nonparabolicity_witness_report(
          warpgraph::presets::sqrt1p_cosh4(), -5.0, 5.0);
      j = warpgraph::to_json(rep);
      j["which"] = name;
      pass = rep.max_analytic_laplacian <= -1e-12 && rep.max_display_gap <= 1e-8;
    } else if (name == "ode") {
      const auto f = warpgraph::presets::sqrt1p_cosh4();
      const auto sol = warpgraph::ode_solve(f, 1.0, 0.0, 0.0, -5.0, 5.0);
      double err = 0.0;
      for (std::size_t i = 0; i < sol.xs.size(); ++i) {
        err = std::max(err, std::abs(sol.us[i] - std::tanh(sol.xs[i])));
      }
      const auto rescan = warpgraph::first_integral(
          f,
          warpgraph::curves::tanh_x(),
          warpgraph::uniform_samples(-5.0, 5.0, 1001));
      j["max_error_vs_tanh"] = err;
      j["hit_singularity"] = sol.hit_singularity;
      j["first_integral_roundtrip_dev"] = rescan.max_deviation;
      pass = err < 1e-6 && !sol.hit_singularity;
    } else if (name == "transform") {
      // closed-form round trip for f = exp
      const auto fexp = warpgraph::presets::exp_t();
      const warpgraph::PsiTransform psi(fexp, 0.25);
      double round_trip = 0.0, closed_form = 0.0;
      for (int i = 0; i <= 40; ++i) {
        const double t = -1.5 + 3.0 * i / 40.0;
        const double v = psi.forward(t);
        closed_form = std::max(
            closed_form, std::abs(v - (std::exp(-0.25) - std::exp(-t))));
        round_trip = std::max(round_trip, std::abs(psi.inverse(v) - t));
      }
      // product ambient: transformed equation reduces to the plane residual
      const auto fa = warpgraph::presets::sqrt1p_cosh4();
      double plane_res = 0.0;
      for (double x : warpgraph::uniform_samples(-5.0, 5.0, 1001)) {
        plane_res = std::max(
            plane_res,
            std::abs(warpgraph::plane_residual(fa, warpgraph::curves::tanh_x(), x)));
      }
      // minimal slice through a warped ambient
      const FiberGrid grid = FiberGrid::torus({GridAxis{0.0, 1.0, 32},
                                               GridAxis{0.0, 1.0, 32}});
      const auto fcosh = warpgraph::presets::cosh_t();
      ScalarField slice(grid);  // u == 0, the minimal slice of cosh
      const warpgraph::PsiTransform psi2(fcosh, 0.0);
      const ScalarField v = psi2.forward_field(slice);
      const ScalarField tres = warpgraph::transformed_residual(grid, fcosh, v, psi2);
      j["psi_closed_form_gap"] = closed_form;
      j["psi_round_trip_gap"] = round_trip;
      j["plane_residual_of_psi_u"] = plane_res;
      j["slice_transformed_residual"] = tres.max_abs();
      pass = closed_form < 1e-10 && round_trip < 1e-10 && plane_res < 1e-6 &&
             tres.max_abs() < 1e-6;
    } else {
      throw ConfigError("unknown counterexample check '" + name + "'");
    }
    j["pass"] = pass;
    items.push_back(j);
    all_pass = all_pass && pass;
  }

  Json payload;
  payload["checks"] = items;
  payload["pass"] = all_pass;
  emit(cfg, "verify_counterexamples_report.json",
       warpgraph::report_envelope("verify-counterexamples", payload));
  return all_pass ? kOk : kCheckFailure;
}

int cmd_solve(const RunConfig& cfg, bool flow) {
  const FiberGrid grid = make_grid(cfg.grid);
  const WarpingFunction f = make_warping(cfg.warp);
  const ScalarField u0 = make_initial_field(cfg.init, grid, cfg.solver.seed);

  if (flow) {
    const auto result = warpgraph::flow_relax(grid, f, u0, cfg.solver,
                                              cfg.snapshot_stride);
    for (std::size_t i = 0; i < result.trajectory.size(); ++i) {
      char name[64];
      std::snprintf(name, sizeof name, "flow_%04zu.csv", i);
      warpgraph::write_field_csv(out_path(cfg, name), result.trajectory[i]);
    }
    Json payload = warpgraph::to_json(result.report);
    payload["snapshots"] = result.trajectory.size();
    emit(cfg, "flow_report.json", warpgraph::report_envelope("flow", payload));
    return result.report.converged ? kOk : kNonConvergence;
  }

  const auto [u, report] = warpgraph::solve_minimal(grid, f, u0, cfg.solver);
  warpgraph::write_field_csv(out_path(cfg, "u_solution.csv"), u);
  if (cfg.output.binary_fields) {
    warpgraph::write_field_binary(out_path(cfg, "u_solution.wgf"), u);
  }
  const auto state = warpgraph::assemble_state(grid, f, u);
  warpgraph::write_state_csv(out_path(cfg, "u_state.csv"), state);
  emit(cfg, "solve_report.json",
       warpgraph::report_envelope("solve", warpgraph::to_json(report)));
  return report.converged ? kOk : kNonConvergence;
}

int cmd_hypotheses(const RunConfig& cfg) {
  const FiberGrid grid = make_grid(cfg.grid);
  const WarpingFunction f = make_warping(cfg.warp);
  const ScalarField u = make_initial_field(cfg.init, grid, cfg.solver.seed);
  warpgraph::SampleConfig sc;
  sc.samples = cfg.samples;
  const auto rep = warpgraph::hypothesis_report(grid, f, u, sc);
  Json payload = warpgraph::to_json(rep);
  payload["quasi_isometry"] =
      warpgraph::to_json(warpgraph::quasi_isometry_check(grid, f, u));
  emit(cfg, "hypotheses_report.json",
       warpgraph::report_envelope("hypotheses", payload));
  return kOk;
}

int cmd_area_growth(const RunConfig& cfg) {
  RunConfig local = cfg;
  if (local.grid.topology != "box" || local.grid.dim != 2) {
    throw ConfigError("area-growth needs a 2-D box grid");
  }
  local.warp.preset = "constant";
  local.warp.table.clear();
  const FiberGrid grid = make_grid(local.grid);
  const WarpingFunction f = make_warping(local.warp);
  const ScalarField u0 = make_initial_field(local.init, grid, local.solver.seed);

  const auto [u, report] = warpgraph::solve_minimal(grid, f, u0, local.solver);
  if (!report.converged) {
    emit(cfg, "area_growth_report.json",
         warpgraph::report_envelope("area-growth",
                                    warpgraph::to_json(report)));
    return kNonConvergence;
  }
  const auto state = warpgraph::assemble_state(grid, f, u);
  const auto growth = warpgraph::ball_area_growth(state, cfg.radii);

  const double h = std::max(grid.spacing(0), grid.spacing(1));
  bool pass = true;
  Json bounds = Json::array();
  for (std::size_t i = 0; i < growth.radii.size(); ++i) {
    const double cap = 2.0 * std::numbers::pi * growth.radii[i] * growth.radii[i] +
                       5.0 * h;
    bounds.push_back(cap);
    pass = pass && growth.areas[i] <= cap;
  }
  Json payload = warpgraph::to_json(growth);
  payload["quadratic_bound"] = bounds;
  payload["solver"] = warpgraph::to_json(report);
  payload["pass"] = pass;
  emit(cfg, "area_growth_report.json",
       warpgraph::report_envelope("area-growth", payload));
  return pass ? kOk : kCheckFailure;
}

}  // namespace

int run(const RunConfig& cfg) {
  try {
    validate(cfg);
    if (cfg.command == "classify-warp") return cmd_classify_warp(cfg);
    if (cfg.command == "verify-identities") return cmd_verify_identities(cfg);
    if (cfg.command == "verify-counterexamples") {
      return cmd_verify_counterexamples(cfg);
    }
    if (cfg.command == "solve") return cmd_solve(cfg, false);
    if (cfg.command == "flow") return cmd_solve(cfg, true);
    if (cfg.command == "hypotheses") return cmd_hypotheses(cfg);
    if (cfg.command == "area-growth") return cmd_area_growth(cfg);
    std::cerr << "unknown command '" << cfg.command << "'\n";
    return kValidationError;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kValidationError;
  } catch (const warpgraph::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidationError;
  }
}

}  // namespace warplab
