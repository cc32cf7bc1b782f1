#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <string>

#include "cli_config.hpp"
#include "commands.hpp"

namespace {

using warplab::RunConfig;

// Common options shared by the grid/warp/init-driven commands.
void add_common(CLI::App* sub, RunConfig& cfg, std::string& grid_shorthand,
                std::string& domain) {
  sub->add_option("--grid", grid_shorthand,
                  "grid shorthand: torus2:64, torus2:64x48, box1:129");
  sub->add_option("--extent", cfg.grid.extents, "axis extents")->delimiter(',');
  sub->add_option("--origin", cfg.grid.origins, "axis origins")->delimiter(',');
  sub->add_option("--metric", cfg.grid.metric, "fiber metric diagonal")
      ->delimiter(',');
  sub->add_option("--preset", cfg.warp.preset,
                  "warping preset (constant, cosh, exp, sqrt1pcosh4, "
                  "quartic_rational)");
  sub->add_option("--table", cfg.warp.table, "two-column CSV warping table");
  sub->add_option("--domain", domain, "warping domain a,b");
  sub->add_option("--init", cfg.init.expr,
                  "initial field: constant:v, affine:ax[,ay[,c]], sincos:a, "
                  "sin:a, tanh:s, fourier:a");
  sub->add_option("--init-file", cfg.init.file, "initial field CSV");
  sub->add_option("--tol", cfg.solver.tol_residual, "residual tolerance");
  sub->add_option("--max-iter", cfg.solver.max_iter, "iteration/step budget");
  sub->add_option("--seed", cfg.solver.seed, "seed for fourier init");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minimal graphs in warped products: solve, verify, classify"};
  app.require_subcommand(1);
  app.fallthrough();  // global --outdir/--config may follow the subcommand

  RunConfig cfg;
  if (const char* env = std::getenv("WARPLAB_OUTDIR")) {
    cfg.output.dir = env;
  } else {
    cfg.output.dir = ".";
  }

  std::string config_path;
  std::string grid_shorthand;
  std::string domain;
  std::string method;
  app.add_option("--config", config_path, "INI config file")
      ->check(CLI::ExistingFile);
  app.add_option("--outdir", cfg.output.dir, "report/field output directory");

  auto* classify = app.add_subcommand("classify-warp",
                                      "classify a warping function");
  classify->add_option("--preset", cfg.warp.preset, "warping preset");
  classify->add_option("--table", cfg.warp.table, "two-column CSV table");
  classify->add_option("--domain", domain, "warping domain a,b");
  classify->add_option("--samples", cfg.samples, "classifier sample count");

  auto* identities = app.add_subcommand(
      "verify-identities", "grid-refinement check of the Laplacian identities");
  identities->add_option("--which", cfg.which,
                         "angle, dtau, dftau, conf_tau, conf_ftau, F_low, "
                         "F_up, arccot, lcos, all")
      ->delimiter(',');
  identities->add_option("--levels", cfg.levels, "refinement ladder")
      ->delimiter(',');
  identities->add_option("--amp", cfg.amp, "test field amplitude");
  identities->add_option("--preset", cfg.warp.preset, "warping preset");

  auto* counter = app.add_subcommand(
      "verify-counterexamples",
      "first integrals, ODE round trip, witness, psi transform");
  counter->add_option("--which", cfg.which, "a, b, witness, ode, transform, all")
      ->delimiter(',');

  auto* solve = app.add_subcommand("solve", "solve the MS equation");
  add_common(solve, cfg, grid_shorthand, domain);
  solve->add_option("--method", method, "newton_damped, descent, flow_relax");
  solve->add_option("--damping", cfg.solver.damping, "initial step");
  solve->add_option("--backtrack", cfg.solver.backtrack, "step shrink factor");
  solve->add_flag("--binary", cfg.output.binary_fields,
                  "also write the solution in the raw binary field format");

  auto* flow = app.add_subcommand("flow", "explicit relaxation flow");
  add_common(flow, cfg, grid_shorthand, domain);
  flow->add_option("--dt-safety", cfg.solver.flow_dt_safety,
                   "fraction of the stability cap");
  flow->add_option("--snapshots", cfg.snapshot_stride, "snapshot stride");

  auto* hypo = app.add_subcommand("hypotheses",
                                  "theorem hypothesis report for (f, u)");
  add_common(hypo, cfg, grid_shorthand, domain);
  hypo->add_option("--samples", cfg.samples, "classifier sample count");

  auto* area = app.add_subcommand("area-growth",
                                  "quadratic area bound on a solved graph");
  add_common(area, cfg, grid_shorthand, domain);
  area->add_option("--radii", cfg.radii, "ball radii")->delimiter(',');

  // pass 1: pull --config out so file values become defaults that explicit
  // flags then override
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      try {
        warplab::load_config_file(cfg, argv[i + 1]);
      } catch (const warplab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return warplab::kValidationError;
      }
      break;
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : warplab::kValidationError;
  }

  try {
    if (!domain.empty()) {
      const auto parts = warplab::split(domain, ',');
      if (parts.size() != 2) {
        throw warplab::ConfigError("--domain needs two numbers a,b");
      }
      cfg.warp.domain_lo = std::stod(parts[0]);
      cfg.warp.domain_hi = std::stod(parts[1]);
    }
    if (!grid_shorthand.empty()) {
      warplab::apply_grid_shorthand(cfg.grid, grid_shorthand);
    }
    if (!method.empty()) {
      cfg.solver.method = warpgraph::method_from_string(method);
    }
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return warplab::kValidationError;
  }

  for (const CLI::App* sub : app.get_subcommands()) {
    cfg.command = sub->get_name();
  }
  if (cfg.command == "flow") cfg.solver.method = warpgraph::SolveMethod::FlowRelax;

  return warplab::run(cfg);
}
