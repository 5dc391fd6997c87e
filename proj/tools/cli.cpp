#include "cli.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>

#include "CLI11.hpp"

#include "bdpr/admm.hpp"
#include "bdpr/error.hpp"
#include "bdpr/experiments.hpp"
#include "bdpr/hyperbola.hpp"
#include "bdpr/io.hpp"
#include "bdpr/measurements.hpp"
#include "bdpr/recovery.hpp"

namespace bdpr::cli {

namespace {

namespace fs = std::filesystem;

struct SolverOverrides {
  std::optional<double> rho1;
  std::optional<double> rho2;
  std::optional<double> tol;
  std::optional<double> tol_rel;
  std::optional<int> max_iters;
  std::optional<int> log_every;
  bool serial = false;

  void attach(CLI::App* app) {
    app->add_option("--rho1", rho1, "measurement penalty");
    app->add_option("--rho2", rho2, "PSD splitting penalty");
    app->add_option("--tol", tol, "absolute tolerance");
    app->add_option("--tol-rel", tol_rel, "relative tolerance");
    app->add_option("--max-iters", max_iters, "iteration cap");
    app->add_option("--log-every", log_every, "residual-history thinning / progress period");
    app->add_flag("--serial", serial, "use the serial reference kernels");
  }

  SolverConfig apply(SolverConfig c) const {
    if (rho1) c.rho1 = *rho1;
    if (rho2) c.rho2 = *rho2;
    if (tol) c.tol_abs = *tol;
    if (tol_rel) c.tol_rel = *tol_rel;
    if (max_iters) c.max_iters = *max_iters;
    if (log_every) c.log_every = *log_every;
    if (serial) c.parallel_kernels = false;
    return c;
  }
};

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

void require_readable(const fs::path& p) {
  std::error_code ec;
  if (!fs::is_regular_file(p, ec)) throw IoError("cannot read " + p.string());
}

void require_parent_dir(const fs::path& p) {
  const fs::path parent = p.parent_path();
  std::error_code ec;
  if (!parent.empty() && !fs::is_directory(parent, ec)) {
    throw IoError("output directory does not exist: " + parent.string());
  }
}

int default_jobs() {
  if (const char* env = std::getenv(kJobsEnv)) {
    try {
      const int j = std::stoi(env);
      if (j > 0) return j;
    } catch (const std::exception&) {
    }
    throw InvalidArgument(std::string(kJobsEnv) + " must be a positive integer");
  }
  return omp_get_num_procs();
}

int cmd_gen(Eigen::Index m, Eigen::Index k, Eigen::Index n, const std::string& model,
            const std::string& sb, const std::string& sc, std::uint64_t seed,
            const fs::path& output, std::ostream& out) {
  require_parent_dir(output);
  const ProblemInstance inst = gen_instance(m, k, n, parse_subspace_kind(sb),
                                            parse_subspace_kind(sc), parse_ensemble_model(model), seed);
  write_instance(output, inst);
  out << "wrote " << output.string() << " (m=" << m << " k=" << k << " n=" << n
      << " model=" << model << " seed=" << seed << ")\n";
  return kOk;
}

int cmd_solve(const fs::path& input, const std::optional<fs::path>& output,
              const std::optional<fs::path>& config_file, const SolverOverrides& ov, bool verbose,
              std::ostream& out) {
  require_readable(input);
  if (config_file) require_readable(*config_file);
  if (output) require_parent_dir(*output);

  SolverConfig cfg;
  if (config_file) cfg = config_from_json(read_json_file(*config_file), cfg);
  cfg = ov.apply(cfg);
  cfg.verbose = verbose;
  cfg.validate();

  const ProblemInstance inst = read_instance(input);
  const SolverResult res = solve(inst, cfg);
  std::optional<RecoveryReport> report;
  if (inst.truth) report = score({res.H_hat, res.M_hat}, *inst.truth);

  if (output) {
    Json doc = result_to_json(res, report);
    doc["instance"] = {{"m", inst.m()},
                       {"k", inst.k()},
                       {"n", inst.n()},
                       {"model", to_string(inst.model)},
                       {"seed", inst.seed},
                       {"source", input.string()}};
    write_json_file(*output, doc);
  }
  out << "objective=" << fmt("%.10g", res.objective) << " iters=" << res.iters
      << " converged=" << (res.converged ? "true" : "false");
  if (report) {
    out << " error=" << fmt("%.6e", report->relative_error_lifted)
        << " success=" << (report->success ? "true" : "false");
  }
  out << '\n';
  return kOk;
}

int cmd_project(double xi1, double xi2, double delta, std::ostream& out) {
  const ProjectionResult r = project_hyperbola({xi1, xi2, delta});
  out << "u1=" << fmt("%.12g", r.u1) << " u2=" << fmt("%.12g", r.u2)
      << " case=" << to_string(r.case_id) << " kkt_residual=" << fmt("%.3e", r.kkt_residual)
      << '\n';
  return kOk;
}

struct PhaseOverrides {
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> model;
  std::optional<double> threshold;
};

int cmd_phase(const fs::path& spec_file, const fs::path& out_dir, std::optional<int> jobs,
              const PhaseOverrides& pov, const SolverOverrides& ov, bool verbose,
              std::ostream& out) {
  require_readable(spec_file);
  GridSpec spec = grid_spec_from_json(read_json_file(spec_file));
  if (pov.trials) spec.trials_per_cell = *pov.trials;
  if (pov.seed) spec.master_seed = *pov.seed;
  if (pov.model) spec.model = parse_ensemble_model(*pov.model);
  if (pov.threshold) spec.success_threshold = *pov.threshold;
  spec.solver = ov.apply(spec.solver);
  spec.validate();
  const int j = jobs ? *jobs : default_jobs();
  if (j <= 0) throw InvalidArgument("--jobs must be positive");

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) throw IoError("cannot create " + out_dir.string());

  if (verbose) std::fprintf(stderr, "phase: running with %d jobs\n", j);
  const PhaseGrid grid = run_phase_grid(spec, j);
  emit_csv(grid, out_dir / "phase.csv");
  emit_heatmap(grid, out_dir / "phase.pgm");
  Json manifest = manifest_json(grid);
  manifest["jobs"] = j;
  write_json_file(out_dir / "manifest.json", manifest);

  int successes = 0;
  int trials = 0;
  for (const auto& [key, c] : grid.cells) {
    successes += c.successes;
    trials += c.trials;
  }
  out << "cells=" << grid.cells.size() << " trials=" << trials << " successes=" << successes
      << " output=" << out_dir.string() << '\n';
  return kOk;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lifted trace minimization for phaseless bilinear measurements", "bdpr"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "single-line progress on stderr");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a problem instance");
  Eigen::Index gm = 0, gk = 0, gn = 0;
  std::string gmodel = "direct-gaussian", gsb = "gaussian", gsc = "gaussian";
  std::uint64_t gseed = 0;
  fs::path gout;
  gen->add_option("--m", gm, "number of measurements")->required();
  gen->add_option("--k", gk, "dimension of the first subspace")->required();
  gen->add_option("--n", gn, "dimension of the second subspace")->required();
  gen->add_option("--model", gmodel, "direct-gaussian | fourier-convolution");
  gen->add_option("--subspace-b", gsb, "gaussian | partial-identity");
  gen->add_option("--subspace-c", gsc, "gaussian | partial-identity");
  gen->add_option("--seed", gseed, "64-bit seed");
  gen->add_option("-o,--output", gout, "instance file")->required();

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "solve an instance with ADMM");
  fs::path sin;
  std::optional<fs::path> sout;
  std::optional<fs::path> sconfig;
  SolverOverrides sov;
  solve_cmd->add_option("-i,--input", sin, "instance file")->required();
  solve_cmd->add_option("-o,--output", sout, "result file");
  solve_cmd->add_option("--config", sconfig, "solver config file (JSON)");
  sov.attach(solve_cmd);

  // project
  auto* project = app.add_subcommand("project", "project (xi1, xi2) onto {u1*u2 >= delta, u1 >= 0}");
  double pxi1 = 0.0, pxi2 = 0.0, pdelta = 0.0;
  project->add_option("--xi1", pxi1)->required();
  project->add_option("--xi2", pxi2)->required();
  project->add_option("--delta", pdelta)->required();

  // phase
  auto* phase = app.add_subcommand("phase", "run a phase-transition grid");
  fs::path pspec;
  fs::path pout;
  std::optional<int> pjobs;
  PhaseOverrides pov;
  SolverOverrides phov;
  phase->add_option("--spec", pspec, "grid spec file (JSON)")->required();
  phase->add_option("-o,--output", pout, "output directory")->required();
  phase->add_option("--jobs", pjobs, std::string("worker threads (default $") + kJobsEnv +
                                         " or the processor count)");
  phase->add_option("--trials", pov.trials, "trials per cell");
  phase->add_option("--seed", pov.seed, "master seed");
  phase->add_option("--model", pov.model, "ensemble model");
  phase->add_option("--threshold", pov.threshold, "success threshold");
  phov.attach(phase);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "bdpr: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*gen) return cmd_gen(gm, gk, gn, gmodel, gsb, gsc, gseed, gout, out);
    if (*solve_cmd) return cmd_solve(sin, sout, sconfig, sov, verbose, out);
    if (*project) return cmd_project(pxi1, pxi2, pdelta, out);
    if (*phase) return cmd_phase(pspec, pout, pjobs, pov, phov, verbose, out);
  } catch (const IoError& e) {
    err << "bdpr: I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const NumericalError& e) {
    err << "bdpr: numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const InvalidArgument& e) {
    err << "bdpr: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "bdpr: unexpected error: " << e.what() << '\n';
    return kNumerical;
  }
  err << "bdpr: no subcommand\n";
  return kUsage;
}

}  // namespace bdpr::cli
