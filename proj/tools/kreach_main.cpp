// Command-line front-end: reachable-set computation, trajectory sampling,
// safety checking, and certificate diagnostics for scenarios on disk.
//
// Exit codes: 0 success (and SAFE), 1 UNSAFE, 2 input/usage error,
//             3 certificate failure in strict mode.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kreach/errors.hpp"
#include "kreach/homogeneous.hpp"
#include "kreach/oracle.hpp"
#include "kreach/reach.hpp"
#include "kreach/scenario.hpp"
#include "kreach/serialize.hpp"

namespace {

using namespace kreach;

constexpr int kExitSafeOrOk = 0;
constexpr int kExitUnsafe = 1;
constexpr int kExitInputError = 2;
constexpr int kExitCertificateFailure = 3;

const char* method_tag(ErrorCertificate::Method m) {
  return m == ErrorCertificate::Method::appendix_b ? "elliptic" : "factorial";
}

Index step_count(const ReachConfig& cfg) {
  return std::max<Index>(
      1, static_cast<Index>(std::ceil(cfg.t_f / cfg.delta - 1e-9)));
}

// Input set lifted to state space when the scenario carries a B matrix.
Zonotope state_space_input(const Scenario& sc) {
  return sc.has_b ? linear_map(sc.b, sc.u) : sc.u;
}

ReachResult run_engine(const Scenario& sc) {
  return sc.has_b ? reach(sc.a, sc.b, sc.x0, sc.u, sc.cfg)
                  : reach(sc.a, sc.x0, sc.u, sc.cfg);
}

void print_step_table(const ReachResult& result) {
  std::printf("  %5s  %12s  %12s  %4s  %10s  %12s  %8s\n", "step", "t_lo", "t_hi",
              "xi", "eps_rate", "max_cert", "seconds");
  for (const StepDiagnostics& d : result.steps) {
    double max_cert =
        d.cert_radius.size() > 0 ? d.cert_radius.maxCoeff() : 0.0;
    std::printf("  %5lld  %12.6g  %12.6g  %4lld  %10.3e  %12.3e  %8.3f\n",
                static_cast<long long>(d.step), d.t_lo, d.t_hi,
                static_cast<long long>(d.xi_carrier), d.eps_rate, max_cert,
                d.wall_seconds);
  }
}

int report_safety(const Scenario& sc, const ReachResult& result) {
  if (sc.monitors.empty()) return kExitSafeOrOk;
  std::vector<Index> coords;
  Vec lo(static_cast<Index>(sc.monitors.size()));
  Vec hi(static_cast<Index>(sc.monitors.size()));
  for (size_t j = 0; j < sc.monitors.size(); ++j) {
    coords.push_back(sc.monitors[j].coord);
    lo[static_cast<Index>(j)] = sc.monitors[j].lo;
    hi[static_cast<Index>(j)] = sc.monitors[j].hi;
  }
  SafetyReport report = check_safety(result, coords, IntervalVector(lo, hi));
  if (report.safe) {
    std::printf("safety: SAFE (%zu monitored coordinate%s, %zu steps)\n",
                sc.monitors.size(), sc.monitors.size() == 1 ? "" : "s",
                result.steps.size());
    return kExitSafeOrOk;
  }
  const StepDiagnostics& d =
      result.steps[static_cast<size_t>(report.first_violation_step - 1)];
  std::printf("safety: UNSAFE — first overlap at step %lld, time [%g, %g]\n",
              static_cast<long long>(report.first_violation_step), d.t_lo, d.t_hi);
  return kExitUnsafe;
}

int cmd_reach(const std::string& scenario_path, const std::string& outdir,
              bool verbose) {
  Scenario sc = load_scenario(scenario_path);
  ReachResult result = run_engine(sc);

  std::filesystem::create_directories(outdir);
  const std::filesystem::path out(outdir);
  write_interval_hulls_csv((out / "interval_hulls.csv").string(), result);
  write_point_hulls_csv((out / "point_hulls.csv").string(), result);
  for (const auto& [i, j] : sc.projections) {
    char name[64];
    std::snprintf(name, sizeof(name), "projection_%lld_%lld.csv",
                  static_cast<long long>(i), static_cast<long long>(j));
    write_projection_csv((out / name).string(), result.time_interval_sets, i, j);
  }

  std::printf("reach: %zu steps of width %g covering [0, %g], dimension %lld\n",
              result.steps.size(), sc.cfg.delta,
              result.steps.back().t_hi, static_cast<long long>(sc.a.rows()));
  if (result.horizon_padded) {
    std::printf("note: horizon padded up to %g (t_f not a multiple of delta)\n",
                result.steps.back().t_hi);
  }
  if (sc.assembly_residual > 0.0) {
    std::printf("note: second-order assembly residual %.3e\n", sc.assembly_residual);
  }
  if (verbose) print_step_table(result);
  std::printf("wrote %s and %s (%zu projection file%s)\n",
              (out / "interval_hulls.csv").string().c_str(),
              (out / "point_hulls.csv").string().c_str(), sc.projections.size(),
              sc.projections.size() == 1 ? "" : "s");
  return report_safety(sc, result);
}

int cmd_check(const std::string& scenario_path, bool verbose) {
  Scenario sc = load_scenario(scenario_path);
  if (sc.monitors.empty()) {
    std::fprintf(stderr, "check: scenario defines no monitor entries\n");
    return kExitInputError;
  }
  ReachResult result = run_engine(sc);
  if (verbose) print_step_table(result);
  return report_safety(sc, result);
}

int cmd_simulate(const std::string& scenario_path, const std::string& outdir,
                 int samples, unsigned long long seed, double resolution,
                 double tol) {
  Scenario sc = load_scenario(scenario_path);
  if (resolution <= 0.0) resolution = sc.cfg.delta;

  std::mt19937_64 rng(seed);
  std::vector<Vec> starts;
  std::vector<PiecewiseConstantSignal> inputs;
  for (int i = 0; i < samples; ++i) {
    starts.push_back(sample_point(sc.x0, rng));
    inputs.push_back(sample_signal(sc.u, sc.cfg.t_f, resolution, rng));
  }
  const SparseMatrix b =
      sc.has_b ? sc.b : SparseMatrix::identity(sc.a.rows());
  std::vector<Trajectory> trajectories =
      simulate_batch(sc.a, b, starts, inputs, sc.cfg.t_f, tol);

  std::filesystem::create_directories(outdir);
  const std::string file =
      (std::filesystem::path(outdir) / "trajectories.csv").string();
  write_trajectories_csv(file, trajectories);
  std::printf("simulate: %d trajectories over [0, %g] (tol %g, input resolution %g)\n",
              samples, sc.cfg.t_f, tol, resolution);
  std::printf("wrote %s\n", file.c_str());
  return kExitSafeOrOk;
}

int cmd_info(const std::string& scenario_path) {
  Scenario sc = load_scenario(scenario_path);
  const Index n = sc.a.rows();
  std::printf("system: n=%lld, nnz=%lld, inf_norm=%.6g, one_norm=%.6g\n",
              static_cast<long long>(n), static_cast<long long>(sc.a.nonzeros()),
              sc.a.inf_norm(), sc.a.one_norm());
  if (sc.has_b) {
    std::printf("input map: %lld x %lld, nnz=%lld\n",
                static_cast<long long>(sc.b.rows()),
                static_cast<long long>(sc.b.cols()),
                static_cast<long long>(sc.b.nonzeros()));
  }
  if (sc.assembly_residual > 0.0) {
    std::printf("second-order assembly residual: %.3e\n", sc.assembly_residual);
  }
  std::printf("initial set: %lld generators; input set: %lld generators\n",
              static_cast<long long>(sc.x0.num_generators()),
              static_cast<long long>(sc.u.num_generators()));
  std::printf("horizon: t_f=%g, delta=%g -> %lld steps (%s input, %s errors%s)\n",
              sc.cfg.t_f, sc.cfg.delta,
              static_cast<long long>(step_count(sc.cfg)),
              sc.cfg.input_mode == InputMode::varying ? "varying" : "constant",
              sc.cfg.error_channel == ErrorChannel::interval ? "interval"
                                                             : "generator",
              sc.cfg.strict_soundness ? ", strict" : "");

  // Reduced-dimension policy as the engine will freeze it for the step width.
  if (sc.cfg.xi.fixed > 0) {
    std::printf("reduced dimension: fixed xi=%lld\n",
                static_cast<long long>(std::min(sc.cfg.xi.fixed, n)));
  } else {
    ChosenDimension chosen =
        choose_dimension(sc.a, sc.cfg.xi.target_eps, sc.cfg.delta, sc.cfg.xi.cap);
    std::printf(
        "reduced dimension: xi=%lld (target %.3g per step %s), eps_norm=%.3e, "
        "method=%s\n",
        static_cast<long long>(chosen.xi), sc.cfg.xi.target_eps,
        chosen.target_met ? "met" : "NOT met", chosen.cert.eps_norm,
        method_tag(chosen.cert.method));
  }

  // Per-column diagnostics of the first homogeneous step.
  HomogeneousStepResult step = hom_point_set(sc.a, sc.x0, sc.cfg.delta, sc.cfg.xi);
  std::printf("initial-set columns (first step, xi=%lld):\n",
              static_cast<long long>(step.xi));
  for (size_t s = 0; s < step.per_seed.size(); ++s) {
    const SeedPropagation& seed = step.per_seed[s];
    const char* label = s == 0 ? "center" : "generator";
    if (seed.zero) {
      std::printf("  %-9s %2zu: zero seed, skipped\n", label, s);
      continue;
    }
    std::printf("  %-9s %2zu: |v|=%.3e, xi=%lld%s, eps_norm=%.3e, method=%s\n",
                label, s, seed.seed_norm, static_cast<long long>(seed.dec.xi),
                seed.dec.happy_breakdown ? " (breakdown)" : "", seed.eps_norm,
                seed.dec.happy_breakdown ? "residual"
                                         : method_tag(seed.cert.method));
  }

  // Input columns run through the augmented system; report its certificates.
  const Zonotope u_state = state_space_input(sc);
  std::vector<Vec> columns;
  if (u_state.center().cwiseAbs().maxCoeff() > 0.0) {
    columns.push_back(u_state.center());
  }
  for (Index j = 0; j < u_state.num_generators(); ++j) {
    if (u_state.generators().col(j).cwiseAbs().maxCoeff() > 0.0) {
      columns.push_back(u_state.generators().col(j));
    }
  }
  std::printf("input columns (augmented systems): %zu nonzero\n", columns.size());
  for (size_t j = 0; j < columns.size(); ++j) {
    AugmentedSystem aug = augment(sc.a, columns[j].normalized());
    ChosenDimension chosen = choose_dimension(aug.a_tilde, sc.cfg.xi.target_eps,
                                              sc.cfg.delta, sc.cfg.xi.cap);
    std::printf("  column %2zu: |u|=%.3e, xi=%lld (target %s), eps_norm=%.3e, "
                "method=%s\n",
                j, columns[j].norm(), static_cast<long long>(chosen.xi),
                chosen.target_met ? "met" : "NOT met", chosen.cert.eps_norm,
                method_tag(chosen.cert.method));
  }
  return kExitSafeOrOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reachability of large sparse linear systems with uncertain "
               "inputs via certified Krylov propagation"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string outdir = "out";
  bool verbose = false;
  int samples = 10;
  unsigned long long seed = 1;
  double resolution = 0.0;
  double tol = 1e-9;

  CLI::App* c_reach =
      app.add_subcommand("reach", "Compute reachable sets and write CSV outputs");
  c_reach->add_option("scenario", scenario_path, "Scenario file")->required();
  c_reach->add_option("-o,--outdir", outdir, "Output directory");
  c_reach->add_flag("-v,--verbose", verbose, "Print the per-step table");

  CLI::App* c_sim = app.add_subcommand(
      "simulate", "Sample random trajectories of the scenario and write CSV");
  c_sim->add_option("scenario", scenario_path, "Scenario file")->required();
  c_sim->add_option("-o,--outdir", outdir, "Output directory");
  c_sim->add_option("-n,--samples", samples, "Number of trajectories")
      ->check(CLI::PositiveNumber);
  c_sim->add_option("-s,--seed", seed, "RNG seed");
  c_sim->add_option("-r,--resolution", resolution,
                    "Input switching resolution (default: delta)");
  c_sim->add_option("-t,--tol", tol, "Integrator tolerance")
      ->check(CLI::PositiveNumber);

  CLI::App* c_check = app.add_subcommand(
      "check", "Run the analysis and report SAFE/UNSAFE against the monitors");
  c_check->add_option("scenario", scenario_path, "Scenario file")->required();
  c_check->add_flag("-v,--verbose", verbose, "Print the per-step table");

  CLI::App* c_info = app.add_subcommand(
      "info", "Print system statistics and certificate diagnostics");
  c_info->add_option("scenario", scenario_path, "Scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitSafeOrOk : kExitInputError;
  }

  try {
    if (c_reach->parsed()) return cmd_reach(scenario_path, outdir, verbose);
    if (c_sim->parsed()) {
      return cmd_simulate(scenario_path, outdir, samples, seed, resolution, tol);
    }
    if (c_check->parsed()) return cmd_check(scenario_path, verbose);
    return cmd_info(scenario_path);
  } catch (const CertificateFailure& e) {
    std::fprintf(stderr, "certificate failure: %s\n", e.what());
    return kExitCertificateFailure;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInputError;
  }
}
