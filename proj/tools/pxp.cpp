// Command-line front end: parses flags into a RunManifest and runs it.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pxp/errors.hpp"
#include "pxp/manifest.hpp"
#include "pxp/runner.hpp"

namespace {

struct Flags {
  pxp::RunManifest manifest;
  std::string state = "neel";
  std::string method = "auto";
  std::string scar_strategy = "overlap-greedy";
  double deg_tol = -1.0;
};

void add_model_flags(CLI::App& app, Flags& f) {
  auto& m = f.manifest;
  app.add_option("--L", m.sites, "Number of sites")->capture_default_str();
  app.add_option("--coupling", m.coupling, "Off-diagonal coupling Omega/2")->capture_default_str();
  app.add_option("--detuning", m.detuning, "Detuning Delta (adds Delta * sum_j n_j)")->capture_default_str();
  app.add_flag("--dump-ham", m.dump_ham, "Write the Hamiltonian as (row, col, value) triplets");
  app.add_option("--dense-limit", m.dense_limit, "Largest dimension handled by dense linear algebra")
      ->capture_default_str();
}

void add_state_flags(CLI::App& app, Flags& f) {
  app.add_option("--state", f.state,
                 "homogeneous | neel | neel_prime | theta_plus | theta_plus_prime | theta_symm | blockaded")
      ->capture_default_str();
  app.add_option("--theta", f.manifest.theta_literal, "Angle in radians or as a pi literal such as pi/4")
      ->capture_default_str();
}

void add_time_flags(CLI::App& app, Flags& f) {
  auto& m = f.manifest;
  app.add_option("--tmax", m.t_max, "Final time")->capture_default_str();
  app.add_option("--dt", m.dt, "Sampling interval")->capture_default_str();
  app.add_option("--method", f.method, "exact | krylov | auto")->capture_default_str();
  app.add_option("--krylov-dim", m.krylov_dim, "Maximal Krylov dimension")->capture_default_str();
  app.add_option("--tol", m.tol, "Krylov error tolerance per step")->capture_default_str();
  app.add_option("--blocks", m.blocks, "Prefix block lengths for entropy and block fidelity")->delimiter(',');
}

void add_spectral_flags(CLI::App& app, Flags& f) {
  auto& m = f.manifest;
  app.add_option("--deg-tol", f.deg_tol, "Degeneracy tolerance (default 1e-8 x spectral width)");
  app.add_option("--n-scars", m.scar_count, "Number of scar states (0 selects L + 1)")->capture_default_str();
  app.add_option("--scar-strategy", f.scar_strategy, "overlap-greedy | band")->capture_default_str();
  app.add_option("--scar-min-gap", m.scar_min_gap, "Minimal energy gap between greedy picks")->capture_default_str();
  app.add_flag("--allow-heavy", m.allow_heavy, "Permit spectral runs beyond L = 17");
}

void add_output_flag(CLI::App& app, Flags& f, bool required) {
  auto* opt = app.add_option("--out", f.manifest.output_dir, "Output directory");
  if (required) opt->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PXP chain simulator"};
  app.set_version_flag("--version", std::string(pxp::kToolVersion));
  app.require_subcommand(1);

  Flags f;

  auto* basis_info = app.add_subcommand("basis-info", "Print the blockaded basis dimension");
  add_model_flags(*basis_info, f);
  basis_info->add_flag("--dump", f.manifest.dump_basis, "List basis patterns, site 1 rightmost");
  add_output_flag(*basis_info, f, false);

  auto* evolve = app.add_subcommand("evolve", "Time series of fidelities and entropies");
  add_model_flags(*evolve, f);
  add_state_flags(*evolve, f);
  add_time_flags(*evolve, f);
  add_output_flag(*evolve, f, true);

  auto* local = app.add_subcommand("local", "Per-site fidelity, trace-distance bound and magnetization");
  add_model_flags(*local, f);
  add_state_flags(*local, f);
  add_time_flags(*local, f);
  add_output_flag(*local, f, true);

  auto* spectral = app.add_subcommand("spectral", "Overlap spectrum, long-time average and scars");
  add_model_flags(*spectral, f);
  add_state_flags(*spectral, f);
  add_spectral_flags(*spectral, f);
  add_output_flag(*spectral, f, true);

  auto* sweep = app.add_subcommand("sweep", "Cross product of L and theta values, one subdirectory each");
  add_model_flags(*sweep, f);
  add_state_flags(*sweep, f);
  add_time_flags(*sweep, f);
  add_spectral_flags(*sweep, f);
  sweep->add_option("--L-list", f.manifest.sweep_sites, "Chain lengths")->delimiter(',');
  sweep->add_option("--theta-list", f.manifest.sweep_thetas, "Angles")->delimiter(',');
  sweep->add_option("--kind", f.manifest.sweep_kind, "evolve | local | spectral")->capture_default_str();
  sweep->add_option("--jobs", f.manifest.jobs, "Concurrent sub-runs")->capture_default_str();
  add_output_flag(*sweep, f, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : pxp::exit_code::validation;
  }

  try {
    f.manifest.kind = app.get_subcommands().front()->get_name();
    f.manifest.state = pxp::parse_state_kind(f.state);
    f.manifest.method = pxp::parse_method(f.method);
    f.manifest.scar_strategy = pxp::parse_scar_strategy(f.scar_strategy);
    if (f.deg_tol >= 0.0) f.manifest.deg_tol = f.deg_tol;
    else if (f.deg_tol != -1.0) throw pxp::RangeError("--deg-tol must be non-negative");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return pxp::exit_code_for(e);
  }
  return pxp::run_experiment_status(f.manifest, std::cout, std::cerr);
}
