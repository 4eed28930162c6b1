#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pxp/spectral.hpp"
#include "pxp/states.hpp"

namespace pxp {

inline constexpr std::string_view kToolVersion = "1.0.0";

enum class Method { automatic, exact, krylov };

std::string_view to_string(Method method);
Method parse_method(std::string_view name);

/// Angle literal: a decimal number or a rational multiple of pi such as "pi",
/// "-pi/2", "3pi/4" or "3*pi/8". Multiples of pi are evaluated as (p * pi) / q.
double parse_angle(std::string_view literal);

/// Everything needed to reproduce one run; serialized as manifest.json.
struct RunManifest {
  std::string kind = "evolve";  // basis-info | evolve | local | spectral | sweep
  int sites = 12;
  StateKind state = StateKind::neel;
  std::string theta_literal = "0";
  double theta = 0.0;
  double coupling = 1.0;
  double detuning = 0.0;
  double dt = 0.05;
  double t_max = 30.0;
  Method method = Method::automatic;
  int krylov_dim = 30;
  double tol = 1e-12;
  std::optional<double> deg_tol;  // unset: 1e-8 x spectral width
  std::vector<int> blocks;
  std::size_t dense_limit = 7000;
  bool allow_heavy = false;
  bool dump_ham = false;
  bool dump_basis = false;
  std::size_t scar_count = 0;  // 0: L + 1
  ScarStrategy scar_strategy = ScarStrategy::overlap_greedy;
  double scar_min_gap = 0.5;  // units of the coupling
  // sweep only
  std::vector<int> sweep_sites;
  std::vector<std::string> sweep_thetas;
  std::string sweep_kind = "evolve";
  int jobs = 1;

  std::string output_dir;
  std::string tool_version = std::string(kToolVersion);
  double wall_clock_seconds = 0.0;
  std::vector<std::string> outputs;  // file names relative to output_dir

  bool operator==(const RunManifest&) const = default;
};

nlohmann::ordered_json to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const nlohmann::ordered_json& j);

}  // namespace pxp
