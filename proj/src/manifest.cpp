#include "pxp/manifest.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

#include "pxp/errors.hpp"

namespace pxp {

namespace {

double parse_number(std::string_view text, std::string_view literal) {
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw UnsupportedError("cannot parse angle '" + std::string(literal) + "'");
  }
  return value;
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::exact:
      return "exact";
    case Method::krylov:
      return "krylov";
    case Method::automatic:
      break;
  }
  return "auto";
}

Method parse_method(std::string_view name) {
  if (name == "auto") return Method::automatic;
  if (name == "exact") return Method::exact;
  if (name == "krylov") return Method::krylov;
  throw UnsupportedError("unknown method '" + std::string(name) + "'");
}

double parse_angle(std::string_view literal) {
  std::string_view text = literal;
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  const auto pi_at = text.find("pi");
  if (pi_at == std::string_view::npos) {
    const double value = parse_number(text, literal);
    if (!std::isfinite(value)) throw UnsupportedError("angle '" + std::string(literal) + "' is not finite");
    return value;
  }
  std::string_view head = text.substr(0, pi_at);
  std::string_view tail = text.substr(pi_at + 2);
  if (!head.empty() && head.back() == '*') head.remove_suffix(1);
  double numerator = 1.0;
  if (head == "-") {
    numerator = -1.0;
  } else if (!head.empty() && head != "+") {
    numerator = parse_number(head.front() == '+' ? head.substr(1) : head, literal);
  }
  double denominator = 1.0;
  if (!tail.empty()) {
    if (tail.front() != '/') throw UnsupportedError("cannot parse angle '" + std::string(literal) + "'");
    denominator = parse_number(tail.substr(1), literal);
    if (denominator == 0.0) throw UnsupportedError("angle '" + std::string(literal) + "' divides by zero");
  }
  return numerator * std::numbers::pi / denominator;
}

nlohmann::ordered_json to_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["kind"] = m.kind;
  j["L"] = m.sites;
  j["state"] = std::string(to_string(m.state));
  j["theta_literal"] = m.theta_literal;
  j["theta"] = m.theta;
  j["coupling"] = m.coupling;
  j["detuning"] = m.detuning;
  j["dt"] = m.dt;
  j["t_max"] = m.t_max;
  j["method"] = std::string(to_string(m.method));
  j["krylov_dim"] = m.krylov_dim;
  j["tol"] = m.tol;
  j["deg_tol"] = m.deg_tol ? nlohmann::ordered_json(*m.deg_tol) : nlohmann::ordered_json(nullptr);
  j["blocks"] = m.blocks;
  j["dense_limit"] = m.dense_limit;
  j["allow_heavy"] = m.allow_heavy;
  j["dump_ham"] = m.dump_ham;
  j["dump_basis"] = m.dump_basis;
  j["scar_count"] = m.scar_count;
  j["scar_strategy"] = std::string(to_string(m.scar_strategy));
  j["scar_min_gap"] = m.scar_min_gap;
  j["sweep_L"] = m.sweep_sites;
  j["sweep_theta"] = m.sweep_thetas;
  j["sweep_kind"] = m.sweep_kind;
  j["jobs"] = m.jobs;
  j["output_dir"] = m.output_dir;
  j["tool_version"] = m.tool_version;
  j["wall_clock_seconds"] = m.wall_clock_seconds;
  j["outputs"] = m.outputs;
  return j;
}

RunManifest manifest_from_json(const nlohmann::ordered_json& j) {
  RunManifest m;
  try {
    m.kind = j.at("kind").get<std::string>();
    m.sites = j.at("L").get<int>();
    m.state = parse_state_kind(j.at("state").get<std::string>());
    m.theta_literal = j.at("theta_literal").get<std::string>();
    m.theta = j.at("theta").get<double>();
    m.coupling = j.at("coupling").get<double>();
    m.detuning = j.at("detuning").get<double>();
    m.dt = j.at("dt").get<double>();
    m.t_max = j.at("t_max").get<double>();
    m.method = parse_method(j.at("method").get<std::string>());
    m.krylov_dim = j.at("krylov_dim").get<int>();
    m.tol = j.at("tol").get<double>();
    if (!j.at("deg_tol").is_null()) m.deg_tol = j.at("deg_tol").get<double>();
    m.blocks = j.at("blocks").get<std::vector<int>>();
    m.dense_limit = j.at("dense_limit").get<std::size_t>();
    m.allow_heavy = j.at("allow_heavy").get<bool>();
    m.dump_ham = j.at("dump_ham").get<bool>();
    m.dump_basis = j.at("dump_basis").get<bool>();
    m.scar_count = j.at("scar_count").get<std::size_t>();
    m.scar_strategy = parse_scar_strategy(j.at("scar_strategy").get<std::string>());
    m.scar_min_gap = j.at("scar_min_gap").get<double>();
    m.sweep_sites = j.at("sweep_L").get<std::vector<int>>();
    m.sweep_thetas = j.at("sweep_theta").get<std::vector<std::string>>();
    m.sweep_kind = j.at("sweep_kind").get<std::string>();
    m.jobs = j.at("jobs").get<int>();
    m.output_dir = j.at("output_dir").get<std::string>();
    m.tool_version = j.at("tool_version").get<std::string>();
    m.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw UnsupportedError(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

}  // namespace pxp
