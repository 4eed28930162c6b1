#include "pxp/runner.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pxp/basis.hpp"
#include "pxp/errors.hpp"
#include "pxp/hamiltonian.hpp"
#include "pxp/observables.hpp"
#include "pxp/propagator.hpp"
#include "pxp/spectral.hpp"
#include "pxp/states.hpp"

namespace pxp {

namespace fs = std::filesystem;

namespace {

constexpr int kMaxDenseSpectralSites = 17;
constexpr double kSandwichTol = 1e-10;
constexpr Eigen::Index kQuadratureSteps = 400;

std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

/// Files written by one run; removed again unless the run commits.
class OutputSet {
 public:
  explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;

  ~OutputSet() {
    if (committed_) return;
    std::error_code ec;
    for (auto it = written_.rbegin(); it != written_.rend(); ++it) fs::remove_all(dir_ / *it, ec);
    fs::remove(dir_ / "manifest.json", ec);
    if (created_dir_) fs::remove(dir_, ec);
  }

  void prepare() {
    std::error_code ec;
    if (fs::exists(dir_)) {
      clear_previous_run();
    } else {
      fs::create_directories(dir_, ec);
      if (ec) throw RangeError("cannot create output directory " + dir_.string() + ": " + ec.message());
      created_dir_ = true;
    }
  }

  const fs::path& dir() const noexcept { return dir_; }

  std::ofstream open(const std::string& name) {
    written_.push_back(name);
    std::ofstream os(dir_ / name, std::ios::binary);
    if (!os) throw RangeError("cannot write " + (dir_ / name).string());
    return os;
  }

  /// Registers a name that a nested run created below dir().
  void adopt(const std::string& name) { written_.push_back(name); }

  const std::vector<std::string>& written() const noexcept { return written_; }
  void commit() noexcept { committed_ = true; }

 private:
  // A directory holding a previous run (and nothing else) may be reused.
  void clear_previous_run() {
    if (!fs::is_directory(dir_)) throw RangeError("output path " + dir_.string() + " is not a directory");
    if (fs::is_empty(dir_)) return;
    const fs::path manifest_path = dir_ / "manifest.json";
    if (!fs::exists(manifest_path)) {
      throw RangeError("output directory " + dir_.string() + " is not empty and holds no previous run");
    }
    std::ifstream is(manifest_path);
    RunManifest previous;
    try {
      previous = manifest_from_json(nlohmann::ordered_json::parse(is));
    } catch (const nlohmann::json::exception& e) {
      throw RangeError("cannot read previous manifest in " + dir_.string() + ": " + e.what());
    }
    for (const auto& name : previous.outputs) {
      const fs::path p = fs::path(name);
      if (p.is_absolute() || name.find("..") != std::string::npos) continue;
      fs::remove_all(dir_ / p.begin()->string());
    }
    fs::remove(manifest_path);
    if (!fs::is_empty(dir_)) {
      throw RangeError("output directory " + dir_.string() + " holds files not listed by its manifest");
    }
  }

  fs::path dir_;
  std::vector<std::string> written_;
  bool created_dir_ = false;
  bool committed_ = false;
};

void write_manifest(const fs::path& dir, const RunManifest& manifest) {
  std::ofstream os(dir / "manifest.json", std::ios::binary);
  if (!os) throw RangeError("cannot write " + (dir / "manifest.json").string());
  os << to_json(manifest).dump(2) << '\n';
}

void validate(RunManifest& m) {
  if (m.sites < 1 || m.sites > kMaxSites) {
    throw RangeError("L must lie in [1, " + std::to_string(kMaxSites) + "], got " + std::to_string(m.sites));
  }
  m.theta = parse_angle(m.theta_literal);
  if (!(m.dt > 0.0) || !std::isfinite(m.dt)) throw RangeError("dt must be positive");
  if (!(m.t_max >= 0.0) || !std::isfinite(m.t_max)) throw RangeError("t_max must be non-negative");
  if (m.krylov_dim < 2) throw RangeError("Krylov dimension must be at least 2");
  if (!(m.tol > 0.0)) throw RangeError("tolerance must be positive");
  if (m.deg_tol && !(*m.deg_tol >= 0.0)) throw RangeError("deg_tol must be non-negative");
  if (!(m.coupling != 0.0) || !std::isfinite(m.coupling)) throw DomainError("coupling must be finite and nonzero");
  if (!std::isfinite(m.detuning)) throw DomainError("detuning must be finite");
  for (int l : m.blocks) {
    if (l < 1 || l >= m.sites) {
      throw RangeError("block length " + std::to_string(l) + " outside [1, " + std::to_string(m.sites - 1) + "]");
    }
  }
  if (m.jobs < 1) throw RangeError("jobs must be at least 1");
}

double mebibytes(double bytes) { return bytes / (1024.0 * 1024.0); }

bool use_exact(const RunManifest& m, std::size_t dim) {
  switch (m.method) {
    case Method::exact:
      return true;
    case Method::krylov:
      return false;
    case Method::automatic:
      break;
  }
  return dim <= m.dense_limit;
}

void preflight(const RunManifest& m, const PxpHamiltonian<double>& h, bool dense, std::ostream& log) {
  const double dim = static_cast<double>(h.dim());
  const double sparse = static_cast<double>(h.nnz()) * 4.0 + (dim + 1.0) * 4.0;
  const double work = dense ? 3.0 * dim * dim * 8.0 : (m.krylov_dim + 1.0) * dim * 16.0;
  std::ostringstream line;
  line << "pre-flight: L=" << m.sites << " dim=" << h.dim() << " nnz=" << h.nnz() << " path="
       << (dense ? "dense" : "krylov") << " memory~" << std::fixed << std::setprecision(1)
       << mebibytes(sparse + work) << " MiB\n";
  log << line.str();
}

void dump_hamiltonian(OutputSet& files, const PxpHamiltonian<double>& h) {
  auto os = files.open("hamiltonian.txt");
  h.write_triplets(os);
}

/// Calls visit(k, psi_k) for every point of the manifest's time grid.
template <typename Visitor>
void propagate(const RunManifest& m, const PxpHamiltonian<double>& h, const StateVector& psi0, std::ostream& log,
               Visitor&& visit) {
  const TimeGrid grid = TimeGrid::up_to(m.t_max, m.dt);
  if (use_exact(m, h.dim())) {
    const EigenDecomposition<double> eig = diagonalize(h.to_dense(m.dense_limit));
    const ExactPropagator<double> propagator(eig, psi0);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const StateVector psi = propagator.at(grid.time(k));
      if (std::abs(psi.norm() - 1.0) > 1e-10) {
        throw NumericalError("exact propagation lost normalization at t = " + format_double(grid.time(k)));
      }
      visit(k, psi);
    }
    return;
  }
  KrylovOptions options;
  options.krylov_dim = m.krylov_dim;
  options.tol = m.tol;
  const KrylovStats stats = evolve_krylov(h, psi0, grid, options, visit);
  log << "krylov: substeps=" << stats.substeps << " matvecs=" << stats.matvecs
      << " max_error_estimate=" << stats.max_error_estimate << " max_norm_drift=" << stats.max_norm_drift << '\n';
}

void check_sandwich(const LocalComparison& c, double t) {
  for (std::size_t j = 0; j < c.fidelity.size(); ++j) {
    const double f = c.fidelity[j];
    const double d = c.trace_distance[j];
    if (1.0 - std::sqrt(f) > d + kSandwichTol || d > max_trace_distance(f) + kSandwichTol) {
      throw NumericalError("fidelity/trace-distance bounds violated at site " + std::to_string(j + 1) +
                           ", t = " + format_double(t));
    }
  }
}

struct Trajectory {
  std::vector<double> times;
  std::vector<double> global;
  std::vector<double> one_site;
  std::vector<double> log_product;
  std::vector<double> max_distance;
  std::vector<double> half_entropy;
  std::vector<std::vector<double>> block_entropy;   // [block][k]
  std::vector<std::vector<double>> block_fidelity;  // [block][k]
};

void run_evolve(RunManifest& m, OutputSet& files, std::ostream& out, std::ostream& log) {
  const BlockadedBasis basis(m.sites);
  const auto h = build_pxp(basis, m.coupling, m.detuning);
  const StateVector psi0 = make_state(basis, {m.state, m.theta});
  preflight(m, h, use_exact(m, h.dim()), log);
  if (m.dump_ham) dump_hamiltonian(files, h);

  const SiteReducer reducer(basis);
  const auto rho0 = reducer.all(psi0);
  const int half = m.sites / 2;
  std::optional<BipartitionMap> half_map;
  if (half >= 1) half_map = bipartition(basis, half);
  std::vector<BipartitionMap> block_maps;
  std::vector<BlockDensityMatrix> block0;
  for (int l : m.blocks) {
    block_maps.push_back(bipartition(basis, l));
    block0.push_back(block_rdm(block_maps.back(), psi0));
  }

  Trajectory tr;
  tr.block_entropy.resize(m.blocks.size());
  tr.block_fidelity.resize(m.blocks.size());
  const TimeGrid grid = TimeGrid::up_to(m.t_max, m.dt);
  propagate(m, h, psi0, log, [&](std::size_t k, const StateVector& psi) {
    const double t = grid.time(k);
    const auto rho = reducer.all(psi);
    for (const auto& r : rho) check_density_matrix(r);
    const LocalComparison c = compare_local(rho0, rho);
    check_sandwich(c, t);
    tr.times.push_back(t);
    tr.global.push_back(global_fidelity(psi0, psi));
    tr.one_site.push_back(c.average_fidelity());
    tr.log_product.push_back(c.log_product_fidelity());
    tr.max_distance.push_back(c.average_max_trace_distance());
    if (half_map) {
      const double s = entanglement_entropy(*half_map, psi);
      if (s > entropy_bound(m.sites, half) + 1e-10) {
        throw NumericalError("half-chain entropy above its dimension bound at t = " + format_double(t));
      }
      tr.half_entropy.push_back(s);
    } else {
      tr.half_entropy.push_back(0.0);
    }
    for (std::size_t b = 0; b < block_maps.size(); ++b) {
      const BlockDensityMatrix rho_b = block_rdm(block_maps[b], psi);
      const double s = entanglement_entropy(block_maps[b], psi);
      if (s > entropy_bound(m.sites, m.blocks[b]) + 1e-10) {
        throw NumericalError("block entropy above its dimension bound at t = " + format_double(t));
      }
      tr.block_entropy[b].push_back(s);
      tr.block_fidelity[b].push_back(uhlmann_fidelity_sqrtm(block0[b], rho_b));
    }
  });

  const TimeSeries f1(grid, tr.one_site);
  const auto cesaro_f1 = cesaro_average(f1).values;
  const auto std_f1 = running_std(f1).values;
  const auto std_conv = running_std_conventional(f1).values;
  const auto cesaro_global = cesaro_average(TimeSeries(grid, tr.global)).values;
  const auto cesaro_dmax = cesaro_average(TimeSeries(grid, tr.max_distance)).values;

  auto os = files.open("timeseries.csv");
  os << "t,F_global,F_1site,prod_Fj_log,S_half,cesaro_F1site,std_F1site,std_F1site_conventional,"
        "cesaro_F_global,Dmax_1site,cesaro_Dmax_1site";
  for (int l : m.blocks) os << ",S_l" << l << ",F_block_l" << l;
  os << '\n';
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    os << format_double(tr.times[k]) << ',' << format_double(tr.global[k]) << ',' << format_double(tr.one_site[k])
       << ',' << format_double(tr.log_product[k]) << ',' << format_double(tr.half_entropy[k]) << ','
       << format_double(cesaro_f1[k]) << ',' << format_double(std_f1[k]) << ',' << format_double(std_conv[k]) << ','
       << format_double(cesaro_global[k]) << ',' << format_double(tr.max_distance[k]) << ','
       << format_double(cesaro_dmax[k]);
    for (std::size_t b = 0; b < m.blocks.size(); ++b) {
      os << ',' << format_double(tr.block_entropy[b][k]) << ',' << format_double(tr.block_fidelity[b][k]);
    }
    os << '\n';
  }
  out << "t_max=" << format_double(grid.t_max()) << " cesaro_F1site=" << format_double(cesaro_f1.back())
      << " std_F1site=" << format_double(std_f1.back()) << " cesaro_Dmax_1site=" << format_double(cesaro_dmax.back())
      << '\n';
}

void run_local(RunManifest& m, OutputSet& files, std::ostream& out, std::ostream& log) {
  const BlockadedBasis basis(m.sites);
  const auto h = build_pxp(basis, m.coupling, m.detuning);
  const StateVector psi0 = make_state(basis, {m.state, m.theta});
  preflight(m, h, use_exact(m, h.dim()), log);
  if (m.dump_ham) dump_hamiltonian(files, h);

  const SiteReducer reducer(basis);
  const auto rho0 = reducer.all(psi0);
  std::vector<double> z0(rho0.size());
  for (std::size_t j = 0; j < rho0.size(); ++j) z0[j] = magnetization(rho0[j]);

  const TimeGrid grid = TimeGrid::up_to(m.t_max, m.dt);
  std::vector<double> one_site;
  std::vector<double> max_distance;
  auto os = files.open("sites.csv");
  os << "t,j,F_j,Dmax_j,Z_j,absdZ_j\n";
  propagate(m, h, psi0, log, [&](std::size_t k, const StateVector& psi) {
    const double t = grid.time(k);
    const auto rho = reducer.all(psi);
    for (const auto& r : rho) check_density_matrix(r);
    const LocalComparison c = compare_local(rho0, rho);
    check_sandwich(c, t);
    const std::string ts = format_double(t);
    for (std::size_t j = 0; j < rho.size(); ++j) {
      const double z = c.magnetization[j];
      os << ts << ',' << (j + 1) << ',' << format_double(c.fidelity[j]) << ','
         << format_double(max_trace_distance(c.fidelity[j])) << ',' << format_double(z) << ','
         << format_double(std::abs(z - z0[j])) << '\n';
    }
    one_site.push_back(c.average_fidelity());
    max_distance.push_back(c.average_max_trace_distance());
  });

  const TimeSeries f1(grid, one_site);
  nlohmann::ordered_json summary;
  summary["t_max"] = grid.t_max();
  summary["cesaro_Dmax_1site"] = cesaro_average(TimeSeries(grid, max_distance)).values.back();
  summary["cesaro_F1site"] = cesaro_average(f1).values.back();
  summary["std_F1site"] = running_std(f1).values.back();
  auto js = files.open("local_summary.json");
  js << summary.dump(2) << '\n';
  out << "t_max=" << format_double(grid.t_max())
      << " cesaro_Dmax_1site=" << format_double(summary["cesaro_Dmax_1site"].get<double>()) << '\n';
}

nlohmann::ordered_json nullable(double x) {
  return std::isfinite(x) ? nlohmann::ordered_json(x) : nlohmann::ordered_json(nullptr);
}

void run_spectral_dense(RunManifest& m, const BlockadedBasis& basis, const PxpHamiltonian<double>& h,
                        const StateVector& psi0, OutputSet& files, std::ostream& out) {
  const EigenDecomposition<double> eig = diagonalize(h.to_dense(m.dense_limit));
  const OverlapSpectrum spec = overlaps(eig, psi0);
  const double deg_tol = m.deg_tol.value_or(default_degeneracy_tol(eig));
  const double average = longtime_average(spec, deg_tol);
  const auto entropies = eigenstate_entropies(eig, basis);

  ScarOptions options;
  options.count = m.scar_count;
  options.strategy = m.scar_strategy;
  options.min_energy_gap = m.scar_min_gap * std::abs(m.coupling);
  const ScarSet scars = identify_scars(eig, basis, options);
  const double bound = scar_bound(scars, eig, psi0);

  std::vector<char> is_scar(spec.size(), 0);
  for (std::size_t i : scars.indices) is_scar[i] = 1;
  auto os = files.open("spectrum.csv");
  os << "E_n,weight,entropy_n,is_scar\n";
  for (std::size_t n = 0; n < spec.size(); ++n) {
    os << format_double(spec.energies[n]) << ',' << format_double(spec.weights[n]) << ','
       << format_double(entropies[n]) << ',' << int(is_scar[n]) << '\n';
  }

  const auto top = std::max_element(spec.weights.begin(), spec.weights.end());
  const auto top_index = static_cast<std::size_t>(top - spec.weights.begin());
  nlohmann::ordered_json summary;
  summary["method"] = "dense";
  summary["dimension"] = basis.size();
  summary["deg_tol"] = deg_tol;
  summary["longtime_average"] = average;
  summary["scar_bound"] = bound;
  summary["ratio"] = bound > 0.0 ? nullable(average / bound) : nlohmann::ordered_json(nullptr);
  summary["max_weight"] = *top;
  summary["max_weight_energy"] = spec.energies[top_index];
  summary["max_weight_index"] = top_index;
  summary["n_scars"] = scars.indices.size();
  summary["scar_strategy"] = std::string(to_string(m.scar_strategy));
  summary["scar_indices"] = scars.indices;
  summary["scar_class_sizes"] = scars.class_sizes;
  summary["scar_energies"] = scars.energies;
  summary["scar_neel_overlaps"] = scars.neel_overlaps;
  summary["scar_entropies"] = scars.entropies;
  auto js = files.open("summary.json");
  js << summary.dump(2) << '\n';
  out << "longtime_average=" << format_double(average) << " scar_bound=" << format_double(bound)
      << " max_weight=" << format_double(*top) << '\n';
}

// Spectra beyond the dense limit: Gauss quadrature nodes of the spectral measure.
// Converged nodes carry exact eigenvalues and overlaps; the rest are smeared.
void run_spectral_quadrature(const BlockadedBasis& basis, const PxpHamiltonian<double>& h,
                             const StateVector& psi0, OutputSet& files, std::ostream& out) {
  if (psi0.imag().cwiseAbs().maxCoeff() != 0.0) {
    throw UnsupportedError("quadrature spectra need a real initial state");
  }
  const Eigen::VectorXd real_psi = psi0.real();
  const auto q = lanczos_quadrature(h, real_psi, std::min<Eigen::Index>(kQuadratureSteps, h.dim()));
  auto os = files.open("spectrum.csv");
  os << "E_n,weight,entropy_n,is_scar,residual\n";
  double top = 0.0;
  double top_energy = 0.0;
  for (Eigen::Index i = 0; i < q.nodes.size(); ++i) {
    os << format_double(q.nodes(i)) << ',' << format_double(q.weights(i)) << ",nan,0,"
       << format_double(q.residuals(i)) << '\n';
    if (q.residuals(i) < 1e-8 && q.weights(i) > top) {
      top = q.weights(i);
      top_energy = q.nodes(i);
    }
  }
  nlohmann::ordered_json summary;
  summary["method"] = "lanczos-quadrature";
  summary["dimension"] = basis.size();
  summary["quadrature_nodes"] = q.nodes.size();
  summary["longtime_average"] = nullptr;
  summary["scar_bound"] = nullptr;
  summary["ratio"] = nullptr;
  summary["max_weight"] = top;
  summary["max_weight_energy"] = top_energy;
  auto js = files.open("summary.json");
  js << summary.dump(2) << '\n';
  out << "max_weight=" << format_double(top) << " at E=" << format_double(top_energy) << '\n';
}

void run_spectral(RunManifest& m, OutputSet& files, std::ostream& out, std::ostream& log) {
  const BlockadedBasis basis(m.sites);
  const auto h = build_pxp(basis, m.coupling, m.detuning);
  const bool dense = basis.size() <= m.dense_limit;
  preflight(m, h, dense, log);
  if (m.sites > kMaxDenseSpectralSites && !m.allow_heavy) {
    const double dim = static_cast<double>(basis.size());
    throw CapacityError("spectral analysis at L = " + std::to_string(m.sites) + " (dim " +
                        std::to_string(basis.size()) + ", ~" +
                        std::to_string(static_cast<long long>(mebibytes(3.0 * dim * dim * 8.0))) +
                        " MiB dense) requires --allow-heavy");
  }
  const StateVector psi0 = make_state(basis, {m.state, m.theta});
  if (m.dump_ham) dump_hamiltonian(files, h);
  if (dense) {
    run_spectral_dense(m, basis, h, psi0, files, out);
  } else {
    run_spectral_quadrature(basis, h, psi0, files, out);
  }
}

void run_basis_info(RunManifest& m, OutputSet* files, std::ostream& out) {
  const BlockadedBasis basis(m.sites);
  out << "L=" << m.sites << " dimension=" << basis.size() << '\n';
  if (!m.dump_basis && !m.dump_ham) return;
  std::ostringstream patterns;
  for (Pattern s : basis.states()) {
    for (int bit = m.sites - 1; bit >= 0; --bit) patterns << ((s >> bit) & 1u);
    patterns << '\n';
  }
  if (files) {
    if (m.dump_basis) {
      auto os = files->open("basis.txt");
      os << patterns.str();
    }
    if (m.dump_ham) dump_hamiltonian(*files, build_pxp(basis, m.coupling, m.detuning));
  } else {
    if (m.dump_basis) out << patterns.str();
    if (m.dump_ham) build_pxp(basis, m.coupling, m.detuning).write_triplets(out);
  }
}

std::string sanitize(std::string_view literal) {
  std::string name;
  for (char c : literal) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-') {
      name += c;
    } else if (c == '/') {
      name += '_';
    }
  }
  return name.empty() ? "0" : name;
}

void run_sweep(RunManifest& m, OutputSet& files, std::ostream& out, std::ostream& log) {
  if (m.sweep_kind != "evolve" && m.sweep_kind != "local" && m.sweep_kind != "spectral") {
    throw UnsupportedError("sweep kind must be evolve, local or spectral, got '" + m.sweep_kind + "'");
  }
  const std::vector<int> sites = m.sweep_sites.empty() ? std::vector<int>{m.sites} : m.sweep_sites;
  const std::vector<std::string> thetas =
      m.sweep_thetas.empty() ? std::vector<std::string>{m.theta_literal} : m.sweep_thetas;

  struct Point {
    RunManifest manifest;
    std::string name;
    std::ostringstream out;
    std::ostringstream log;
  };
  std::vector<Point> points(sites.size() * thetas.size());
  std::size_t p = 0;
  for (int l : sites) {
    for (const auto& theta : thetas) {
      Point& point = points[p++];
      point.manifest = m;
      point.manifest.kind = m.sweep_kind;
      point.manifest.sites = l;
      point.manifest.theta_literal = theta;
      point.manifest.sweep_sites.clear();
      point.manifest.sweep_thetas.clear();
      point.manifest.jobs = 1;
      point.manifest.outputs.clear();
      point.name = "L" + std::to_string(l) + "_theta_" + sanitize(theta);
      point.manifest.output_dir = (files.dir() / point.name).string();
      validate(point.manifest);
    }
  }
  for (std::size_t a = 0; a < points.size(); ++a) {
    for (std::size_t b = a + 1; b < points.size(); ++b) {
      if (points[a].name == points[b].name) throw RangeError("sweep points collide on directory " + points[a].name);
    }
  }

  // Each point owns its directory; points fan out in batches of `jobs`.
  std::exception_ptr failure;
  std::vector<bool> done(points.size(), false);
  for (std::size_t start = 0; start < points.size(); start += static_cast<std::size_t>(m.jobs)) {
    const std::size_t stop = std::min(points.size(), start + static_cast<std::size_t>(m.jobs));
    std::vector<std::future<void>> batch;
    for (std::size_t i = start; i < stop; ++i) {
      Point& point = points[i];
      batch.push_back(std::async(m.jobs > 1 ? std::launch::async : std::launch::deferred,
                                 [&point] { run_experiment(point.manifest, point.out, point.log); }));
    }
    for (std::size_t i = start; i < stop; ++i) {
      try {
        batch[i - start].get();
        done[i] = true;
      } catch (...) {
        if (!failure) failure = std::current_exception();
      }
      out << points[i].out.str();
      log << points[i].log.str();
    }
    if (failure) break;
  }
  if (failure) {
    std::error_code ec;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (done[i]) fs::remove_all(files.dir() / points[i].name, ec);
    }
    std::rethrow_exception(failure);
  }
  for (const auto& point : points) files.adopt(point.name + "/manifest.json");
}

}  // namespace

int exit_code_for(const std::exception& error) noexcept {
  if (dynamic_cast<const CapacityError*>(&error)) return exit_code::capacity;
  if (dynamic_cast<const NumericalError*>(&error)) return exit_code::numerical;
  if (dynamic_cast<const RangeError*>(&error) || dynamic_cast<const ShapeError*>(&error) ||
      dynamic_cast<const DomainError*>(&error) || dynamic_cast<const UnsupportedError*>(&error)) {
    return exit_code::validation;
  }
  if (dynamic_cast<const std::bad_alloc*>(&error)) return exit_code::capacity;
  return exit_code::numerical;
}

void run_experiment(RunManifest& manifest, std::ostream& out, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  validate(manifest);
  const std::string& kind = manifest.kind;
  if (kind != "basis-info" && kind != "evolve" && kind != "local" && kind != "spectral" && kind != "sweep") {
    throw UnsupportedError("unknown experiment kind '" + kind + "'");
  }
  if (manifest.output_dir.empty()) {
    if (kind != "basis-info") throw RangeError(kind + " needs an output directory");
    run_basis_info(manifest, nullptr, out);
    return;
  }

  OutputSet files{fs::path(manifest.output_dir)};
  files.prepare();
  if (kind == "basis-info") {
    run_basis_info(manifest, &files, out);
  } else if (kind == "evolve") {
    run_evolve(manifest, files, out, log);
  } else if (kind == "local") {
    run_local(manifest, files, out, log);
  } else if (kind == "spectral") {
    run_spectral(manifest, files, out, log);
  } else {
    run_sweep(manifest, files, out, log);
  }
  manifest.outputs = files.written();
  manifest.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(files.dir(), manifest);
  files.commit();
}

int run_experiment_status(RunManifest& manifest, std::ostream& out, std::ostream& log) noexcept {
  try {
    run_experiment(manifest, out, log);
    return exit_code::success;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace pxp
