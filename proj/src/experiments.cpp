#include "spinbath/experiments.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "spinbath/parallel.hpp"

namespace spinbath {

namespace {

// Accumulates per-sample observables; energy expectations are evaluated in
// column blocks so dense Hamiltonians go through matrix products.
class TrajectoryBuilder {
 public:
  TrajectoryBuilder(const OperatorMatrix& h, const BasisTag& tag,
                    const std::vector<double>& times)
      : h_(h), tag_(tag) {
    traj_.times = times;
    const auto n = times.size();
    traj_.bloch.resize(n);
    traj_.energy.resize(n);
    traj_.norm.resize(n);
    buffer_.resize(tag.dim(), kBlock);
  }

  void add(Index i, const Eigen::Ref<const Vector>& state) {
    traj_.bloch[static_cast<std::size_t>(i)] =
        reduce_central(tag_, state).bloch;
    traj_.norm[static_cast<std::size_t>(i)] = state.norm();
    buffer_.col(filled_) = state;
    indices_[static_cast<std::size_t>(filled_)] = i;
    if (++filled_ == kBlock) flush();
  }

  Trajectory take() {
    flush();
    traj_.check();
    return std::move(traj_);
  }

 private:
  void flush() {
    if (filled_ == 0) return;
    Matrix image(tag_.dim(), filled_);
    if (h_.is_dense()) {
      image.noalias() = h_.dense_data() * buffer_.leftCols(filled_);
    } else if (h_.is_sparse()) {
      image.noalias() = h_.sparse_data() * buffer_.leftCols(filled_);
    } else {
      image = h_.diagonal_data().cast<Complex>().asDiagonal() *
              buffer_.leftCols(filled_);
    }
    for (Index j = 0; j < filled_; ++j)
      traj_.energy[static_cast<std::size_t>(indices_[static_cast<std::size_t>(
          j)])] = buffer_.col(j).dot(image.col(j)).real();
    filled_ = 0;
  }

  static constexpr Index kBlock = 256;
  const OperatorMatrix& h_;
  BasisTag tag_;
  Trajectory traj_;
  Matrix buffer_;
  std::array<Index, kBlock> indices_{};
  Index filled_ = 0;
};

Method resolve_method(const ModelConfig& config, Method requested) {
  if (requested == Method::Auto)
    return config.coupling_kind == CouplingKind::Gue ? Method::Projected
                                                     : Method::Krylov;
  if (requested == Method::Krylov &&
      config.coupling_kind == CouplingKind::Gue)
    throw DomainError(
        "run_scenario: the GUE interaction has no sparse full-space form; "
        "use the projected method");
  if (requested == Method::Exact && config.coupling_kind == CouplingKind::Gue)
    return Method::Projected;  // GUE is already exact on the subspace
  return requested;
}

double resolve_t_max(const ModelConfig& config, const RunParams& params) {
  if (params.t_max > 0.0) return params.t_max;
  const double alpha_abs = config.alpha;
  if (!(alpha_abs > 0.0))
    throw ConfigError(
        "run_scenario: t_max must be given explicitly when alpha = 0");
  return 60.0 / alpha_abs;
}

// Diagonal-ensemble z-average of one subspace sector, starting from the
// basis member at the given position.
double sector_diag_average(const ModelConfig& config, Index position) {
  AssembledModel model = assemble_projected(config);
  EigenSystem eig = eigendecompose(model.h_total);
  PureState psi0;
  psi0.tag = BasisTag::subspace(model.sub);
  psi0.amplitudes = Vector::Zero(psi0.tag.dim());
  psi0.amplitudes[position] = Complex(1, 0);
  return diagonal_ensemble_average(eig, psi0);
}

// Infinite-time z-average in the projected (two-band per sector) picture.
// The Up start lives in sector k. The superposition start splits evenly
// between sector k (central up) and sector k-1 (central down, band k as its
// upper block); at k=0 the down branch has no partner band and is frozen.
double projected_diag_average(const ModelConfig& config) {
  if (config.central_init == InitialStateKind::Up)
    return sector_diag_average(config, config.initial_m);
  const double up_part = sector_diag_average(config, config.initial_m);
  double down_part = -1.0;
  if (config.k >= 1) {
    ModelConfig lower = config;
    lower.k = config.k - 1;
    const Index pos = static_cast<Index>(binomial(lower.n_env, lower.k)) +
                      config.initial_m;
    down_part = sector_diag_average(lower, pos);
  }
  return 0.5 * up_part + 0.5 * down_part;
}

}  // namespace

ScenarioResult run_scenario(const ModelConfig& config,
                            const RunParams& params) {
  config.validate();
  ScenarioResult result;
  result.config = config;
  result.params = params;
  result.resolved_method = resolve_method(config, params.method);
  result.t_max = resolve_t_max(config, params);
  const auto times = time_grid(result.t_max, params.samples);

  if (result.resolved_method == Method::Krylov) {
    AssembledModel model = assemble(config);
    PureState psi0 =
        make_initial_state(config, BasisTag::full_space(config.n_env));
    TrajectoryBuilder builder(model.h_total, psi0.tag, times);
    const double dt = result.t_max / static_cast<double>(params.samples - 1);
    propagate_krylov(model.h_total, psi0, dt, params.samples - 1,
                     [&](Index i, const Eigen::Ref<const Vector>& v) {
                       builder.add(i, v);
                     },
                     params.krylov);
    result.trajectory = builder.take();
    result.summary.z_diag = projected_diag_average(config);
  } else {
    AssembledModel model = result.resolved_method == Method::Projected
                               ? assemble_projected(config)
                               : assemble(config);
    EigenSystem eig = eigendecompose(model.h_total, params.dense_cap);
    PureState psi0 = make_initial_state(config, model.h_total.tag());
    TrajectoryBuilder builder(model.h_total, psi0.tag, times);
    propagate_exact(eig, psi0, times,
                    [&](Index i, const Eigen::Ref<const Vector>& v) {
                      builder.add(i, v);
                    });
    result.trajectory = builder.take();
    result.summary.z_diag = diagonal_ensemble_average(eig, psi0);
  }

  const TimeAverage avg =
      numeric_time_average(result.trajectory, params.discard);
  const TimeAverage avg_full = numeric_time_average(result.trajectory, 0.0);
  result.summary.z_numeric = avg.mean.z;
  result.summary.z_numeric_full = avg_full.mean.z;
  result.summary.fluctuation = avg.deviation.z;
  result.summary.z_stderr = avg.z_stderr;
  result.summary.expected = expected_inversion(config.n_env, config.k);
  result.summary.residual =
      std::abs(result.summary.z_diag - result.summary.expected);
  for (double v :
       {result.summary.z_numeric, result.summary.z_diag,
        result.summary.fluctuation, result.summary.expected,
        result.summary.residual})
    if (!std::isfinite(v))
      throw PropagationError("run_scenario: non-finite summary value");
  return result;
}

DetuneScan detune_scan(const ModelConfig& config, double window, int steps) {
  config.validate();
  if (window < 0.0) throw UsageError("detune_scan: window must be >= 0");
  if (window == 0.0)
    steps = 1;
  else if (steps < 3)
    throw UsageError("detune_scan: need at least 3 steps");

  const double expected = expected_inversion(config.n_env, config.k);
  DetuneScan scan;
  scan.points = parallel_map<ScanPoint>(
      static_cast<std::size_t>(steps), [&](std::size_t i) {
        double x = 0.0;
        if (steps > 1)
          x = -window + 2.0 * window * static_cast<double>(i) /
                            static_cast<double>(steps - 1);
        ModelConfig point = config;
        point.delta_s = config.delta_c + x;
        const double z = sector_diag_average(point, point.initial_m);
        return ScanPoint{x, z, std::abs(z - expected)};
      });
  double lo = scan.points[0].residual, hi = scan.points[0].residual;
  for (std::size_t i = 0; i < scan.points.size(); ++i) {
    lo = std::min(lo, scan.points[i].residual);
    hi = std::max(hi, scan.points[i].residual);
    if (scan.points[i].residual < scan.points[scan.best].residual)
      scan.best = i;
  }
  scan.degenerate = (hi - lo) <= 1e-12;
  return scan;
}

std::vector<SweepPoint> gamma_sweep(const ModelConfig& config,
                                    const std::vector<double>& gammas,
                                    const RunParams& params) {
  config.validate();
  if (config.coupling_kind == CouplingKind::Gue)
    throw DomainError("gamma_sweep: applies to the star model family");
  for (double g : gammas)
    if (!(g >= 0.0)) throw DomainError("gamma_sweep: gamma values must be >= 0");
  const double expected = expected_inversion(config.n_env, config.k);
  return parallel_map<SweepPoint>(
      gammas.size(), [&](std::size_t i) {
        ModelConfig point = config;
        point.gamma = gammas[i];
        point.coupling_kind =
            gammas[i] > 0.0 ? CouplingKind::RingStar : CouplingKind::Star;
        ScenarioResult r = run_scenario(point, params);
        return SweepPoint{gammas[i], r.summary.z_numeric,
                          std::abs(r.summary.z_numeric - expected),
                          r.summary.fluctuation};
      });
}

EnsembleResult ensemble_histogram(const ModelConfig& config,
                                  int n_realizations, double bin_width) {
  config.validate();
  if (n_realizations < 1)
    throw UsageError("ensemble_histogram: need at least one realization");
  auto samples = parallel_map<Eigen::VectorXd>(
      static_cast<std::size_t>(n_realizations), [&](std::size_t r) {
        try {
          ModelConfig real = config;
          real.seed = derive_seed(config.seed, r);
          AssembledModel model = assemble_projected(real);
          EigenSystem eig = eigendecompose(model.h_total);
          return eigenstate_lambdas(eig);
        } catch (const Error& e) {
          throw PropagationError("ensemble_histogram: realization " +
                                 std::to_string(r) + ": " + e.what());
        }
      });
  EnsembleResult out;
  Index total = 0;
  for (const auto& s : samples) total += s.size();
  out.values.resize(total);
  Index at = 0;
  for (const auto& s : samples) {
    out.values.segment(at, s.size()) = s;
    at += s.size();
  }
  out.hist = histogram(out.values, bin_width);
  out.stats.mean = out.values.mean();
  out.stats.stddev =
      std::sqrt((out.values.array() - out.stats.mean).square().mean());
  out.stats.mass_below =
      static_cast<double>((out.values.array() < -0.95).count()) /
      static_cast<double>(total);
  return out;
}

DualityResult duality_run(const ModelConfig& config, DualityMode mode,
                          const RunParams& params) {
  config.validate();
  if (config.coupling_kind == CouplingKind::Gue)
    throw DomainError("duality_run: applies to the structured model family");
  DualityResult out;
  if (mode == DualityMode::Physical) {
    out.original = run_scenario(config, params);
    ModelConfig dual = config;
    dual.k = config.n_env - 1 - config.k;
    dual.seed = derive_seed(config.seed, 0xd0a1);
    out.dual = run_scenario(dual, params);
  } else {
    RunParams exact = params;
    exact.method = Method::Exact;
    out.original = run_scenario(config, exact);

    // The dual eigensystem is the exact image of the original one under the
    // global flip permutation, so the two trajectories mirror to rounding.
    AssembledModel model = assemble(config);
    EigenSystem eig = eigendecompose(model.h_total, params.dense_cap);
    EigenSystem dual_eig;
    dual_eig.tag = eig.tag;
    dual_eig.eigenvalues = eig.eigenvalues;
    const Index d = eig.tag.dim();
    const Index mask = d - 1;
    dual_eig.eigenvectors.resize(d, d);
    for (Index r = 0; r < d; ++r)
      dual_eig.eigenvectors.row(r ^ mask) = eig.eigenvectors.row(r);

    OperatorMatrix h_dual = conjugate_by_global_flip(model.h_total);
    PureState psi0 = make_initial_state(config, model.h_total.tag());
    PureState psi0_dual = apply_global_flip(psi0);

    ScenarioResult dual;
    dual.config = config;
    dual.params = exact;
    dual.resolved_method = Method::Exact;
    dual.t_max = out.original.t_max;
    const auto times = time_grid(dual.t_max, params.samples);
    TrajectoryBuilder builder(h_dual, psi0_dual.tag, times);
    propagate_exact(dual_eig, psi0_dual, times,
                    [&](Index i, const Eigen::Ref<const Vector>& v) {
                      builder.add(i, v);
                    });
    dual.trajectory = builder.take();
    dual.summary.z_diag = diagonal_ensemble_average(dual_eig, psi0_dual);
    const TimeAverage avg = numeric_time_average(dual.trajectory, exact.discard);
    dual.summary.z_numeric = avg.mean.z;
    dual.summary.z_numeric_full =
        numeric_time_average(dual.trajectory, 0.0).mean.z;
    dual.summary.fluctuation = avg.deviation.z;
    dual.summary.z_stderr = avg.z_stderr;
    dual.summary.expected =
        expected_inversion(config.n_env, config.n_env - 1 - config.k);
    dual.summary.residual =
        std::abs(dual.summary.z_diag - dual.summary.expected);
    out.dual = std::move(dual);
  }
  double worst = 0;
  const auto& a = out.original.trajectory.bloch;
  const auto& b = out.dual.trajectory.bloch;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
    worst = std::max(worst, std::abs(a[i].z + b[i].z));
  out.max_pointwise_sum = worst;
  return out;
}

// --- config and CSV plumbing ---

std::string to_string(CouplingKind kind) {
  switch (kind) {
    case CouplingKind::Gue:
      return "gue";
    case CouplingKind::Star:
      return "star";
    default:
      return "ring_star";
  }
}

std::string to_string(RingKind kind) {
  switch (kind) {
    case RingKind::IsingXX:
      return "ising_xx";
    case RingKind::XY:
      return "xy";
    case RingKind::Heisenberg:
      return "heisenberg";
    default:
      return "ising_zz";
  }
}

std::string to_string(InitialStateKind kind) {
  return kind == InitialStateKind::Up ? "up" : "superposition";
}

std::string to_string(Method method) {
  switch (method) {
    case Method::Auto:
      return "auto";
    case Method::Projected:
      return "projected";
    case Method::Exact:
      return "exact";
    default:
      return "krylov";
  }
}

namespace {

std::string lowered(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(
      static_cast<unsigned char>(c)));
  return s;
}

[[noreturn]] void bad_value(const std::string& what, const std::string& got) {
  throw ConfigError("unrecognized " + what + " '" + got + "'");
}

}  // namespace

CouplingKind parse_coupling_kind(const std::string& s) {
  const std::string v = lowered(s);
  if (v == "gue") return CouplingKind::Gue;
  if (v == "star") return CouplingKind::Star;
  if (v == "ring_star" || v == "ringstar") return CouplingKind::RingStar;
  bad_value("coupling_kind", s);
}

RingKind parse_ring_kind(const std::string& s) {
  const std::string v = lowered(s);
  if (v == "ising_xx") return RingKind::IsingXX;
  if (v == "xy") return RingKind::XY;
  if (v == "heisenberg") return RingKind::Heisenberg;
  if (v == "ising_zz") return RingKind::IsingZZ;
  bad_value("ring_kind", s);
}

InitialStateKind parse_initial_kind(const std::string& s) {
  const std::string v = lowered(s);
  if (v == "up") return InitialStateKind::Up;
  if (v == "superposition") return InitialStateKind::Superposition;
  bad_value("central_init", s);
}

Method parse_method(const std::string& s) {
  const std::string v = lowered(s);
  if (v == "auto") return Method::Auto;
  if (v == "projected") return Method::Projected;
  if (v == "exact") return Method::Exact;
  if (v == "krylov") return Method::Krylov;
  bad_value("method", s);
}

namespace {

std::string trimmed(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    long long out = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + v +
                      "'");
  }
}

double parse_real(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double out = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
  }
}

}  // namespace

ModelConfig parse_config_text(const std::string& text) {
  ModelConfig config;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const std::string stripped = trimmed(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("malformed config line: '" + stripped + "'");
    const std::string key = trimmed(stripped.substr(0, eq));
    const std::string value = trimmed(stripped.substr(eq + 1));
    if (key == "n_env")
      config.n_env = static_cast<int>(parse_int(key, value));
    else if (key == "k")
      config.k = static_cast<int>(parse_int(key, value));
    else if (key == "delta_c")
      config.delta_c = parse_real(key, value);
    else if (key == "delta_s")
      config.delta_s = parse_real(key, value);
    else if (key == "alpha")
      config.alpha = parse_real(key, value);
    else if (key == "gamma")
      config.gamma = parse_real(key, value);
    else if (key == "coupling_kind")
      config.coupling_kind = parse_coupling_kind(value);
    else if (key == "ring_kind")
      config.ring_kind = parse_ring_kind(value);
    else if (key == "central_init")
      config.central_init = parse_initial_kind(value);
    else if (key == "initial_m")
      config.initial_m = static_cast<int>(parse_int(key, value));
    else if (key == "seed")
      config.seed = static_cast<std::uint64_t>(parse_int(key, value));
    else
      throw ConfigError("unknown config key '" + key + "'");
  }
  config.validate();
  return config;
}

ModelConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string config_to_text(const ModelConfig& c) {
  std::ostringstream out;
  out << "n_env = " << c.n_env << "\n"
      << "k = " << c.k << "\n"
      << "delta_c = " << format_number(c.delta_c) << "\n"
      << "delta_s = " << format_number(c.delta_s) << "\n"
      << "alpha = " << format_number(c.alpha) << "\n"
      << "gamma = " << format_number(c.gamma) << "\n"
      << "coupling_kind = " << to_string(c.coupling_kind) << "\n"
      << "ring_kind = " << to_string(c.ring_kind) << "\n"
      << "central_init = " << to_string(c.central_init) << "\n"
      << "initial_m = " << c.initial_m << "\n"
      << "seed = " << c.seed << "\n";
  return out.str();
}

std::string format_number(double v) {
  char buf[40];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
  }
  return std::string(buf, end);
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  auto out = open_out(path);
  out << "t,sx,sy,sz,energy,norm\n";
  for (std::size_t i = 0; i < traj.size(); ++i)
    out << format_number(traj.times[i]) << ',' << format_number(traj.bloch[i].x)
        << ',' << format_number(traj.bloch[i].y) << ','
        << format_number(traj.bloch[i].z) << ','
        << format_number(traj.energy[i]) << ',' << format_number(traj.norm[i])
        << '\n';
  finish(out, path);
}

void write_histogram_csv(const Histogram& hist, const std::string& path) {
  auto out = open_out(path);
  out << "bin_center,count\n";
  for (std::size_t i = 0; i < hist.centers.size(); ++i)
    out << format_number(hist.centers[i]) << ',' << hist.counts[i] << '\n';
  finish(out, path);
}

void write_scan_csv(const std::vector<ScanPoint>& points,
                    const std::string& path) {
  auto out = open_out(path);
  out << "param,z_avg,residual\n";
  for (const auto& p : points)
    out << format_number(p.param) << ',' << format_number(p.z_avg) << ','
        << format_number(p.residual) << '\n';
  finish(out, path);
}

void write_sweep_csv(const std::vector<SweepPoint>& points,
                     const std::string& path) {
  auto out = open_out(path);
  out << "param,z_avg,residual,std\n";
  for (const auto& p : points)
    out << format_number(p.gamma) << ',' << format_number(p.z_avg) << ','
        << format_number(p.residual) << ',' << format_number(p.fluctuation)
        << '\n';
  finish(out, path);
}

void write_thermo_csv(const std::vector<SpectralPoint>& table,
                      const std::string& path) {
  auto out = open_out(path);
  out << "k,beta,inversion\n";
  for (const auto& p : table)
    out << p.k << ',' << format_number(p.beta) << ','
        << format_number(p.inversion) << '\n';
  finish(out, path);
}

void write_manifest(const ModelConfig& config, const ScenarioResult* result,
                    const std::map<std::string, std::string>& extra,
                    const std::string& path) {
  auto out = open_out(path);
  out << config_to_text(config);
  if (result) {
    out << "t_max = " << format_number(result->t_max) << "\n"
        << "samples = " << result->params.samples << "\n"
        << "discard = " << format_number(result->params.discard) << "\n"
        << "method = " << to_string(result->resolved_method) << "\n"
        << "z_numeric = " << format_number(result->summary.z_numeric) << "\n"
        << "z_numeric_full = "
        << format_number(result->summary.z_numeric_full) << "\n"
        << "z_diag = " << format_number(result->summary.z_diag) << "\n"
        << "fluctuation = " << format_number(result->summary.fluctuation)
        << "\n"
        << "expected = " << format_number(result->summary.expected) << "\n"
        << "residual = " << format_number(result->summary.residual) << "\n";
  }
  for (const auto& [key, value] : extra) out << key << " = " << value << "\n";
  finish(out, path);
}

}  // namespace spinbath
