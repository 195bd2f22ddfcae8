#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spinbath/evolution.hpp"
#include "spinbath/observables.hpp"
#include "spinbath/thermo.hpp"

namespace spinbath {

enum class Method { Auto, Projected, Exact, Krylov };

// Per-run knobs that are not part of the physical model.
struct RunParams {
  double t_max = 0;          // <= 0 resolves to 60 / alpha (in 1/delta_c)
  Index samples = 4096;
  double discard = 0.1;
  Method method = Method::Auto;
  Index dense_cap = 8192;
  KrylovOptions krylov;
};

struct ScenarioSummary {
  double z_numeric = 0;        // time average after discard
  double z_numeric_full = 0;   // no-discard time average
  double z_diag = 0;           // diagonal-ensemble (infinite-time) average
  double fluctuation = 0;      // std of z over retained samples
  double z_stderr = 0;         // batch-means standard error of z_numeric
  double expected = 0;         // thermo prediction for (n_env, k)
  double residual = 0;         // |z_diag - expected|
};

struct ScenarioResult {
  ModelConfig config;
  RunParams params;
  Method resolved_method = Method::Auto;
  double t_max = 0;
  Trajectory trajectory;
  ScenarioSummary summary;
  std::optional<std::string> trajectory_path;
};

// Runs one relaxation scenario. Auto picks subspace-exact propagation for
// the GUE kind and full-space Krylov for the structured kinds; Projected
// forces the subspace compression (the cheap path used by scans), Exact a
// full-space dense eigendecomposition.
ScenarioResult run_scenario(const ModelConfig& config,
                            const RunParams& params = {});

struct ScanPoint {
  double param = 0;
  double z_avg = 0;
  double residual = 0;
};

struct DetuneScan {
  std::vector<ScanPoint> points;  // param = delta_s - delta_c
  std::size_t best = 0;
  bool degenerate = false;  // all residuals equal within 1e-12
};

// Diagonal-ensemble z-average as a function of the detuning delta_s -
// delta_c over [-window, +window], and the detuning minimizing the residual
// against the thermo prediction. A zero-width window collapses to a single
// point. Couplings are redrawn identically at each point (same seed).
DetuneScan detune_scan(const ModelConfig& config, double window = 0.002,
                       int steps = 21);

struct SweepPoint {
  double gamma = 0;
  double z_avg = 0;
  double residual = 0;
  double fluctuation = 0;
};

// Scenario summaries for a list of intra-bath strengths gamma (in units of
// alpha), at fixed star-coupling seed so only gamma varies. Defaults to the
// projected path; pass params to override.
std::vector<SweepPoint> gamma_sweep(const ModelConfig& config,
                                    const std::vector<double>& gammas,
                                    const RunParams& params = {
                                        .method = Method::Projected});

struct EnsembleStats {
  double mean = 0;
  double stddev = 0;
  double mass_below = 0;  // fraction of values below -0.95
};

struct EnsembleResult {
  Eigen::VectorXd values;  // concatenated lambda_z over realizations
  Histogram hist;
  EnsembleStats stats;
};

// lambda_z statistics over n_realizations independent draws of the model
// couplings (seed stream derived from config.seed), each diagonalizing the
// subspace-projected Hamiltonian.
EnsembleResult ensemble_histogram(const ModelConfig& config,
                                  int n_realizations,
                                  double bin_width = 0.02);

enum class DualityMode { Exact, Physical };

struct DualityResult {
  ScenarioResult original;
  ScenarioResult dual;
  double max_pointwise_sum = 0;  // max_t |<sz>(t) + <sz>_dual(t)|
};

// Exact mode conjugates the assembled Hamiltonian by the global spin flip
// and evolves the flipped initial state, so the dual z-trajectory is the
// exact negative. Physical mode re-runs the model family at the mirror
// band index n_env-1-k with fresh couplings.
DualityResult duality_run(const ModelConfig& config, DualityMode mode,
                          const RunParams& params = {});

// --- config and CSV plumbing ---

std::string to_string(CouplingKind kind);
std::string to_string(RingKind kind);
std::string to_string(InitialStateKind kind);
std::string to_string(Method method);
CouplingKind parse_coupling_kind(const std::string& s);
RingKind parse_ring_kind(const std::string& s);
InitialStateKind parse_initial_kind(const std::string& s);
Method parse_method(const std::string& s);

// Flat key = value text file; keys mirror the ModelConfig fields.
ModelConfig parse_config_text(const std::string& text);
ModelConfig load_config_file(const std::string& path);
std::string config_to_text(const ModelConfig& config);

std::string format_number(double v);  // shortest round-trip decimal form

void write_trajectory_csv(const Trajectory& traj, const std::string& path);
void write_histogram_csv(const Histogram& hist, const std::string& path);
void write_scan_csv(const std::vector<ScanPoint>& points,
                    const std::string& path);
void write_sweep_csv(const std::vector<SweepPoint>& points,
                     const std::string& path);
void write_thermo_csv(const std::vector<SpectralPoint>& table,
                      const std::string& path);
void write_manifest(const ModelConfig& config, const ScenarioResult* result,
                    const std::map<std::string, std::string>& extra,
                    const std::string& path);

}  // namespace spinbath
