#pragma once

#include <cstdint>
#include <vector>

#include "spinbath/hamiltonian.hpp"
#include "spinbath/operator_matrix.hpp"

namespace spinbath {

struct BlochVector {
  double x = 0;
  double y = 0;
  double z = 0;
};

// Reduced state of the central spin: 2x2 density matrix plus Bloch triple.
struct ReducedSpinState {
  Eigen::Matrix2cd rho;  // rows/cols ordered (up, down)
  BlochVector bloch;
};

// Partial trace over the environment. Subspace-tagged states are traced via
// their embedding, where the two blocks carry orthogonal environment
// sectors, so the off-diagonal elements vanish identically.
ReducedSpinState reduce_central(const PureState& psi);
ReducedSpinState reduce_central(const BasisTag& tag,
                                const Eigen::Ref<const Vector>& amplitudes);

// Full time series of single-spin observables along a propagation.
struct Trajectory {
  std::vector<double> times;
  std::vector<BlochVector> bloch;
  std::vector<double> energy;
  std::vector<double> norm;

  std::size_t size() const { return times.size(); }
  void check() const;  // times strictly increasing, energy drift bounded
};

struct TimeAverage {
  BlochVector mean;
  BlochVector deviation;   // population standard deviation per component
  double z_stderr = 0;     // batch-means standard error of the z mean
  std::size_t retained = 0;
};

// Arithmetic mean and fluctuation over samples with t >= discard * t_end.
// The z standard error comes from 8 equal consecutive batches.
TimeAverage numeric_time_average(const Trajectory& traj,
                                 double discard_fraction);

// Exact long-time average of central sigma_z: sum of |<e_n|psi0>|^2 times
// the eigenstate lambda, with degenerate eigenspaces handled by first
// diagonalizing the projected sigma_z inside each cluster (eigenvalues
// closer than 1e-10 * ||H|| count as one cluster).
double diagonal_ensemble_average(const EigenSystem& eig,
                                 const PureState& psi0);

// lambda_z of every eigenstate with the model metadata that produced it.
struct LambdaZSample {
  Eigen::VectorXd values;
  CouplingKind kind = CouplingKind::Gue;
  double gamma = 0;
  std::uint64_t seed = 0;
};

// lambda_z of every eigenstate: the z-Bloch component of its reduced state.
Eigen::VectorXd eigenstate_lambdas(const EigenSystem& eig);
LambdaZSample eigenstate_lambdas(const EigenSystem& eig,
                                 const ModelConfig& config);

struct Histogram {
  std::vector<double> centers;
  std::vector<std::uint64_t> counts;
};

// Half-open bins [lo + i*w, lo + (i+1)*w); samples outside the range are
// clamped into the boundary bins so the counts always partition the data.
Histogram histogram(const Eigen::VectorXd& values, double bin_width,
                    double lo = -1.0, double hi = 1.0);

}  // namespace spinbath
