#pragma once

#include <functional>
#include <vector>

#include "spinbath/operator_matrix.hpp"

namespace spinbath {

// Called once per requested sample with its index and the state amplitudes.
using StateObserver =
    std::function<void(Index, const Eigen::Ref<const Vector>&)>;

// Uniform sample grid t_i = i * (t_max / (samples - 1)), i = 0..samples-1.
std::vector<double> time_grid(double t_max, Index samples);

// Evolves through the spectral decomposition: psi(t) = V exp(-i L t) V^+ psi0.
// Exact up to the eigendecomposition; cost is one dense multiply per chunk.
void propagate_exact(const EigenSystem& eig, const PureState& psi0,
                     const std::vector<double>& times,
                     const StateObserver& observe);

struct KrylovOptions {
  int max_dim = 30;        // Lanczos basis size per sub-step
  double tol = 1e-9;       // error budget per unit outer step
  double norm_tol = 1e-10; // admissible norm drift before failing
  int max_halvings = 40;
};

// Short-iterative-Lanczos propagator for large sparse Hamiltonians.
// Takes uniform outer steps dt and adapts internal sub-steps so the
// accumulated error estimate stays within tol per outer step. The observer
// sees sample 0 (the initial state) and one sample after each outer step.
void propagate_krylov(const OperatorMatrix& h, const PureState& psi0,
                      double dt, Index n_steps, const StateObserver& observe,
                      const KrylovOptions& options = {});

// Convenience wrappers collecting the full sequence of states.
std::vector<PureState> propagate_exact(const EigenSystem& eig,
                                       const PureState& psi0,
                                       const std::vector<double>& times);
std::vector<PureState> propagate_krylov(const OperatorMatrix& h,
                                        const PureState& psi0, double dt,
                                        Index n_steps,
                                        const KrylovOptions& options = {});

}  // namespace spinbath
