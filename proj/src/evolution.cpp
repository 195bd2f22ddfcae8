#include "spinbath/evolution.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace spinbath {

std::vector<double> time_grid(double t_max, Index samples) {
  if (!(t_max > 0.0)) throw UsageError("time_grid: t_max must be positive");
  if (samples < 2) throw UsageError("time_grid: need at least 2 samples");
  std::vector<double> t(static_cast<std::size_t>(samples));
  const double dt = t_max / static_cast<double>(samples - 1);
  for (Index i = 0; i < samples; ++i)
    t[static_cast<std::size_t>(i)] = static_cast<double>(i) * dt;
  return t;
}

void propagate_exact(const EigenSystem& eig, const PureState& psi0,
                     const std::vector<double>& times,
                     const StateObserver& observe) {
  require_compatible(eig.tag, psi0.tag, "propagate_exact");
  psi0.check("propagate_exact");
  const Index d = eig.tag.dim();
  const Vector modes = eig.eigenvectors.adjoint() * psi0.amplitudes;
  constexpr Index kChunk = 256;
  Matrix phases(d, std::min<Index>(kChunk, static_cast<Index>(times.size())));
  Matrix block;
  for (std::size_t start = 0; start < times.size();
       start += static_cast<std::size_t>(kChunk)) {
    const Index m = static_cast<Index>(
        std::min(times.size() - start, static_cast<std::size_t>(kChunk)));
    for (Index j = 0; j < m; ++j) {
      const double t = times[start + static_cast<std::size_t>(j)];
      for (Index n = 0; n < d; ++n)
        phases(n, j) =
            std::polar(1.0, -eig.eigenvalues[n] * t) * modes[n];
    }
    block.noalias() = eig.eigenvectors * phases.leftCols(m);
    for (Index j = 0; j < m; ++j)
      observe(static_cast<Index>(start) + j, block.col(j));
  }
}

namespace {

struct LanczosResult {
  Index m = 0;           // basis size actually built
  bool exhausted = false;  // true when the Krylov space closed early
  RealVector alpha;
  RealVector beta;       // beta[j] couples v_j and v_{j+1}; beta[m-1] is the
                         // residual coupling out of the basis
};

// Lanczos with full reorthogonalization. basis must be d x max_dim;
// basis.col(0) holds the normalized start vector on entry.
LanczosResult lanczos(const OperatorMatrix& h, Matrix& basis, int max_dim) {
  const Index d = h.dim();
  LanczosResult r;
  r.alpha = RealVector::Zero(max_dim);
  r.beta = RealVector::Zero(max_dim);
  Vector w(d);
  double scale = 1.0;
  for (int j = 0; j < max_dim; ++j) {
    w.setZero();
    h.apply(basis.col(j), w);
    r.alpha[j] = basis.col(j).dot(w).real();
    w.noalias() -= r.alpha[j] * basis.col(j);
    if (j > 0) w.noalias() -= r.beta[j - 1] * basis.col(j - 1);
    // one full Gram-Schmidt sweep keeps the basis orthogonal in practice
    w.noalias() -= basis.leftCols(j + 1) *
                   (basis.leftCols(j + 1).adjoint() * w);
    scale = std::max({scale, std::abs(r.alpha[j])});
    double b = w.norm();
    r.beta[j] = b;
    r.m = j + 1;
    if (b <= 1e-13 * scale) {
      r.exhausted = true;
      return r;
    }
    scale = std::max(scale, b);
    if (j + 1 < max_dim) basis.col(j + 1) = w / b;
  }
  return r;
}

// exp(-i h T) e_1 for the tridiagonal projection, via its eigensystem.
Vector small_exponential(const LanczosResult& lz,
                         const Eigen::SelfAdjointEigenSolver<
                             Eigen::MatrixXd>& small_eig,
                         double h_step) {
  const Index m = lz.m;
  Eigen::VectorXd first = small_eig.eigenvectors().row(0).transpose();
  Vector rotated(m);
  for (Index i = 0; i < m; ++i)
    rotated[i] =
        std::polar(1.0, -small_eig.eigenvalues()[i] * h_step) * first[i];
  Vector u = small_eig.eigenvectors().cast<Complex>() * rotated;
  return u;
}

}  // namespace

void propagate_krylov(const OperatorMatrix& h, const PureState& psi0,
                      double dt, Index n_steps, const StateObserver& observe,
                      const KrylovOptions& options) {
  require_compatible(h.tag(), psi0.tag, "propagate_krylov");
  psi0.check("propagate_krylov");
  if (!(dt > 0.0)) throw UsageError("propagate_krylov: dt must be positive");
  if (n_steps < 1)
    throw UsageError("propagate_krylov: need at least one step");
  if (options.max_dim < 2 || options.max_dim > 200)
    throw UsageError("propagate_krylov: max_dim out of range");
  if (!(options.tol > 0.0))
    throw UsageError("propagate_krylov: tol must be positive");

  const Index d = h.dim();
  Matrix basis(d, options.max_dim);
  Vector psi = psi0.amplitudes;
  observe(0, psi);
  double h_guess = dt;

  for (Index step = 0; step < n_steps; ++step) {
    double remaining = dt;
    while (remaining > 0.0) {
      const double nrm = psi.norm();
      if (std::abs(nrm - 1.0) > options.norm_tol)
        throw PropagationError(
            "propagate_krylov: norm drifted to " + std::to_string(nrm) +
            " at step " + std::to_string(step));
      basis.col(0) = psi / nrm;
      LanczosResult lz = lanczos(h, basis, options.max_dim);
      Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(lz.m, lz.m);
      for (Index i = 0; i < lz.m; ++i) {
        tri(i, i) = lz.alpha[i];
        if (i + 1 < lz.m) tri(i, i + 1) = tri(i + 1, i) = lz.beta[i];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small_eig(tri);

      double h_step = std::min(h_guess, remaining);
      Vector u;
      if (lz.exhausted) {
        // invariant subspace: the projected evolution is exact
        u = small_exponential(lz, small_eig, h_step);
      } else {
        const double beta_res = lz.beta[lz.m - 1];
        int halvings = 0;
        for (;; ++halvings) {
          if (halvings > options.max_halvings)
            throw PropagationError(
                "propagate_krylov: step size underflow, no convergence at "
                "step " +
                std::to_string(step));
          u = small_exponential(lz, small_eig, h_step);
          const double err =
              beta_res * std::abs(u[lz.m - 1]) * h_step;
          const double budget = options.tol * (h_step / dt);
          if (err <= budget) {
            // grow cautiously when the step was comfortably accurate
            if (err < 0.1 * budget) h_guess = h_step * 1.5;
            break;
          }
          h_step *= 0.5;
        }
      }
      psi = nrm * (basis.leftCols(lz.m) * u);
      remaining -= h_step;
      if (remaining < 1e-12 * dt) remaining = 0.0;
    }
    observe(step + 1, psi);
  }
}

std::vector<PureState> propagate_exact(const EigenSystem& eig,
                                       const PureState& psi0,
                                       const std::vector<double>& times) {
  std::vector<PureState> out(times.size());
  propagate_exact(eig, psi0, times,
                  [&](Index i, const Eigen::Ref<const Vector>& v) {
                    out[static_cast<std::size_t>(i)] = PureState{psi0.tag, v};
                  });
  return out;
}

std::vector<PureState> propagate_krylov(const OperatorMatrix& h,
                                        const PureState& psi0, double dt,
                                        Index n_steps,
                                        const KrylovOptions& options) {
  std::vector<PureState> out(static_cast<std::size_t>(n_steps) + 1);
  propagate_krylov(h, psi0, dt, n_steps,
                   [&](Index i, const Eigen::Ref<const Vector>& v) {
                     out[static_cast<std::size_t>(i)] = PureState{psi0.tag, v};
                   },
                   options);
  return out;
}

}  // namespace spinbath
