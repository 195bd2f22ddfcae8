#include "spinbath/observables.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace spinbath {

namespace {

// sigma_z of the central spin as a +1/-1 pattern over basis positions
RealVector central_sigma_z_diag(const BasisTag& tag) {
  RealVector d(tag.dim());
  if (tag.is_full()) {
    for (Index i = 0; i < tag.dim(); ++i) d[i] = (i & 1) ? 1.0 : -1.0;
  } else {
    const Index up = tag.sub()->block1_dim();
    for (Index i = 0; i < tag.dim(); ++i) d[i] = i < up ? 1.0 : -1.0;
  }
  return d;
}

void check_reduced(const ReducedSpinState& r) {
  const double trace = std::abs(r.rho.trace().real() - 1.0) +
                       std::abs(r.rho.trace().imag());
  if (trace > 1e-10)
    throw UsageError("reduce_central: trace deviates from 1");
  if (std::abs(r.rho(0, 1) - std::conj(r.rho(1, 0))) > 1e-12)
    throw UsageError("reduce_central: result not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(r.rho);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw UsageError("reduce_central: negative population");
  const double len = std::sqrt(r.bloch.x * r.bloch.x + r.bloch.y * r.bloch.y +
                               r.bloch.z * r.bloch.z);
  if (len > 1.0 + 1e-9)
    throw UsageError("reduce_central: Bloch vector longer than 1");
}

}  // namespace

ReducedSpinState reduce_central(const BasisTag& tag,
                                const Eigen::Ref<const Vector>& a) {
  if (a.size() != tag.dim())
    throw UsageError("reduce_central: amplitude size does not match basis");
  if (std::abs(a.norm() - 1.0) > 1e-8)
    throw UsageError("reduce_central: state is not normalized");
  ReducedSpinState out;
  double up = 0, down = 0;
  Complex cross(0, 0);  // <up| rho |down> = sum_env psi_up conj(psi_down)
  if (tag.is_full()) {
    for (Index e = 0; e < tag.dim() / 2; ++e) {
      const Complex au = a[2 * e + 1];
      const Complex ad = a[2 * e];
      up += std::norm(au);
      down += std::norm(ad);
      cross += au * std::conj(ad);
    }
  } else {
    const Index b1 = tag.sub()->block1_dim();
    up = a.head(b1).squaredNorm();
    down = a.tail(tag.dim() - b1).squaredNorm();
    // the two blocks live on disjoint environment bands: no coherence
  }
  out.rho << Complex(up, 0), cross, std::conj(cross), Complex(down, 0);
  out.bloch.x = 2.0 * cross.real();
  out.bloch.y = -2.0 * cross.imag();
  out.bloch.z = up - down;
  check_reduced(out);
  return out;
}

ReducedSpinState reduce_central(const PureState& psi) {
  return reduce_central(psi.tag, psi.amplitudes);
}

void Trajectory::check() const {
  if (bloch.size() != times.size() || energy.size() != times.size() ||
      norm.size() != times.size())
    throw UsageError("Trajectory: column lengths differ");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw UsageError("Trajectory: times not strictly increasing");
  if (!energy.empty()) {
    const double e0 = energy.front();
    const double bound = 1e-8 * std::abs(e0) + 1e-10;
    for (double e : energy)
      if (std::abs(e - e0) > bound)
        throw PropagationError("Trajectory: energy drift " +
                               std::to_string(std::abs(e - e0)) +
                               " exceeds bound " + std::to_string(bound));
  }
}

TimeAverage numeric_time_average(const Trajectory& traj,
                                 double discard_fraction) {
  if (discard_fraction < 0.0 || discard_fraction >= 1.0)
    throw UsageError("numeric_time_average: discard fraction must be in [0,1)");
  if (traj.times.empty())
    throw UsageError("numeric_time_average: empty trajectory");
  const double cutoff = discard_fraction * traj.times.back();
  std::size_t first = 0;
  while (first < traj.times.size() && traj.times[first] < cutoff) ++first;
  const std::size_t n = traj.times.size() - first;
  if (n < 100)
    throw UsageError("numeric_time_average: only " + std::to_string(n) +
                     " samples retained, need at least 100");
  TimeAverage out;
  out.retained = n;
  double sx = 0, sy = 0, sz = 0;
  for (std::size_t i = first; i < traj.times.size(); ++i) {
    sx += traj.bloch[i].x;
    sy += traj.bloch[i].y;
    sz += traj.bloch[i].z;
  }
  out.mean = {sx / n, sy / n, sz / n};
  double vx = 0, vy = 0, vz = 0;
  for (std::size_t i = first; i < traj.times.size(); ++i) {
    vx += std::pow(traj.bloch[i].x - out.mean.x, 2);
    vy += std::pow(traj.bloch[i].y - out.mean.y, 2);
    vz += std::pow(traj.bloch[i].z - out.mean.z, 2);
  }
  out.deviation = {std::sqrt(vx / n), std::sqrt(vy / n), std::sqrt(vz / n)};

  constexpr std::size_t kBatches = 8;
  const std::size_t per = n / kBatches;
  if (per >= 1) {
    double means[kBatches];
    for (std::size_t b = 0; b < kBatches; ++b) {
      double acc = 0;
      for (std::size_t i = 0; i < per; ++i)
        acc += traj.bloch[first + b * per + i].z;
      means[b] = acc / static_cast<double>(per);
    }
    double m = 0;
    for (double v : means) m += v;
    m /= kBatches;
    double var = 0;
    for (double v : means) var += (v - m) * (v - m);
    var /= (kBatches - 1);
    out.z_stderr = std::sqrt(var / kBatches);
  }
  return out;
}

double diagonal_ensemble_average(const EigenSystem& eig,
                                 const PureState& psi0) {
  require_compatible(eig.tag, psi0.tag, "diagonal_ensemble_average");
  psi0.check("diagonal_ensemble_average");
  const Index d = eig.tag.dim();
  const Vector weights_amp = eig.eigenvectors.adjoint() * psi0.amplitudes;
  const RealVector sz = central_sigma_z_diag(eig.tag);
  const double scale =
      std::max(std::abs(eig.eigenvalues[0]), std::abs(eig.eigenvalues[d - 1]));
  const double gap_tol = 1e-10 * std::max(scale, 1e-300);

  double total = 0;
  Index start = 0;
  while (start < d) {
    Index stop = start + 1;
    while (stop < d &&
           eig.eigenvalues[stop] - eig.eigenvalues[stop - 1] <= gap_tol)
      ++stop;
    if (stop - start == 1) {
      const auto col = eig.eigenvectors.col(start);
      const double lambda = (sz.array() * col.array().abs2()).sum();
      total += std::norm(weights_amp[start]) * lambda;
    } else {
      // degenerate cluster: diagonalize sigma_z within the eigenspace
      const Index m = stop - start;
      const auto block = eig.eigenvectors.middleCols(start, m);
      Matrix proj = block.adjoint() * sz.asDiagonal() * block;
      Eigen::SelfAdjointEigenSolver<Matrix> es(proj);
      const Vector rotated =
          es.eigenvectors().adjoint() * weights_amp.segment(start, m);
      for (Index i = 0; i < m; ++i)
        total += std::norm(rotated[i]) * es.eigenvalues()[i];
    }
    start = stop;
  }
  return total;
}

Eigen::VectorXd eigenstate_lambdas(const EigenSystem& eig) {
  const RealVector sz = central_sigma_z_diag(eig.tag);
  const Index d = eig.tag.dim();
  Eigen::VectorXd out(d);
  for (Index n = 0; n < d; ++n) {
    const auto col = eig.eigenvectors.col(n);
    double v = (sz.array() * col.array().abs2()).sum();
    if (v > 1.0 && v < 1.0 + 1e-9) v = 1.0;
    if (v < -1.0 && v > -1.0 - 1e-9) v = -1.0;
    out[n] = v;
  }
  return out;
}

LambdaZSample eigenstate_lambdas(const EigenSystem& eig,
                                 const ModelConfig& config) {
  LambdaZSample s;
  s.values = eigenstate_lambdas(eig);
  s.kind = config.coupling_kind;
  s.gamma = config.gamma;
  s.seed = config.seed;
  return s;
}

Histogram histogram(const Eigen::VectorXd& values, double bin_width,
                    double lo, double hi) {
  if (!(bin_width > 0.0)) throw UsageError("histogram: bin_width must be > 0");
  if (!(hi > lo)) throw UsageError("histogram: empty range");
  const auto nbins = static_cast<std::size_t>(
      std::ceil((hi - lo) / bin_width - 1e-9));
  Histogram h;
  if (values.size() == 0) return h;
  h.centers.resize(nbins);
  h.counts.assign(nbins, 0);
  for (std::size_t i = 0; i < nbins; ++i)
    h.centers[i] = lo + (static_cast<double>(i) + 0.5) * bin_width;
  for (Index i = 0; i < values.size(); ++i) {
    auto bin = static_cast<std::ptrdiff_t>(
        std::floor((values[i] - lo) / bin_width));
    bin = std::clamp<std::ptrdiff_t>(bin, 0,
                                     static_cast<std::ptrdiff_t>(nbins) - 1);
    ++h.counts[static_cast<std::size_t>(bin)];
  }
  return h;
}

}  // namespace spinbath
