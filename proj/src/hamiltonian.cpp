#include "spinbath/hamiltonian.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace spinbath {

namespace {

constexpr int kAxisX = 0;
constexpr int kAxisY = 1;
constexpr int kAxisZ = 2;

// sigma_axis acting on one bit of a product state: returns the image index
// and the amplitude factor. Bit set means sigma_z = +1.
std::pair<BasisIndex, Complex> apply_pauli(BasisIndex bits, int bit_pos,
                                           int axis) {
  const BasisIndex mask = BasisIndex{1} << bit_pos;
  const bool up = (bits & mask) != 0;
  switch (axis) {
    case kAxisX:
      return {bits ^ mask, Complex(1, 0)};
    case kAxisY:
      return {bits ^ mask, Complex(0, up ? -1.0 : 1.0)};
    default:
      return {bits, Complex(up ? 1.0 : -1.0, 0)};
  }
}

double zeeman_energy(const ModelConfig& c, BasisIndex bits) {
  SpinConfiguration conf{bits, c.n_env};
  return 0.5 * c.delta_s * conf.central() +
         0.5 * c.delta_c * (2 * conf.env_weight() - c.n_env);
}

struct TwoSiteTerm {
  int bit_a;
  int axis_a;
  int bit_b;
  int axis_b;
  double strength;
};

std::vector<TwoSiteTerm> star_terms(const StarCoefficients& coeffs,
                                    double alpha) {
  std::vector<TwoSiteTerm> terms;
  terms.reserve(static_cast<std::size_t>(9 * coeffs.n_env));
  for (int nu = 0; nu < coeffs.n_env; ++nu)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        terms.push_back({0, i, 1 + nu, j, alpha * coeffs.at(nu, i, j)});
  return terms;
}

std::vector<int> ring_axes(RingKind kind) {
  switch (kind) {
    case RingKind::IsingXX:
      return {kAxisX};
    case RingKind::XY:
      return {kAxisX, kAxisY};
    case RingKind::Heisenberg:
      return {kAxisX, kAxisY, kAxisZ};
    default:
      return {kAxisZ};
  }
}

std::vector<TwoSiteTerm> ring_terms(int n_env, double gamma_abs,
                                    RingKind kind) {
  if (n_env < 3)
    throw DomainError("ring_coupling: a ring needs n_env >= 3, got " +
                      std::to_string(n_env));
  std::vector<TwoSiteTerm> terms;
  for (int axis : ring_axes(kind))
    for (int nu = 0; nu < n_env; ++nu)
      terms.push_back({1 + nu, axis, 1 + (nu + 1) % n_env, axis, gamma_abs});
  return terms;
}

OperatorMatrix terms_to_full(const std::vector<TwoSiteTerm>& terms,
                             const BasisTag& tag) {
  std::vector<Triplet> entries;
  const Index d = tag.dim();
  entries.reserve(terms.size() * static_cast<std::size_t>(d));
  for (const auto& t : terms) {
    if (t.strength == 0.0) continue;
    for (Index col = 0; col < d; ++col) {
      auto [mid, pb] =
          apply_pauli(static_cast<BasisIndex>(col), t.bit_b, t.axis_b);
      auto [row, pa] = apply_pauli(mid, t.bit_a, t.axis_a);
      entries.emplace_back(static_cast<Index>(row), col,
                           t.strength * pa * pb);
    }
  }
  return OperatorMatrix::from_triplets(tag, entries);
}

Matrix terms_to_subspace(const std::vector<TwoSiteTerm>& terms,
                         const AccessibleSubspace& sub) {
  const Index d = sub.dim();
  const auto& members = sub.members();
  Matrix block = Matrix::Zero(d, d);
  for (const auto& t : terms) {
    if (t.strength == 0.0) continue;
    for (Index col = 0; col < d; ++col) {
      auto [mid, pb] = apply_pauli(members[static_cast<std::size_t>(col)],
                                   t.bit_b, t.axis_b);
      auto [row_bits, pa] = apply_pauli(mid, t.bit_a, t.axis_a);
      Index row = sub.position_of(row_bits);
      if (row >= 0) block(row, col) += t.strength * pa * pb;
    }
  }
  return block;
}

}  // namespace

void ModelConfig::validate() const {
  if (n_env < 1 || n_env > 30)
    throw ConfigError("n_env must be in [1, 30], got " + std::to_string(n_env));
  if (k < 0 || k >= n_env)
    throw ConfigError("k must satisfy 0 <= k <= n_env-1, got k=" +
                      std::to_string(k));
  if (!(delta_c > 0.0))
    throw ConfigError("delta_c must be positive");
  double ratio = delta_s / delta_c;
  if (!(ratio > 0.9 && ratio < 1.1))
    throw ConfigError("delta_s/delta_c = " + std::to_string(ratio) +
                      " is outside the near-resonant window (0.9, 1.1)");
  if (!(alpha >= 0.0))
    throw ConfigError("alpha must be non-negative");
  if (!(gamma >= 0.0))
    throw ConfigError("gamma must be non-negative");
  std::uint64_t band = binomial(n_env, k);
  if (initial_m < 0 || static_cast<std::uint64_t>(initial_m) >= band)
    throw ConfigError("initial_m must index a band-k member: 0 <= m < " +
                      std::to_string(band));
}

StarCoefficients StarCoefficients::sample(int n_env, Rng& rng) {
  if (n_env < 1) throw DomainError("StarCoefficients: n_env must be >= 1");
  StarCoefficients c;
  c.n_env = n_env;
  c.g.resize(static_cast<std::size_t>(9 * n_env));
  for (double& v : c.g) v = rng.normal();
  return c;
}

OperatorMatrix zeeman_hamiltonian(const ModelConfig& config) {
  config.validate();
  BasisTag tag = BasisTag::full_space(config.n_env);
  RealVector d(tag.dim());
  for (Index b = 0; b < tag.dim(); ++b)
    d[b] = zeeman_energy(config, static_cast<BasisIndex>(b));
  return OperatorMatrix::diagonal(std::move(tag), std::move(d));
}

Matrix sample_gue_matrix(Index dim, double scale, Rng& rng) {
  if (dim < 1) throw DomainError("sample_gue: dim must be >= 1");
  if (!(scale >= 0.0)) throw DomainError("sample_gue: negative scale");
  Matrix h(dim, dim);
  const double off = scale / std::sqrt(2.0);
  for (Index col = 0; col < dim; ++col) {
    for (Index row = 0; row < col; ++row) {
      Complex v(off * rng.normal(), off * rng.normal());
      h(row, col) = v;
      h(col, row) = std::conj(v);
    }
    h(col, col) = Complex(scale * rng.normal(), 0);
  }
  return h;
}

OperatorMatrix sample_gue(std::shared_ptr<const AccessibleSubspace> sub,
                          double scale, Rng& rng) {
  if (!sub) throw UsageError("sample_gue: null subspace");
  BasisTag tag = BasisTag::subspace(std::move(sub));
  Matrix h = sample_gue_matrix(tag.dim(), scale, rng);
  return OperatorMatrix::dense(std::move(tag), std::move(h));
}

OperatorMatrix star_coupling(const StarCoefficients& coeffs, double alpha) {
  if (coeffs.n_env < 1 ||
      coeffs.g.size() != static_cast<std::size_t>(9 * coeffs.n_env))
    throw UsageError("star_coupling: malformed coefficient set");
  BasisTag tag = BasisTag::full_space(coeffs.n_env);
  return terms_to_full(star_terms(coeffs, alpha), tag);
}

OperatorMatrix star_coupling(const ModelConfig& config, Rng& rng) {
  config.validate();
  return star_coupling(StarCoefficients::sample(config.n_env, rng),
                       config.alpha);
}

OperatorMatrix ring_coupling(int n_env, double gamma_abs, RingKind kind) {
  BasisTag tag = BasisTag::full_space(n_env);
  return terms_to_full(ring_terms(n_env, gamma_abs, kind), tag);
}

OperatorMatrix ring_coupling(const ModelConfig& config) {
  config.validate();
  return ring_coupling(config.n_env, config.gamma * config.alpha,
                       config.ring_kind);
}

AssembledModel assemble(const ModelConfig& config) {
  config.validate();
  if (config.coupling_kind == CouplingKind::Gue) return assemble_projected(config);
  auto sub =
      std::make_shared<const AccessibleSubspace>(config.n_env, config.k);
  Rng rng(config.seed);
  auto coeffs = StarCoefficients::sample(config.n_env, rng);
  OperatorMatrix h_free = zeeman_hamiltonian(config);
  OperatorMatrix h_total = h_free.add(star_coupling(coeffs, config.alpha));
  if (config.coupling_kind == CouplingKind::RingStar &&
      config.gamma * config.alpha != 0.0)
    h_total = h_total.add(ring_coupling(
        config.n_env, config.gamma * config.alpha, config.ring_kind));
  return {config, std::move(sub), std::move(h_total), std::move(h_free)};
}

AssembledModel assemble_projected(const ModelConfig& config) {
  config.validate();
  auto sub =
      std::make_shared<const AccessibleSubspace>(config.n_env, config.k);
  BasisTag tag = BasisTag::subspace(sub);
  Rng rng(config.seed);
  RealVector free_diag(sub->dim());
  const auto& members = sub->members();
  for (Index i = 0; i < sub->dim(); ++i)
    free_diag[i] = zeeman_energy(config, members[static_cast<std::size_t>(i)]);
  OperatorMatrix h_free = OperatorMatrix::diagonal(tag, free_diag);
  if (config.coupling_kind == CouplingKind::Gue) {
    Matrix h = sample_gue_matrix(sub->dim(), config.alpha, rng);
    h.diagonal() += free_diag.cast<Complex>();
    return {config, std::move(sub), OperatorMatrix::dense(tag, std::move(h)),
            std::move(h_free)};
  }
  auto coeffs = StarCoefficients::sample(config.n_env, rng);
  Matrix h = terms_to_subspace(star_terms(coeffs, config.alpha), *sub);
  if (config.coupling_kind == CouplingKind::RingStar &&
      config.gamma * config.alpha != 0.0)
    h += terms_to_subspace(
        ring_terms(config.n_env, config.gamma * config.alpha,
                   config.ring_kind),
        *sub);
  h.diagonal() += free_diag.cast<Complex>();
  return {config, std::move(sub), OperatorMatrix::dense(tag, std::move(h)),
          std::move(h_free)};
}

PureState make_initial_state(const ModelConfig& config, const BasisTag& tag) {
  config.validate();
  if (tag.n_env() != config.n_env)
    throw UsageError("make_initial_state: tag does not match config");
  PureState psi;
  psi.tag = tag;
  psi.amplitudes = Vector::Zero(tag.dim());
  if (config.central_init == InitialStateKind::Up) {
    if (tag.is_full()) {
      auto band = enumerate_band(config.n_env, config.k);
      BasisIndex full =
          (band[static_cast<std::size_t>(config.initial_m)] << 1) | 1u;
      psi.amplitudes[static_cast<Index>(full)] = Complex(1, 0);
    } else {
      if (tag.sub()->k() != config.k)
        throw UsageError("make_initial_state: subspace band does not match");
      // block 1 lists band k in the same order as enumerate_band
      psi.amplitudes[config.initial_m] = Complex(1, 0);
    }
  } else {
    if (!tag.is_full())
      throw UsageError(
          "make_initial_state: the central superposition leaves the "
          "accessible subspace; use a full-space tag");
    auto band = enumerate_band(config.n_env, config.k);
    BasisIndex env = band[static_cast<std::size_t>(config.initial_m)] << 1;
    const double amp = 1.0 / std::sqrt(2.0);
    psi.amplitudes[static_cast<Index>(env | 1u)] = amp;
    psi.amplitudes[static_cast<Index>(env)] = amp;
  }
  return psi;
}

}  // namespace spinbath
