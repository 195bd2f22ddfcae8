#include <doctest.h>

#include <cmath>
#include <memory>

#include "spinbath/hamiltonian.hpp"
#include "spinbath/rng.hpp"

using namespace spinbath;

namespace {

// Full-space sigma_z sum; include_central adds bit 0.
OperatorMatrix magnetization(int n_env, bool include_central) {
  auto tag = BasisTag::full_space(n_env);
  RealVector d(tag.dim());
  for (Index idx = 0; idx < tag.dim(); ++idx) {
    int m = 0;
    for (int b = include_central ? 0 : 1; b <= n_env; ++b)
      m += (idx >> b) & 1 ? +1 : -1;
    d[idx] = m;
  }
  return OperatorMatrix::diagonal(tag, d);
}

double commutator_norm(const OperatorMatrix& a, const OperatorMatrix& b) {
  Matrix am = a.to_dense();
  Matrix bm = b.to_dense();
  return (am * bm - bm * am).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_SUITE("hamiltonian") {

TEST_CASE("config validation") {
  ModelConfig config;
  CHECK_NOTHROW(config.validate());

  auto bad = config;
  bad.n_env = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = config;
  bad.k = config.n_env;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = config;
  bad.delta_s = 0.89;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad.delta_s = 1.11;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad.delta_s = 0.95;
  CHECK_NOTHROW(bad.validate());
  bad = config;
  bad.alpha = -1e-4;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = config;
  bad.gamma = -0.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = config;
  bad.initial_m = static_cast<int>(binomial(config.n_env, config.k));
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = config;
  bad.delta_c = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("zeeman diagonal entries") {
  ModelConfig config;
  config.n_env = 1;
  config.k = 0;
  auto h = zeeman_hamiltonian(config);
  REQUIRE(h.is_diagonal());
  RealVector d = h.diagonal_data();
  CHECK(d[0b11] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(d[0b00] == doctest::Approx(-1.0).epsilon(1e-15));

  // generic detuning: the two resonant blocks split by exactly dS - dC
  ModelConfig wide;
  wide.n_env = 4;
  wide.k = 1;
  wide.delta_s = 0.95;
  auto hw = zeeman_hamiltonian(wide);
  AccessibleSubspace sub(wide.n_env, wide.k);
  RealVector dw = hw.diagonal_data();
  double e_up = dw[static_cast<Index>(sub.members()[0])];
  double e_down = dw[static_cast<Index>(sub.members()[sub.block1_dim()])];
  CHECK(e_up - e_down ==
        doctest::Approx(wide.delta_s - wide.delta_c).epsilon(1e-12));
}

TEST_CASE("gue sampler entry statistics") {
  Rng rng(2024);
  Matrix one = sample_gue_matrix(1, 1.0, rng);
  CHECK(one.rows() == 1);
  CHECK(std::abs(one(0, 0).imag()) == 0.0);

  const double alpha = 0.3;
  double sum_sq = 0;
  const int draws = 10000;
  for (int d = 0; d < draws; ++d) {
    Matrix h = sample_gue_matrix(8, alpha, rng);
    sum_sq += h.cwiseAbs2().sum() / (alpha * alpha);
  }
  double mean_entry_sq = sum_sq / (draws * 64.0);
  CHECK(mean_entry_sq == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("gue sampler is hermitian and seeded") {
  auto sub = std::make_shared<AccessibleSubspace>(8, 2);
  Rng r1(5);
  Rng r2(5);
  auto a = sample_gue(sub, 2e-4, r1);
  auto b = sample_gue(sub, 2e-4, r2);
  CHECK(a.is_dense());
  CHECK(a.max_hermiticity_violation() == 0.0);
  CHECK((a.to_dense() - b.to_dense()).norm() == 0.0);
  Rng r3(6);
  auto c = sample_gue(sub, 2e-4, r3);
  CHECK((a.to_dense() - c.to_dense()).norm() > 0.0);
}

TEST_CASE("gue spectrum approaches the semicircle") {
  auto sub = std::make_shared<AccessibleSubspace>(14, 2);
  Rng rng(99);
  auto h = sample_gue(sub, 1.0, rng);
  auto eig = eigendecompose(h);
  const Index n = eig.eigenvalues.size();
  const double radius = 2.0 * std::sqrt(static_cast<double>(n));
  auto cdf = [&](double x) {
    if (x <= -radius) return 0.0;
    if (x >= radius) return 1.0;
    const double r2 = radius * radius;
    return 0.5 + x * std::sqrt(r2 - x * x) / (M_PI * r2) +
           std::asin(x / radius) / M_PI;
  };
  double ks = 0;
  for (Index i = 0; i < n; ++i) {
    double f = cdf(eig.eigenvalues[i]);
    double lo = static_cast<double>(i) / n;
    double hi = static_cast<double>(i + 1) / n;
    ks = std::max(ks, std::max(std::abs(f - lo), std::abs(f - hi)));
  }
  CHECK(ks < 0.05);
}

TEST_CASE("star coefficient layout and reproducibility") {
  Rng r1(7);
  auto c1 = StarCoefficients::sample(5, r1);
  CHECK(c1.g.size() == 45);
  Rng r2(7);
  auto c2 = StarCoefficients::sample(5, r2);
  CHECK(c1.g == c2.g);
  CHECK(c1.at(0, 0, 1) == c1.g[1]);
  CHECK(c1.at(2, 1, 0) == c1.g[21]);
}

TEST_CASE("star coupling structure") {
  const int n = 4;
  Rng rng(11);
  auto coeffs = StarCoefficients::sample(n, rng);
  const double alpha = 0.01;
  auto h = star_coupling(coeffs, alpha);
  REQUIRE(h.is_sparse());
  CHECK(h.max_hermiticity_violation() < 1e-12);

  // row population bounded by the 9N generators
  Matrix dense = h.to_dense();
  for (Index i = 0; i < dense.rows(); ++i) {
    int popul = 0;
    for (Index j = 0; j < dense.cols(); ++j)
      if (std::abs(dense(i, j)) > 0) ++popul;
    CHECK(popul <= 9 * n);
  }

  // Pauli-string orthogonality fixes the squared trace exactly
  double gamma_sq = 0;
  for (double g : coeffs.g) gamma_sq += g * g;
  double tr_h2 = (dense * dense).trace().real();
  double dim_full = std::pow(2.0, n + 1);
  CHECK(tr_h2 == doctest::Approx(alpha * alpha * gamma_sq * dim_full)
                     .epsilon(1e-12));
}

TEST_CASE("star trace expectation approaches 9N") {
  const int n = 3;
  Rng rng(13);
  double acc = 0;
  const int draws = 200;
  for (int d = 0; d < draws; ++d) {
    auto coeffs = StarCoefficients::sample(n, rng);
    double gamma_sq = 0;
    for (double g : coeffs.g) gamma_sq += g * g;
    acc += gamma_sq;
  }
  CHECK(acc / draws / (9.0 * n) == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("single xx star term is the antidiagonal pair") {
  StarCoefficients coeffs;
  coeffs.n_env = 1;
  coeffs.g.assign(9, 0.0);
  coeffs.g[0] = 1.0;  // site 0, sigma_x^S sigma_x^(1)
  auto h = star_coupling(coeffs, 1.0);
  Matrix d = h.to_dense();
  Matrix expect = Matrix::Zero(4, 4);
  expect(0, 3) = expect(3, 0) = expect(1, 2) = expect(2, 1) = Complex(1, 0);
  CHECK((d - expect).norm() < 1e-15);
}

TEST_CASE("star with only z terms stays diagonal") {
  StarCoefficients coeffs;
  coeffs.n_env = 3;
  coeffs.g.assign(27, 0.0);
  for (int site = 0; site < 3; ++site)
    coeffs.g[static_cast<std::size_t>(9 * site + 3 * 2 + 2)] = 0.5;
  auto h = star_coupling(coeffs, 1.0);
  CHECK(h.is_diagonal());
}

TEST_CASE("ring coupling small cases") {
  CHECK_THROWS_AS(ring_coupling(2, 1.0, RingKind::IsingXX), DomainError);

  auto zz = ring_coupling(3, 1.0, RingKind::IsingZZ);
  REQUIRE(zz.is_diagonal());
  RealVector d = zz.diagonal_data();
  for (Index idx = 0; idx < d.size(); ++idx) {
    int s1 = (idx >> 1) & 1 ? 1 : -1;
    int s2 = (idx >> 2) & 1 ? 1 : -1;
    int s3 = (idx >> 3) & 1 ? 1 : -1;
    CHECK(d[idx] == doctest::Approx(s1 * s2 + s2 * s3 + s3 * s1));
    CHECK((d[idx] == 3.0 || d[idx] == -1.0));
  }
}

TEST_CASE("xy and heisenberg rings conserve magnetization") {
  const int n = 4;
  ModelConfig config;
  config.n_env = n;
  config.k = 1;
  auto jz_env = magnetization(n, false);
  auto jz_all = magnetization(n, true);
  auto zeeman = zeeman_hamiltonian(config);
  for (auto kind : {RingKind::XY, RingKind::Heisenberg}) {
    auto ring = ring_coupling(n, 0.7, kind);
    CHECK(commutator_norm(ring, jz_env) < 1e-12);
    auto free_plus_ring = zeeman.add(ring);
    CHECK(commutator_norm(free_plus_ring, jz_all) < 1e-12);
  }
}

TEST_CASE("assemble gue lives on the subspace") {
  ModelConfig config;
  config.n_env = 14;
  config.k = 2;
  config.coupling_kind = CouplingKind::Gue;
  auto model = assemble(config);
  CHECK(model.h_total.is_dense());
  CHECK(!model.h_total.tag().is_full());
  CHECK(model.h_total.dim() == 455);
  CHECK(model.h_total.max_hermiticity_violation() < 1e-12);
  CHECK(model.h_free.is_diagonal());
}

TEST_CASE("assemble star lives on the full space") {
  ModelConfig config;
  config.n_env = 14;
  config.k = 2;
  config.coupling_kind = CouplingKind::Star;
  auto model = assemble(config);
  CHECK(model.h_total.is_sparse());
  CHECK(model.h_total.tag().is_full());
  CHECK(model.h_total.dim() == 32768);
}

TEST_CASE("assemble free limit is diagonal with zeeman eigenvalues") {
  ModelConfig config;
  config.n_env = 5;
  config.k = 1;
  config.alpha = 0.0;
  config.gamma = 0.0;
  config.coupling_kind = CouplingKind::Star;
  auto model = assemble(config);
  REQUIRE(model.h_total.is_diagonal());
  RealVector d = model.h_total.diagonal_data();
  RealVector z = zeeman_hamiltonian(config).diagonal_data();
  CHECK((d - z).norm() == 0.0);
}

TEST_CASE("projected assembly matches projecting the full assembly") {
  for (auto kind : {CouplingKind::Star, CouplingKind::RingStar}) {
    ModelConfig config;
    config.n_env = 6;
    config.k = 2;
    config.alpha = 2e-4;
    config.gamma = kind == CouplingKind::RingStar ? 3.0 : 0.0;
    config.ring_kind = RingKind::IsingXX;
    config.coupling_kind = kind;
    config.seed = 42;

    auto full = assemble(config);
    auto proj = assemble_projected(config);
    auto compressed = project(full.h_total, full.sub);
    CHECK(proj.h_total.dim() == compressed.dim());
    double diff =
        (proj.h_total.to_dense() - compressed.to_dense()).cwiseAbs().maxCoeff();
    CHECK(diff <= 1e-13);
    double free_diff =
        (proj.h_free.to_dense() - project(full.h_free, full.sub).to_dense())
            .cwiseAbs()
            .maxCoeff();
    CHECK(free_diff <= 1e-13);
  }
}

TEST_CASE("ring star with zero gamma reduces to the star model") {
  ModelConfig star;
  star.n_env = 6;
  star.k = 2;
  star.coupling_kind = CouplingKind::Star;
  star.seed = 31;
  auto ring = star;
  ring.coupling_kind = CouplingKind::RingStar;
  ring.gamma = 0.0;
  auto a = assemble(star);
  auto b = assemble(ring);
  CHECK((a.h_total.to_dense() - b.h_total.to_dense()).norm() == 0.0);
}

TEST_CASE("initial state up sits on the band member") {
  ModelConfig config;
  config.n_env = 14;
  config.k = 2;
  config.initial_m = 0;

  auto full = BasisTag::full_space(config.n_env);
  auto psi = make_initial_state(config, full);
  psi.check("test");
  CHECK(std::abs(psi.amplitudes[7] - Complex(1, 0)) < 1e-15);

  auto sub = std::make_shared<AccessibleSubspace>(config.n_env, config.k);
  auto tag = BasisTag::subspace(sub);
  auto phi = make_initial_state(config, tag);
  CHECK(std::abs(phi.amplitudes[0] - Complex(1, 0)) < 1e-15);

  config.initial_m = 4;
  auto band = enumerate_band(config.n_env, config.k);
  auto psi4 = make_initial_state(config, full);
  Index expect = static_cast<Index>((band[4] << 1) | 1u);
  CHECK(std::abs(psi4.amplitudes[expect] - Complex(1, 0)) < 1e-15);
  auto phi4 = make_initial_state(config, tag);
  CHECK(std::abs(phi4.amplitudes[4] - Complex(1, 0)) < 1e-15);
}

TEST_CASE("initial superposition needs the full space") {
  ModelConfig config;
  config.n_env = 4;
  config.k = 1;
  config.central_init = InitialStateKind::Superposition;
  auto full = BasisTag::full_space(config.n_env);
  auto psi = make_initial_state(config, full);
  psi.check("test");
  auto band = enumerate_band(config.n_env, config.k);
  Index up = static_cast<Index>((band[0] << 1) | 1u);
  Index down = static_cast<Index>(band[0] << 1);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(psi.amplitudes[up] - Complex(r, 0)) < 1e-15);
  CHECK(std::abs(psi.amplitudes[down] - Complex(r, 0)) < 1e-15);

  auto sub = std::make_shared<AccessibleSubspace>(config.n_env, config.k);
  CHECK_THROWS_AS(make_initial_state(config, BasisTag::subspace(sub)),
                  UsageError);
}

}  // TEST_SUITE
