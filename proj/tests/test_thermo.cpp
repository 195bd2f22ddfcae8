#include <doctest.h>

#include <cmath>

#include "spinbath/thermo.hpp"

using namespace spinbath;

TEST_SUITE("thermo") {

TEST_CASE("equilibrium state populations") {
  auto even = equilibrium_state(10, 10);
  CHECK(even.bloch.z == 0.0);
  CHECK(std::abs(even.rho(0, 0) - Complex(0.5, 0)) == 0.0);
  CHECK(even.rho(0, 1) == Complex(0, 0));

  auto cold = equilibrium_state(91, 364);
  CHECK(std::abs(cold.bloch.z - (-0.6)) <= 1e-15);
  CHECK(std::abs(cold.rho(0, 0).real() - 0.2) <= 1e-15);
  CHECK(std::abs(cold.rho(1, 1).real() - 0.8) <= 1e-15);

  auto hot = equilibrium_state(364, 91);
  CHECK(std::abs(hot.bloch.z - 0.6) <= 1e-15);

  CHECK_THROWS_AS(equilibrium_state(0, 5), DomainError);
  CHECK_THROWS_AS(equilibrium_state(5, 0), DomainError);
}

TEST_CASE("expected inversion matches degeneracy ratios") {
  CHECK(std::abs(expected_inversion(14, 2) - (-0.6)) <= 1e-15);
  CHECK(std::abs(expected_inversion(14, 11) - 0.6) <= 1e-15);
  CHECK(expected_inversion(3, 1) == 0.0);  // center of an odd-N spectrum
  CHECK_THROWS_AS(expected_inversion(5, 5), DomainError);
}

TEST_CASE("spectral beta values") {
  CHECK(spectral_beta(14, 2) ==
        doctest::Approx(std::log(4.0)).epsilon(1e-14));
  CHECK(spectral_beta(14, 2, 2.0) ==
        doctest::Approx(std::log(4.0) / 2.0).epsilon(1e-14));
  CHECK(spectral_beta(14, 11) ==
        doctest::Approx(std::log(91.0 / 364.0)).epsilon(1e-12));
  CHECK(spectral_beta(14, 11) < 0.0);
  for (int n : {3, 7, 11, 15}) CHECK(spectral_beta(n, (n - 1) / 2) == 0.0);
  CHECK_THROWS_AS(spectral_beta(5, -1), DomainError);
  CHECK_THROWS_AS(spectral_beta(5, 5), DomainError);
  CHECK_THROWS_AS(spectral_beta(5, 1, 0.0), DomainError);
}

TEST_CASE("equilibrium and beta formulas agree") {
  for (int n = 2; n <= 30; ++n) {
    for (int k = 0; k < n; ++k) {
      double z = expected_inversion(n, k);
      double beta = spectral_beta(n, k);
      CHECK(std::abs(z - (-std::tanh(beta / 2.0))) <= 1e-12);
    }
  }
}

TEST_CASE("beta table shape") {
  auto table = beta_table(50);
  REQUIRE(table.size() == 50);
  for (std::size_t i = 0; i < table.size(); ++i) {
    CHECK(table[i].k == static_cast<int>(i));
    if (table[i].k < 25) CHECK(table[i].beta > 0.0);
    if (table[i].k >= 25) CHECK(table[i].beta < 0.0);
  }
  // inversion changes sign at the spectrum center as well
  CHECK(table[24].inversion < 0.0);
  CHECK(table[25].inversion > 0.0);
  CHECK_THROWS_AS(beta_table(1), DomainError);
}

TEST_CASE("beta strictly decreases for every table size") {
  for (int n = 2; n <= 64; ++n) {
    auto table = beta_table(n);
    for (std::size_t i = 1; i < table.size(); ++i)
      CHECK(table[i].beta < table[i - 1].beta);
  }
}

TEST_CASE("duality symmetry is exact") {
  for (int n : {5, 14, 50, 64}) {
    auto table = beta_table(n);
    for (int k = 0; k < n; ++k) {
      const auto& a = table[static_cast<std::size_t>(k)];
      const auto& b = table[static_cast<std::size_t>(n - 1 - k)];
      CHECK(a.inversion == -b.inversion);
      CHECK(a.beta == doctest::Approx(-b.beta).epsilon(1e-14));
    }
  }
}

TEST_CASE("beta scaling in delta_c") {
  auto t1 = beta_table(12, 1.0);
  auto t2 = beta_table(12, 2.0);
  for (std::size_t i = 0; i < t1.size(); ++i) {
    CHECK(t2[i].beta == doctest::Approx(t1[i].beta / 2.0).epsilon(1e-14));
    CHECK(t2[i].inversion == t1[i].inversion);
  }
}

}  // TEST_SUITE
