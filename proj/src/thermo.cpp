#include "spinbath/thermo.hpp"

#include <cmath>

namespace spinbath {
namespace {

// Degeneracies up to n = 66 still fit in 64 bits, slightly past the cap of
// the public binomial; the table builder is specified up to N = 64.
std::uint64_t binomial_wide(int n, int k) {
  if (n < 0 || k < 0 || k > n)
    throw DomainError("binomial: need 0 <= k <= n");
  if (n > 66) throw CapacityError("binomial: n > 66 overflows 64 bits");
  if (k > n - k) k = n - k;
  unsigned __int128 acc = 1;
  for (int i = 1; i <= k; ++i) {
    acc = acc * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
  }
  return static_cast<std::uint64_t>(acc);
}

}  // namespace

ReducedSpinState equilibrium_state(std::uint64_t g_k, std::uint64_t g_k1) {
  if (g_k == 0 || g_k1 == 0)
    throw DomainError("equilibrium_state: degeneracies must be >= 1");
  const double total = static_cast<double>(g_k) + static_cast<double>(g_k1);
  const double p_up = static_cast<double>(g_k) / total;
  const double p_down = static_cast<double>(g_k1) / total;
  ReducedSpinState s;
  s.rho << Complex(p_up, 0), Complex(0, 0), Complex(0, 0), Complex(p_down, 0);
  s.bloch = {0.0, 0.0, p_up - p_down};
  return s;
}

double expected_inversion(int n_env, int k) {
  if (k < 0 || k >= n_env)
    throw DomainError("expected_inversion: need 0 <= k <= n_env-1");
  const double g_k = static_cast<double>(binomial_wide(n_env, k));
  const double g_k1 = static_cast<double>(binomial_wide(n_env, k + 1));
  return (g_k - g_k1) / (g_k + g_k1);
}

double spectral_beta(int n_env, int k, double delta_c) {
  if (k < 0 || k >= n_env)
    throw DomainError("spectral_beta: need 0 <= k <= n_env-1");
  if (!(delta_c > 0.0)) throw DomainError("spectral_beta: delta_c must be > 0");
  // C(N,k+1)/C(N,k) = (N-k)/(k+1). Taking the difference of logs keeps the
  // k <-> N-1-k antisymmetry exact in floating point.
  return (std::log(static_cast<double>(n_env - k)) -
          std::log(static_cast<double>(k + 1))) /
         delta_c;
}

std::vector<SpectralPoint> beta_table(int n_env, double delta_c) {
  if (n_env < 2) throw DomainError("beta_table: need n_env >= 2");
  std::vector<SpectralPoint> table;
  table.reserve(static_cast<std::size_t>(n_env));
  for (int k = 0; k < n_env; ++k)
    table.push_back(
        {k, spectral_beta(n_env, k, delta_c), expected_inversion(n_env, k)});
  return table;
}

}  // namespace spinbath
