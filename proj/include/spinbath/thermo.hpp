#pragma once

#include <cstdint>
#include <vector>

#include "spinbath/observables.hpp"

namespace spinbath {

// Predicted equilibrium state of the central spin when the dynamics mixes
// band k (degeneracy g_k, central up) with band k+1 (g_k1, central down):
// populations proportional to the opposite band degeneracies.
ReducedSpinState equilibrium_state(std::uint64_t g_k, std::uint64_t g_k1);

// (g_k - g_k1)/(g_k + g_k1): the long-time <sigma_z> prediction.
double expected_inversion(int n_env, int k);

// Inverse spectral temperature of the band pair, in units 1/delta_c:
// ln(C(N,k+1)/C(N,k)) / delta_c. Positive while degeneracy still grows
// with energy; negative in the inverted upper half of the spectrum.
double spectral_beta(int n_env, int k, double delta_c = 1.0);

struct SpectralPoint {
  int k = 0;
  double beta = 0;
  double inversion = 0;
};

// One SpectralPoint per band pair k = 0 .. N-1.
std::vector<SpectralPoint> beta_table(int n_env, double delta_c = 1.0);

}  // namespace spinbath
