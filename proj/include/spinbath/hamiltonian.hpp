#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "spinbath/operator_matrix.hpp"
#include "spinbath/rng.hpp"

namespace spinbath {

enum class CouplingKind { Gue, Star, RingStar };
enum class RingKind { IsingXX, XY, Heisenberg, IsingZZ };
enum class InitialStateKind { Up, Superposition };

// Model parameters. Energies are measured in units of the environment level
// splitting delta_c, times in its inverse; keeping delta_c itself as a field
// lets tests exercise the scaling invariance. alpha = 0 is allowed so the
// free (uncoupled) limit stays constructible.
struct ModelConfig {
  int n_env = 10;
  int k = 2;
  double delta_c = 1.0;
  double delta_s = 1.0;    // central splitting; near-resonant by validation
  double alpha = 2e-4;     // interaction strength
  double gamma = 0.0;      // intra-bath strength in units of alpha
  CouplingKind coupling_kind = CouplingKind::Gue;
  RingKind ring_kind = RingKind::IsingXX;
  InitialStateKind central_init = InitialStateKind::Up;
  int initial_m = 0;       // which band-k member the environment starts in
  std::uint64_t seed = 1;

  void validate() const;  // throws ConfigError
};

// The 9 n_env real coefficients of the star coupling, drawn i.i.d. standard
// normal in a fixed order: environment site major, then central axis, then
// environment axis (x, y, z). Stored unscaled; builders multiply by alpha.
struct StarCoefficients {
  int n_env = 0;
  std::vector<double> g;

  static StarCoefficients sample(int n_env, Rng& rng);
  double at(int site, int central_axis, int env_axis) const {
    return g[static_cast<std::size_t>(9 * site + 3 * central_axis + env_axis)];
  }
};

// Free (uncoupled) part: delta_s/2 sigma_z on the central spin plus
// delta_c/2 sum of sigma_z over the environment. Exactly diagonal.
OperatorMatrix zeeman_hamiltonian(const ModelConfig& config);

// Random Hermitian matrix with GUE statistics: every entry has expected
// squared magnitude scale^2 (off-diagonal variance split between re and im).
Matrix sample_gue_matrix(Index dim, double scale, Rng& rng);
OperatorMatrix sample_gue(std::shared_ptr<const AccessibleSubspace> sub,
                          double scale, Rng& rng);

// Star interaction sum_{nu,i,j} g(nu,i,j) alpha sigma_i^S sigma_j^(nu).
OperatorMatrix star_coupling(const StarCoefficients& coeffs, double alpha);
OperatorMatrix star_coupling(const ModelConfig& config, Rng& rng);

// Intra-bath ring sum_nu over nearest-neighbor environment pairs with
// periodic boundary, operator set chosen by kind (XX, XY, Heisenberg, ZZ).
// gamma_abs is the absolute strength (the config stores gamma in units of
// alpha). Fewer than 3 environment spins make no ring.
OperatorMatrix ring_coupling(int n_env, double gamma_abs, RingKind kind);
OperatorMatrix ring_coupling(const ModelConfig& config);

struct AssembledModel {
  ModelConfig config;
  std::shared_ptr<const AccessibleSubspace> sub;
  OperatorMatrix h_total;
  OperatorMatrix h_free;
};

// Assembly of the total Hamiltonian. The GUE interaction lives directly on
// the accessible subspace, so that kind yields a dense subspace operator;
// STAR and RING_STAR yield sparse full-space operators.
AssembledModel assemble(const ModelConfig& config);

// Assembly of the compression onto the accessible subspace, for any kind.
// For structured couplings this builds the projected block directly, member
// by member, and draws the same coefficients as assemble for the same seed
// (both consume one fresh stream seeded with config.seed).
AssembledModel assemble_projected(const ModelConfig& config);

// |central> x |band-k member m> with m = config.initial_m, central part set
// by config.central_init. The Up state lies in the accessible subspace; the
// equal-weight superposition only exists in the full space.
PureState make_initial_state(const ModelConfig& config, const BasisTag& tag);

}  // namespace spinbath
