#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "spinbath/errors.hpp"

namespace spinbath {

using BasisIndex = std::uint64_t;
using Index = Eigen::Index;

// Bit convention for a system of one central spin and n_env environment
// spins: bit 0 is the central spin, bits 1..n_env are the environment.
// A set bit means sigma_z eigenvalue +1 ("up").

// Exact binomial coefficient. Throws DomainError for n < 0, k < 0 or k > n,
// and CapacityError once the running product would overflow 64 bits.
std::uint64_t binomial(int n, int k);

// All n-bit patterns with exactly k set bits, in increasing numeric order.
std::vector<BasisIndex> enumerate_band(int n_bits, int k);

// One product-basis configuration of the full system.
struct SpinConfiguration {
  BasisIndex bits = 0;
  int n_env = 0;

  int central() const { return (bits & 1u) ? +1 : -1; }
  int env_weight() const {
    return static_cast<int>(__builtin_popcountll(bits >> 1));
  }
};

// The two-band subspace that mixes under a weak near-resonant coupling:
// |up> x (environment band k) together with |down> x (band k+1).
// Members are stored block 1 (central up) first, then block 2, each block
// in increasing numeric order of the full-space index.
class AccessibleSubspace {
 public:
  AccessibleSubspace(int n_env, int k);

  int n_env() const { return n_env_; }
  int k() const { return k_; }
  Index dim() const { return static_cast<Index>(members_.size()); }
  Index block1_dim() const { return g_upper_; }
  Index block2_dim() const { return g_lower_; }
  const std::vector<BasisIndex>& members() const { return members_; }

  // Position of a full-space index inside the member list, or -1.
  Index position_of(BasisIndex full_index) const;

 private:
  int n_env_;
  int k_;
  Index g_upper_;  // C(n_env, k), size of the central-up block
  Index g_lower_;  // C(n_env, k+1), size of the central-down block
  std::vector<BasisIndex> members_;
};

// Identifies the vector space an object lives in, so that states and
// operators from different spaces cannot be silently combined.
class BasisTag {
 public:
  // An empty tag (dim 0) only exists as a placeholder before assignment.
  BasisTag() = default;

  static BasisTag full_space(int n_env);
  static BasisTag subspace(std::shared_ptr<const AccessibleSubspace> sub);

  bool is_full() const { return subspace_ == nullptr; }
  int n_env() const { return n_env_; }
  Index dim() const { return dim_; }
  const std::shared_ptr<const AccessibleSubspace>& sub() const {
    return subspace_;
  }

  bool compatible(const BasisTag& other) const;

 private:
  int n_env_ = 0;
  Index dim_ = 0;
  std::shared_ptr<const AccessibleSubspace> subspace_;
};

// Throws UsageError with a descriptive message when the tags differ.
void require_compatible(const BasisTag& a, const BasisTag& b,
                        const char* where);

}  // namespace spinbath
