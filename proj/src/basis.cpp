#include "spinbath/basis.hpp"

#include <algorithm>
#include <string>

#include "spinbath/state.hpp"

namespace spinbath {

std::uint64_t binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n)
    throw DomainError("binomial: need 0 <= k <= n, got n=" + std::to_string(n) +
                      " k=" + std::to_string(k));
  if (n > 62)
    throw DomainError("binomial: n must be <= 62, got n=" + std::to_string(n));
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    // multiply first, then the division by i is exact; guard the multiply
    if (result > UINT64_MAX / num)
      throw CapacityError("binomial: C(" + std::to_string(n) + "," +
                          std::to_string(k) + ") overflows 64 bits");
    result = result * num / static_cast<std::uint64_t>(i);
  }
  return result;
}

std::vector<BasisIndex> enumerate_band(int n_bits, int k) {
  if (n_bits < 0 || n_bits > 62)
    throw DomainError("enumerate_band: n_bits must be in [0, 62]");
  if (k < 0 || k > n_bits)
    throw DomainError("enumerate_band: need 0 <= k <= n_bits");
  std::uint64_t count = binomial(n_bits, k);
  std::vector<BasisIndex> out;
  out.reserve(count);
  if (k == 0) {
    out.push_back(0);
    return out;
  }
  BasisIndex v = (BasisIndex{1} << k) - 1;
  const BasisIndex limit = BasisIndex{1} << n_bits;
  while (v < limit) {
    out.push_back(v);
    // Gosper's hack: next higher integer with the same popcount
    BasisIndex c = v & (~v + 1);
    BasisIndex r = v + c;
    v = (((r ^ v) >> 2) / c) | r;
  }
  return out;
}

AccessibleSubspace::AccessibleSubspace(int n_env, int k)
    : n_env_(n_env), k_(k) {
  if (n_env < 1 || n_env > 61)
    throw DomainError("AccessibleSubspace: n_env must be in [1, 61]");
  if (k < 0 || k >= n_env)
    throw DomainError("AccessibleSubspace: need 0 <= k <= n_env-1, got k=" +
                      std::to_string(k));
  g_upper_ = static_cast<Index>(binomial(n_env, k));
  g_lower_ = static_cast<Index>(binomial(n_env, k + 1));
  members_.reserve(static_cast<std::size_t>(g_upper_ + g_lower_));
  for (BasisIndex env : enumerate_band(n_env, k))
    members_.push_back((env << 1) | 1u);
  for (BasisIndex env : enumerate_band(n_env, k + 1))
    members_.push_back(env << 1);
}

Index AccessibleSubspace::position_of(BasisIndex full_index) const {
  // the central bit selects the block; each block is sorted
  auto begin = members_.begin();
  auto mid = begin + g_upper_;
  auto end = members_.end();
  auto lo = (full_index & 1u) ? begin : mid;
  auto hi = (full_index & 1u) ? mid : end;
  auto it = std::lower_bound(lo, hi, full_index);
  if (it == hi || *it != full_index) return -1;
  return static_cast<Index>(it - begin);
}

BasisTag BasisTag::full_space(int n_env) {
  if (n_env < 1 || n_env > 61)
    throw DomainError("BasisTag: n_env must be in [1, 61]");
  BasisTag t;
  t.n_env_ = n_env;
  t.dim_ = Index{1} << (n_env + 1);
  return t;
}

BasisTag BasisTag::subspace(std::shared_ptr<const AccessibleSubspace> sub) {
  if (!sub) throw UsageError("BasisTag: null subspace");
  BasisTag t;
  t.n_env_ = sub->n_env();
  t.dim_ = sub->dim();
  t.subspace_ = std::move(sub);
  return t;
}

bool BasisTag::compatible(const BasisTag& other) const {
  if (n_env_ != other.n_env_ || dim_ != other.dim_) return false;
  if (is_full() != other.is_full()) return false;
  if (!is_full() && subspace_->k() != other.subspace_->k()) return false;
  return true;
}

void require_compatible(const BasisTag& a, const BasisTag& b,
                        const char* where) {
  if (!a.compatible(b))
    throw UsageError(std::string(where) + ": basis mismatch (" +
                     (a.is_full() ? "full" : "subspace") + " dim " +
                     std::to_string(a.dim()) + " vs " +
                     (b.is_full() ? "full" : "subspace") + " dim " +
                     std::to_string(b.dim()) + ")");
}

void PureState::check(const char* where, double tol) const {
  if (amplitudes.size() != tag.dim())
    throw UsageError(std::string(where) + ": amplitude vector has size " +
                     std::to_string(amplitudes.size()) + ", basis dim is " +
                     std::to_string(tag.dim()));
  double n = norm();
  if (std::abs(n - 1.0) > tol)
    throw UsageError(std::string(where) + ": state norm " + std::to_string(n) +
                     " deviates from 1 beyond tolerance");
}

PureState embed(const PureState& state) {
  if (state.tag.is_full())
    throw UsageError("embed: state is already in the full space");
  const auto& sub = *state.tag.sub();
  PureState out;
  out.tag = BasisTag::full_space(sub.n_env());
  out.amplitudes = Vector::Zero(out.tag.dim());
  const auto& members = sub.members();
  for (Index i = 0; i < sub.dim(); ++i)
    out.amplitudes[static_cast<Index>(members[static_cast<std::size_t>(i)])] =
        state.amplitudes[i];
  return out;
}

RestrictedState restrict_to_subspace(
    const PureState& state, std::shared_ptr<const AccessibleSubspace> sub) {
  if (!state.tag.is_full())
    throw UsageError("restrict_to_subspace: state must be in the full space");
  if (!sub || sub->n_env() != state.tag.n_env())
    throw UsageError("restrict_to_subspace: subspace does not match state");
  RestrictedState out;
  out.state.tag = BasisTag::subspace(sub);
  out.state.amplitudes = Vector(sub->dim());
  const auto& members = sub->members();
  for (Index i = 0; i < sub->dim(); ++i)
    out.state.amplitudes[i] =
        state.amplitudes[static_cast<Index>(members[static_cast<std::size_t>(i)])];
  double total = state.amplitudes.squaredNorm();
  double kept = out.state.amplitudes.squaredNorm();
  out.leaked_weight = std::max(0.0, total - kept);
  return out;
}

}  // namespace spinbath
