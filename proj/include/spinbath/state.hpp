#pragma once

#include <complex>

#include <Eigen/Core>

#include "spinbath/basis.hpp"

namespace spinbath {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;

// A pure state: amplitude vector plus the basis it is expressed in.
struct PureState {
  BasisTag tag;
  Vector amplitudes;

  double norm() const { return amplitudes.norm(); }
  void check(const char* where, double tol = 1e-8) const;
};

// Lifts a subspace state to the full product space, zero elsewhere.
PureState embed(const PureState& state);

struct RestrictedState {
  PureState state;       // unnormalized projection onto the subspace
  double leaked_weight;  // probability weight lost outside the subspace
};

// Projects a full-space state onto an accessible subspace.
RestrictedState restrict_to_subspace(
    const PureState& state, std::shared_ptr<const AccessibleSubspace> sub);

}  // namespace spinbath
