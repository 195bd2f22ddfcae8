#pragma once

#include <variant>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "spinbath/basis.hpp"
#include "spinbath/state.hpp"

namespace spinbath {

using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;
using Triplet = Eigen::Triplet<Complex>;

// Hermitian operator with basis tag. Storage adapts to structure:
// dense for small or full matrices, sparse for local couplings, and a plain
// real diagonal for operators that commute with the product basis.
class OperatorMatrix {
 public:
  static OperatorMatrix dense(BasisTag tag, Matrix m);
  static OperatorMatrix diagonal(BasisTag tag, RealVector d);
  // Builds sparse storage; exact zeros are dropped, and a matrix with no
  // remaining off-diagonal entries collapses to diagonal storage.
  static OperatorMatrix from_triplets(BasisTag tag,
                                      const std::vector<Triplet>& entries);

  const BasisTag& tag() const { return tag_; }
  Index dim() const { return tag_.dim(); }
  bool is_dense() const { return std::holds_alternative<Matrix>(storage_); }
  bool is_diagonal() const {
    return std::holds_alternative<RealVector>(storage_);
  }
  bool is_sparse() const {
    return std::holds_alternative<SparseMatrix>(storage_);
  }

  const Matrix& dense_data() const { return std::get<Matrix>(storage_); }
  const RealVector& diagonal_data() const {
    return std::get<RealVector>(storage_);
  }
  const SparseMatrix& sparse_data() const {
    return std::get<SparseMatrix>(storage_);
  }

  Matrix to_dense() const;
  RealVector diagonal_part() const;

  // y += coeff * (M x); the workhorse behind the Krylov propagator.
  void apply(const Eigen::Ref<const Vector>& x, Eigen::Ref<Vector> y,
             Complex coeff = Complex(1, 0)) const;
  Vector apply(const Eigen::Ref<const Vector>& x) const;

  Complex expectation(const PureState& psi) const;

  OperatorMatrix add(const OperatorMatrix& other) const;
  OperatorMatrix scaled(Complex factor) const;

  double max_hermiticity_violation() const;
  std::size_t stored_entries() const;

 private:
  OperatorMatrix(BasisTag tag) : tag_(std::move(tag)) {}
  BasisTag tag_;
  std::variant<Matrix, SparseMatrix, RealVector> storage_;
};

// Compresses a full-space operator to its block on the accessible subspace.
OperatorMatrix project(const OperatorMatrix& op,
                       std::shared_ptr<const AccessibleSubspace> sub);

// Conjugates a full-space operator by the global spin flip (sigma_x on every
// site), which permutes basis index b -> ~b within the n_env+1 bit mask.
OperatorMatrix conjugate_by_global_flip(const OperatorMatrix& op);
PureState apply_global_flip(const PureState& psi);

struct EigenSystem {
  BasisTag tag;
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // columns, orthonormal
};

// Dense Hermitian eigendecomposition. Refuses matrices above dense_cap.
// Diagonal storage short-circuits: sorted diagonal, unit eigenvectors.
EigenSystem eigendecompose(const OperatorMatrix& op, Index dense_cap = 8192);

}  // namespace spinbath
