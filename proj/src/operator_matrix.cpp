#include "spinbath/operator_matrix.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include <lapacke.h>

namespace spinbath {

OperatorMatrix OperatorMatrix::dense(BasisTag tag, Matrix m) {
  if (m.rows() != tag.dim() || m.cols() != tag.dim())
    throw UsageError("OperatorMatrix::dense: shape does not match basis dim");
  OperatorMatrix op(std::move(tag));
  op.storage_ = std::move(m);
  return op;
}

OperatorMatrix OperatorMatrix::diagonal(BasisTag tag, RealVector d) {
  if (d.size() != tag.dim())
    throw UsageError("OperatorMatrix::diagonal: size does not match basis dim");
  OperatorMatrix op(std::move(tag));
  op.storage_ = std::move(d);
  return op;
}

OperatorMatrix OperatorMatrix::from_triplets(
    BasisTag tag, const std::vector<Triplet>& entries) {
  const Index d = tag.dim();
  SparseMatrix m(d, d);
  m.setFromTriplets(entries.begin(), entries.end());
  m.prune([](Index, Index, const Complex& v) { return v != Complex(0, 0); });
  m.makeCompressed();
  bool off_diag = false;
  for (Index col = 0; col < m.outerSize() && !off_diag; ++col)
    for (SparseMatrix::InnerIterator it(m, col); it; ++it)
      if (it.row() != it.col()) {
        off_diag = true;
        break;
      }
  OperatorMatrix op(std::move(tag));
  if (!off_diag) {
    RealVector diag = RealVector::Zero(d);
    for (Index col = 0; col < m.outerSize(); ++col)
      for (SparseMatrix::InnerIterator it(m, col); it; ++it)
        diag[it.col()] = it.value().real();
    op.storage_ = std::move(diag);
  } else {
    op.storage_ = std::move(m);
  }
  return op;
}

Matrix OperatorMatrix::to_dense() const {
  if (is_dense()) return dense_data();
  if (is_sparse()) return Matrix(sparse_data());
  Matrix m = Matrix::Zero(dim(), dim());
  m.diagonal() = diagonal_data().cast<Complex>();
  return m;
}

RealVector OperatorMatrix::diagonal_part() const {
  if (is_diagonal()) return diagonal_data();
  if (is_dense()) return dense_data().diagonal().real();
  RealVector d = RealVector::Zero(dim());
  const auto& m = sparse_data();
  for (Index col = 0; col < m.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(m, col); it; ++it)
      if (it.row() == it.col()) d[it.col()] = it.value().real();
  return d;
}

void OperatorMatrix::apply(const Eigen::Ref<const Vector>& x,
                           Eigen::Ref<Vector> y, Complex coeff) const {
  if (x.size() != dim() || y.size() != dim())
    throw UsageError("OperatorMatrix::apply: vector size mismatch");
  if (is_diagonal())
    y.array() += coeff * diagonal_data().array().cast<Complex>() * x.array();
  else if (is_sparse())
    y.noalias() += coeff * (sparse_data() * x);
  else
    y.noalias() += coeff * (dense_data() * x);
}

Vector OperatorMatrix::apply(const Eigen::Ref<const Vector>& x) const {
  Vector y = Vector::Zero(dim());
  apply(x, y);
  return y;
}

Complex OperatorMatrix::expectation(const PureState& psi) const {
  require_compatible(tag_, psi.tag, "OperatorMatrix::expectation");
  return psi.amplitudes.dot(apply(psi.amplitudes));
}

OperatorMatrix OperatorMatrix::add(const OperatorMatrix& other) const {
  require_compatible(tag_, other.tag_, "OperatorMatrix::add");
  if (is_diagonal() && other.is_diagonal())
    return diagonal(tag_, diagonal_data() + other.diagonal_data());
  if (is_dense() || other.is_dense())
    return dense(tag_, to_dense() + other.to_dense());
  // at least one sparse, none dense
  auto as_sparse = [this](const OperatorMatrix& op) -> SparseMatrix {
    if (op.is_sparse()) return op.sparse_data();
    SparseMatrix m(op.dim(), op.dim());
    std::vector<Triplet> t;
    const auto& d = op.diagonal_data();
    for (Index i = 0; i < op.dim(); ++i)
      if (d[i] != 0.0) t.emplace_back(i, i, Complex(d[i], 0));
    m.setFromTriplets(t.begin(), t.end());
    return m;
  };
  SparseMatrix sum = as_sparse(*this) + as_sparse(other);
  sum.makeCompressed();
  OperatorMatrix op(tag_);
  op.storage_ = std::move(sum);
  return op;
}

OperatorMatrix OperatorMatrix::scaled(Complex factor) const {
  OperatorMatrix op(tag_);
  if (is_diagonal()) {
    if (factor.imag() != 0.0)
      throw UsageError("OperatorMatrix::scaled: complex factor on diagonal");
    op.storage_ = RealVector(diagonal_data() * factor.real());
  } else if (is_sparse()) {
    op.storage_ = SparseMatrix(sparse_data() * factor);
  } else {
    op.storage_ = Matrix(dense_data() * factor);
  }
  return op;
}

double OperatorMatrix::max_hermiticity_violation() const {
  if (is_diagonal()) return 0.0;
  Matrix m = to_dense();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

std::size_t OperatorMatrix::stored_entries() const {
  if (is_diagonal()) return static_cast<std::size_t>(dim());
  if (is_sparse()) return static_cast<std::size_t>(sparse_data().nonZeros());
  return static_cast<std::size_t>(dim()) * static_cast<std::size_t>(dim());
}

OperatorMatrix project(const OperatorMatrix& op,
                       std::shared_ptr<const AccessibleSubspace> sub) {
  if (!op.tag().is_full())
    throw UsageError("project: operator must live in the full space");
  if (!sub || sub->n_env() != op.tag().n_env())
    throw UsageError("project: subspace does not match operator");
  BasisTag tag = BasisTag::subspace(sub);
  const auto& members = sub->members();
  const Index d = sub->dim();
  if (op.is_diagonal()) {
    const auto& full = op.diagonal_data();
    RealVector diag(d);
    for (Index i = 0; i < d; ++i)
      diag[i] = full[static_cast<Index>(members[static_cast<std::size_t>(i)])];
    return OperatorMatrix::diagonal(std::move(tag), std::move(diag));
  }
  if (op.is_sparse()) {
    std::vector<Triplet> kept;
    const auto& m = op.sparse_data();
    for (Index col = 0; col < m.outerSize(); ++col) {
      Index c = sub->position_of(static_cast<BasisIndex>(col));
      if (c < 0) continue;
      for (SparseMatrix::InnerIterator it(m, col); it; ++it) {
        Index r = sub->position_of(static_cast<BasisIndex>(it.row()));
        if (r >= 0) kept.emplace_back(r, c, it.value());
      }
    }
    return OperatorMatrix::from_triplets(std::move(tag), kept);
  }
  const auto& m = op.dense_data();
  Matrix block(d, d);
  for (Index c = 0; c < d; ++c)
    for (Index r = 0; r < d; ++r)
      block(r, c) = m(static_cast<Index>(members[static_cast<std::size_t>(r)]),
                      static_cast<Index>(members[static_cast<std::size_t>(c)]));
  return OperatorMatrix::dense(std::move(tag), std::move(block));
}

OperatorMatrix conjugate_by_global_flip(const OperatorMatrix& op) {
  if (!op.tag().is_full())
    throw UsageError("conjugate_by_global_flip: full-space operator required");
  const Index d = op.dim();
  const Index mask = d - 1;
  if (op.is_diagonal()) {
    const auto& src = op.diagonal_data();
    RealVector dst(d);
    for (Index i = 0; i < d; ++i) dst[i ^ mask] = src[i];
    return OperatorMatrix::diagonal(op.tag(), std::move(dst));
  }
  if (op.is_sparse()) {
    std::vector<Triplet> t;
    const auto& m = op.sparse_data();
    t.reserve(static_cast<std::size_t>(m.nonZeros()));
    for (Index col = 0; col < m.outerSize(); ++col)
      for (SparseMatrix::InnerIterator it(m, col); it; ++it)
        t.emplace_back(it.row() ^ mask, it.col() ^ mask, it.value());
    return OperatorMatrix::from_triplets(op.tag(), t);
  }
  const auto& src = op.dense_data();
  Matrix dst(d, d);
  for (Index c = 0; c < d; ++c)
    for (Index r = 0; r < d; ++r) dst(r ^ mask, c ^ mask) = src(r, c);
  return OperatorMatrix::dense(op.tag(), std::move(dst));
}

PureState apply_global_flip(const PureState& psi) {
  if (!psi.tag.is_full())
    throw UsageError("apply_global_flip: full-space state required");
  const Index d = psi.tag.dim();
  const Index mask = d - 1;
  PureState out;
  out.tag = psi.tag;
  out.amplitudes = Vector(d);
  for (Index i = 0; i < d; ++i) out.amplitudes[i ^ mask] = psi.amplitudes[i];
  return out;
}

EigenSystem eigendecompose(const OperatorMatrix& op, Index dense_cap) {
  const Index d = op.dim();
  if (op.is_diagonal()) {
    const auto& diag = op.diagonal_data();
    std::vector<Index> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&diag](Index a, Index b) { return diag[a] < diag[b]; });
    EigenSystem sys;
    sys.tag = op.tag();
    sys.eigenvalues = RealVector(d);
    sys.eigenvectors = Matrix::Zero(d, d);
    for (Index i = 0; i < d; ++i) {
      sys.eigenvalues[i] = diag[order[static_cast<std::size_t>(i)]];
      sys.eigenvectors(order[static_cast<std::size_t>(i)], i) = Complex(1, 0);
    }
    return sys;
  }
  if (d > dense_cap)
    throw CapacityError(
        "eigendecompose: dimension " + std::to_string(d) +
        " exceeds the dense cap " + std::to_string(dense_cap) +
        "; use the Krylov propagator for large full-space problems");
  EigenSystem sys;
  sys.tag = op.tag();
  sys.eigenvectors = op.to_dense();
  sys.eigenvalues = RealVector(d);
  lapack_int info = LAPACKE_zheevd(
      LAPACK_COL_MAJOR, 'V', 'L', static_cast<lapack_int>(d),
      reinterpret_cast<lapack_complex_double*>(sys.eigenvectors.data()),
      static_cast<lapack_int>(d), sys.eigenvalues.data());
  if (info != 0)
    throw PropagationError("eigendecompose: zheevd failed with info=" +
                           std::to_string(info));
  return sys;
}

}  // namespace spinbath
