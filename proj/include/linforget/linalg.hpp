#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "linforget/errors.hpp"
#include "linforget/rng.hpp"

namespace linforget {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = DenseMatrix<double>;
using Vector = DenseVector<double>;
using Index = Eigen::Index;

/// Fills a rows x cols matrix with i.i.d. standard normals, drawn in
/// row-major order so the draw sequence is part of the contract.
template <typename Scalar = double>
DenseMatrix<Scalar> gaussian_matrix(Index rows, Index cols, SeededRng& rng) {
  DenseMatrix<Scalar> m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j)
      m(i, j) = static_cast<Scalar>(rng.next_gaussian());
  return m;
}

template <typename Scalar = double>
DenseVector<Scalar> gaussian_vector(Index size, SeededRng& rng) {
  DenseVector<Scalar> v(size);
  for (Index i = 0; i < size; ++i)
    v(i) = static_cast<Scalar>(rng.next_gaussian());
  return v;
}

/// Haar-distributed p x p rotation kept in factored form.
///
/// Sampled with Stewart's Householder-chain construction: reflector k is
/// built from a fresh Gaussian vector on the trailing p-k coordinates, and a
/// final Rademacher sign per column fixes the QR sign ambiguity. This is the
/// QR-of-a-Gaussian-matrix sampler restructured so the matrix never has to
/// be formed: applying the rotation to a vector costs O(p^2) and to an
/// n-row matrix O(n p^2), instead of the O(p^3) a dense factor would need.
template <typename Scalar = double>
class HaarRotation {
 public:
  HaarRotation(Index p, SeededRng& rng) : p_(p) {
    if (p < 1) throw InvalidDimensionError("HaarRotation: p must be >= 1");
    reflectors_.reserve(static_cast<std::size_t>(p > 0 ? p - 1 : 0));
    for (Index j = 0; j + 1 < p; ++j) {
      DenseVector<Scalar> x = gaussian_vector<Scalar>(p - j, rng);
      // Householder vector mapping x to -sign(x0)*||x|| e0; the additive
      // form avoids cancellation in the leading entry.
      const Scalar norm = x.norm();
      if (norm == Scalar(0)) {
        x.setZero();
        x(0) = Scalar(1);
      } else {
        x(0) += (x(0) >= Scalar(0) ? norm : -norm);
        x /= x.norm();
      }
      reflectors_.push_back(std::move(x));
    }
    signs_.resize(p);
    for (Index i = 0; i < p; ++i)
      signs_(i) = (rng.next_u64() >> 63) ? Scalar(-1) : Scalar(1);
  }

  Index size() const { return p_; }

  /// m <- Q m.
  void apply_in_place(Eigen::Ref<DenseMatrix<Scalar>> m) const {
    m.array().colwise() *= signs_.array();
    Eigen::Matrix<Scalar, 1, Eigen::Dynamic> w(m.cols());
    for (Index j = p_ - 2; j >= 0; --j) reflect(m, j, w);
  }

  /// m <- Q^T m.
  void apply_transpose_in_place(Eigen::Ref<DenseMatrix<Scalar>> m) const {
    Eigen::Matrix<Scalar, 1, Eigen::Dynamic> w(m.cols());
    for (Index j = 0; j + 1 < p_; ++j) reflect(m, j, w);
    m.array().colwise() *= signs_.array();
  }

  DenseVector<Scalar> apply(const DenseVector<Scalar>& v) const {
    DenseMatrix<Scalar> m = v;
    apply_in_place(m);
    return m.col(0);
  }

  DenseVector<Scalar> apply_transpose(const DenseVector<Scalar>& v) const {
    DenseMatrix<Scalar> m = v;
    apply_transpose_in_place(m);
    return m.col(0);
  }

  /// X Q^T for an n x p matrix X, computed as (Q X^T)^T.
  DenseMatrix<Scalar> right_transpose_product(
      const DenseMatrix<Scalar>& x) const {
    DenseMatrix<Scalar> m = x.transpose();
    apply_in_place(m);
    return m.transpose();
  }

  DenseMatrix<Scalar> dense() const {
    DenseMatrix<Scalar> q = DenseMatrix<Scalar>::Identity(p_, p_);
    apply_in_place(q);
    return q;
  }

 private:
  void reflect(Eigen::Ref<DenseMatrix<Scalar>> m, Index j,
               Eigen::Matrix<Scalar, 1, Eigen::Dynamic>& w) const {
    const auto& v = reflectors_[static_cast<std::size_t>(j)];
    auto block = m.middleRows(j, p_ - j);
    w.noalias() = v.transpose() * block;
    block.noalias() -= Scalar(2) * v * w;
  }

  Index p_;
  std::vector<DenseVector<Scalar>> reflectors_;
  DenseVector<Scalar> signs_;
};

/// Dense Haar orthogonal matrix. Quadratic-cost applications should use
/// HaarRotation directly; this materializes it for moderate p.
template <typename Scalar = double>
DenseMatrix<Scalar> haar_orthogonal(Index p, SeededRng& rng) {
  if (p < 1) throw InvalidDimensionError("haar_orthogonal: p must be >= 1");
  return HaarRotation<Scalar>(p, rng).dense();
}

/// Uniform permutation of {0, ..., p-1} by Fisher-Yates; result[k] is the
/// image of k.
inline std::vector<Index> random_permutation_indices(Index p, SeededRng& rng) {
  if (p < 1)
    throw InvalidDimensionError("random_permutation: p must be >= 1");
  std::vector<Index> image(static_cast<std::size_t>(p));
  for (Index i = 0; i < p; ++i) image[static_cast<std::size_t>(i)] = i;
  for (Index i = p - 1; i > 0; --i) {
    const Index j = static_cast<Index>(
        rng.next_below(static_cast<std::uint64_t>(i) + 1));
    std::swap(image[static_cast<std::size_t>(i)],
              image[static_cast<std::size_t>(j)]);
  }
  return image;
}

/// Permutation matrix P with P e_k = e_{image[k]}; entries exactly 0 or 1.
template <typename Scalar = double>
DenseMatrix<Scalar> permutation_matrix(const std::vector<Index>& image) {
  const Index p = static_cast<Index>(image.size());
  DenseMatrix<Scalar> m = DenseMatrix<Scalar>::Zero(p, p);
  for (Index k = 0; k < p; ++k)
    m(image[static_cast<std::size_t>(k)], k) = Scalar(1);
  return m;
}

/// Uniformly random p x p permutation matrix.
template <typename Scalar = double>
DenseMatrix<Scalar> random_permutation(Index p, SeededRng& rng) {
  return permutation_matrix<Scalar>(random_permutation_indices(p, rng));
}

/// Orthogonal projector onto the column space of M (full column rank
/// required: smallest singular value must exceed 1e-10 of the largest).
template <typename Derived>
DenseMatrix<typename Derived::Scalar> projector_onto_columns(
    const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  if (m.cols() < 1 || m.cols() > m.rows())
    throw InvalidDimensionError(
        "projector_onto_columns: need 1 <= cols <= rows, got " +
        std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  Eigen::JacobiSVD<DenseMatrix<Scalar>> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const Scalar largest = sv(0);
  const Scalar smallest = sv(sv.size() - 1);
  if (!(smallest > Scalar(1e-10) * largest)) {
    const double cond =
        smallest > Scalar(0)
            ? static_cast<double>(largest / smallest)
            : std::numeric_limits<double>::infinity();
    throw SingularityError(
        "projector_onto_columns: rank-deficient input (condition ~" +
            std::to_string(cond) + ")",
        cond);
  }
  return svd.matrixU() * svd.matrixU().transpose();
}

/// Row-space machinery of an n x p matrix X with n <= p: the Gram matrix
/// X X^T is factored once (Cholesky, with a single 1e-12-relative jitter
/// retry) and reused for constrained solves and row-space projections.
template <typename Scalar = double>
class RowSpaceSolver {
 public:
  explicit RowSpaceSolver(DenseMatrix<Scalar> x) : x_(std::move(x)) {
    const Index n = x_.rows();
    const Index p = x_.cols();
    if (n > p)
      throw UnsupportedRegimeError(
          "RowSpaceSolver: n > p is outside the supported regime (n=" +
          std::to_string(n) + ", p=" + std::to_string(p) + ")");
    DenseMatrix<Scalar> gram = DenseMatrix<Scalar>::Zero(n, n);
    gram.template selfadjointView<Eigen::Lower>().rankUpdate(x_);
    gram.template triangularView<Eigen::StrictlyUpper>() = gram.transpose();
    llt_.compute(gram);
    if (llt_.info() != Eigen::Success) {
      const Scalar jitter = Scalar(1e-12) * gram.trace() / Scalar(n);
      gram.diagonal().array() += jitter;
      llt_.compute(gram);
    }
    if (llt_.info() != Eigen::Success) {
      Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> es(gram);
      const double lo = static_cast<double>(es.eigenvalues()(0));
      const double hi = static_cast<double>(es.eigenvalues()(n - 1));
      const double cond = lo > 0.0 ? hi / lo
                                   : std::numeric_limits<double>::infinity();
      throw SingularityError(
          "RowSpaceSolver: X X^T not positive definite after jitter "
          "(condition ~" + std::to_string(cond) + ")",
          cond);
    }
  }

  const DenseMatrix<Scalar>& x() const { return x_; }

  /// Interpolating solution of y = X b closest to beta0:
  /// beta0 + X^T (X X^T)^{-1} (y - X beta0).
  DenseVector<Scalar> min_norm(const DenseVector<Scalar>& y,
                               const DenseVector<Scalar>& beta0) const {
    DenseVector<Scalar> residual = y;
    residual.noalias() -= x_ * beta0;
    return beta0 + x_.transpose() * llt_.solve(residual);
  }

  DenseVector<Scalar> min_norm(const DenseVector<Scalar>& y) const {
    return x_.transpose() * llt_.solve(y);
  }

  /// P_{X^T} v, the projection of v onto the row space of X.
  DenseVector<Scalar> project_row_space(const DenseVector<Scalar>& v) const {
    return x_.transpose() * llt_.solve(x_ * v);
  }

  /// ||P_{X^T} v||^2 without forming the p-dimensional projection.
  Scalar row_space_squared_norm(const DenseVector<Scalar>& v) const {
    DenseVector<Scalar> xv = x_ * v;
    return xv.dot(llt_.solve(xv));
  }

 private:
  DenseMatrix<Scalar> x_;
  Eigen::LLT<DenseMatrix<Scalar>> llt_;
};

/// Minimum-distance interpolator of y = X beta starting from beta0.
template <typename DerivedX, typename DerivedY, typename DerivedB>
DenseVector<typename DerivedX::Scalar> min_norm_solve(
    const Eigen::MatrixBase<DerivedX>& x,
    const Eigen::MatrixBase<DerivedY>& y,
    const Eigen::MatrixBase<DerivedB>& beta0) {
  using Scalar = typename DerivedX::Scalar;
  return RowSpaceSolver<Scalar>(x.derived()).min_norm(y.derived(),
                                                      beta0.derived());
}

/// Moore-Penrose pseudoinverse by SVD with singular values below
/// 1e-12 * sigma_max treated as zero.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> pinv_svd(
    const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  Eigen::JacobiSVD<DenseMatrix<Scalar>> svd(
      x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const Scalar cutoff = Scalar(1e-12) * (sv.size() > 0 ? sv(0) : Scalar(0));
  DenseVector<Scalar> inv(sv.size());
  for (Index i = 0; i < sv.size(); ++i)
    inv(i) = sv(i) > cutoff ? Scalar(1) / sv(i) : Scalar(0);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

}  // namespace linforget
