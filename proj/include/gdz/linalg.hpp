#pragma once

// Dense complex matrix arithmetic and the SVD-based primitives (rank,
// pseudoinverse, kernel) the rest of the library builds on.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <string_view>

#include "gdz/errors.hpp"

namespace gdz {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

/// Numerical knobs, one per stage: rank decisions, hypothesis residuals,
/// formula-vs-oracle agreement and series tails.
struct Tolerance {
  double eps_rank = 1e-10;
  double eps_check = 1e-9;
  double eps_match = 1e-8;
  double eps_tail = 1e-12;

  void validate() const {
    auto ok = [](double v) { return std::isfinite(v) && v > 0.0 && v < 1.0; };
    if (!ok(eps_rank) || !ok(eps_check) || !ok(eps_match) || !ok(eps_tail)) {
      throw Error("tolerances must lie strictly between 0 and 1");
    }
  }
};

inline Matrix identity(Index n) { return Matrix::Identity(n, n); }
inline Matrix zeros(Index rows, Index cols) { return Matrix::Zero(rows, cols); }

inline double fro_norm(const Matrix& a) { return a.norm(); }

/// max(1, |m|_F over all arguments): the reference magnitude for relative
/// comparisons.
template <typename... Ms>
double scale_of(const Ms&... ms) {
  double s = 1.0;
  ((s = std::max(s, fro_norm(ms))), ...);
  return s;
}

inline bool is_finite(const Matrix& a) { return a.allFinite(); }

inline void require_finite(const Matrix& a, std::string_view what) {
  if (!is_finite(a)) throw Error(std::string(what) + ": matrix has non-finite entries");
}

inline void require_square(const Matrix& a, std::string_view what) {
  if (a.rows() != a.cols()) {
    throw DimensionMismatch(std::string(what) + ": expected a square matrix, got " +
                            std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

inline void require_same_shape(const Matrix& a, const Matrix& b, std::string_view what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch(std::string(what) + ": shape " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                            std::to_string(b.cols()));
  }
}

/// Builds a matrix from row-major entries, enforcing positive dimensions and
/// finite values.
inline Matrix make_matrix(Index rows, Index cols, std::span<const Complex> entries) {
  if (rows <= 0 || cols <= 0) throw DimensionMismatch("matrix dimensions must be positive");
  if (static_cast<Index>(entries.size()) != rows * cols) {
    throw DimensionMismatch("entry count " + std::to_string(entries.size()) +
                            " does not match " + std::to_string(rows) + "x" +
                            std::to_string(cols));
  }
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = entries[static_cast<std::size_t>(i * cols + j)];
  }
  require_finite(m, "make_matrix");
  return m;
}

inline Matrix mat_mul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionMismatch("mat_mul: " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + " times " + std::to_string(b.rows()) +
                            "x" + std::to_string(b.cols()));
  }
  return a * b;
}

inline Matrix mat_power(const Matrix& a, unsigned n) {
  require_square(a, "mat_power");
  Matrix result = identity(a.rows());
  Matrix base = a;
  while (n > 0) {
    if (n & 1u) result = result * base;
    n >>= 1u;
    if (n > 0) base = base * base;
  }
  return result;
}

inline Eigen::VectorXd singular_values(const Matrix& a) {
  if (a.size() == 0) return Eigen::VectorXd();
  return Eigen::JacobiSVD<Matrix>(a).singularValues();
}

/// Number of singular values strictly above `cutoff`.
inline Index rank_above(const Matrix& a, double cutoff) {
  const Eigen::VectorXd s = singular_values(a);
  return static_cast<Index>((s.array() > cutoff).count());
}

/// Numerical rank with a cutoff relative to the largest singular value.
inline Index rank(const Matrix& a, const Tolerance& tol = {}) {
  const Eigen::VectorXd s = singular_values(a);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  return static_cast<Index>((s.array() > tol.eps_rank * s(0)).count());
}

/// Pseudoinverse keeping the `r` leading singular triplets.
inline Matrix pseudo_inverse_truncated(const Matrix& a, Index r) {
  if (r <= 0 || a.size() == 0) return zeros(a.cols(), a.rows());
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  r = std::min<Index>(r, s.size());
  Matrix out = zeros(a.cols(), a.rows());
  for (Index i = 0; i < r; ++i) {
    out.noalias() += svd.matrixV().col(i) * (1.0 / s(i)) * svd.matrixU().col(i).adjoint();
  }
  return out;
}

/// Moore-Penrose pseudoinverse; singular values at or below
/// eps_rank * sigma_max are treated as zero.
inline Matrix pseudo_inverse(const Matrix& a, const Tolerance& tol = {}) {
  return pseudo_inverse_truncated(a, rank(a, tol));
}

/// Orthonormal basis (as columns) of the numerical kernel of `a`: right
/// singular vectors whose singular value is at most `cutoff`.
inline Matrix kernel_basis(const Matrix& a, double cutoff) {
  const Index n = a.cols();
  if (a.rows() == 0) return identity(n);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  const Index r = static_cast<Index>((s.array() > cutoff).count());
  return svd.matrixV().rightCols(n - r);
}

/// Block diagonal [[a, 0], [0, d]].
inline Matrix block_diag(const Matrix& a, const Matrix& d) {
  Matrix m = zeros(a.rows() + d.rows(), a.cols() + d.cols());
  m.topLeftCorner(a.rows(), a.cols()) = a;
  m.bottomRightCorner(d.rows(), d.cols()) = d;
  return m;
}

}  // namespace gdz
