#pragma once

// Reference Drazin inverse. Everything here is independent of the additive
// and block formulas so it can serve as their oracle.

#include <string>

#include "gdz/linalg.hpp"

namespace gdz {

struct DrazinResult {
  Matrix d;     ///< the Drazin inverse
  Matrix pi;    ///< spectral idempotent I - a d
  Index index;  ///< Drazin index
};

struct AxiomReport {
  double product_residual = 0.0;  ///< |x a x - x|
  double commute_residual = 0.0;  ///< |a x - x a|
  double power_residual = 0.0;    ///< |a^{k+1} x - a^k|
  double scale = 1.0;
  Index index = 0;
  bool verdict = false;

  double worst() const {
    return std::max({product_residual, commute_residual, power_residual});
  }
};

namespace detail {

struct IndexInfo {
  Index index;
  Index core_rank;  // rank(a^k) for every k >= index
};

// ker(a^{k+1}) = ker((I - P_k) a) with P_k the orthogonal projector onto
// ker(a^k). Every step works on a matrix of norm |a|, so the cutoff stays
// relative to sigma_max(a) instead of to a power of it. A positive
// `reference` raises the cutoff to eps_rank * reference, for matrices known
// to be built from operands of that magnitude (e.g. products).
inline IndexInfo index_info(const Matrix& a, const Tolerance& tol, double reference = 0.0) {
  require_square(a, "drazin_index");
  const Index n = a.rows();
  const Eigen::VectorXd top = singular_values(a);
  if (n == 0) return {0, 0};
  const double smax = top(0);
  const double cutoff = tol.eps_rank * std::max(smax, reference);
  if (smax == 0.0 || (reference > 0.0 && smax <= cutoff)) return {1, 0};

  Matrix basis = zeros(n, 0);
  Index prev_nullity = 0;
  for (Index k = 0; k <= n; ++k) {
    const Matrix x = a - basis * (basis.adjoint() * a);
    Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeFullV);
    const Eigen::VectorXd& s = svd.singularValues();
    for (Index i = 0; i < s.size(); ++i) {
      if (s(i) > cutoff * 1e-2 && s(i) <= cutoff * 1e2) {
        throw AxiomViolation("drazin_index: singular value " +
                             std::to_string(s(i) / std::max(smax, reference)) +
                             " (relative) is ambiguous at the rank cutoff");
      }
    }
    const Index r = static_cast<Index>((s.array() > cutoff).count());
    const Index nullity = n - r;
    if (nullity == prev_nullity) return {k, n - prev_nullity};
    basis = svd.matrixV().rightCols(nullity);
    prev_nullity = nullity;
  }
  throw AxiomViolation("drazin_index: rank sequence did not stabilise");
}

inline AxiomReport axioms_at_index(const Matrix& a, const Matrix& x, Index k,
                                   const Tolerance& tol) {
  const Matrix ak = mat_power(a, static_cast<unsigned>(k));
  const Matrix ak1 = ak * a;
  AxiomReport r;
  r.index = k;
  r.product_residual = fro_norm(x * a * x - x);
  r.commute_residual = fro_norm(a * x - x * a);
  r.power_residual = fro_norm(ak1 * x - ak);
  r.scale = scale_of(a, x, ak, ak1);
  r.verdict = r.worst() <= tol.eps_match * r.scale;
  return r;
}

}  // namespace detail

/// Smallest k with rank(a^k) = rank(a^{k+1}).
inline Index drazin_index(const Matrix& a, const Tolerance& tol = {}, double reference = 0.0) {
  return detail::index_info(a, tol, reference).index;
}

/// Residuals of the three Drazin axioms for a candidate inverse `cand`.
inline AxiomReport check_drazin_axioms(const Matrix& a, const Matrix& cand,
                                       const Tolerance& tol = {}) {
  require_square(a, "check_drazin_axioms");
  require_same_shape(a, cand, "check_drazin_axioms");
  return detail::axioms_at_index(a, cand, drazin_index(a, tol), tol);
}

/// a^d = a^k (a^{2k+1})^+ a^k with k the index. See index_info for
/// `reference`.
inline DrazinResult drazin_oracle(const Matrix& a, const Tolerance& tol = {},
                                  double reference = 0.0) {
  require_square(a, "drazin_oracle");
  const auto info = detail::index_info(a, tol, reference);
  const Index k = info.index;
  const Matrix ak = mat_power(a, static_cast<unsigned>(k));
  const Matrix big = mat_power(a, static_cast<unsigned>(2 * k + 1));
  Matrix d = ak * pseudo_inverse_truncated(big, info.core_rank) * ak;
  Matrix pi = identity(a.rows()) - a * d;

  const AxiomReport report = detail::axioms_at_index(a, d, k, tol);
  if (!report.verdict) {
    throw AxiomViolation("drazin_oracle: axiom residual " + std::to_string(report.worst()) +
                         " exceeds tolerance at scale " + std::to_string(report.scale));
  }
  return {std::move(d), std::move(pi), k};
}

/// Nilpotency at the matrix dimension: |a^n| <= eps_check * max(1, |a|)^n.
inline bool is_quasinilpotent(const Matrix& a, const Tolerance& tol = {}) {
  require_square(a, "is_quasinilpotent");
  const auto n = static_cast<unsigned>(a.rows());
  const double bound = tol.eps_check * std::pow(std::max(1.0, fro_norm(a)), n);
  return fro_norm(mat_power(a, n)) <= bound;
}

}  // namespace gdz
