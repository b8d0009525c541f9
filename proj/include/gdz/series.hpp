#pragma once

// Truncated evaluation of the infinite series appearing in the Drazin
// formulas. On valid input every series is a finite sum (its terms carry a
// nilpotent factor), so truncation is exact up to rounding.

#include <string>
#include <string_view>
#include <vector>

#include "gdz/linalg.hpp"

namespace gdz {

/// Term norms of one evaluated series, in order.
struct SeriesTrace {
  std::vector<double> term_norms;
};

/// Maximum number of terms for matrices of dimension `dim`.
constexpr Index series_cap(Index dim) { return 2 * dim + 2; }

/// Sums term(0), term(1), ... (called strictly in order). Stops after two
/// consecutive terms below eps_tail * scale; throws ConvergenceError if the
/// cap is reached first.
template <typename TermFn>
Matrix sum_series(TermFn&& term, Index dim, double scale, const Tolerance& tol,
                  std::string_view name, SeriesTrace* trace = nullptr) {
  const Index cap = series_cap(dim);
  const double negligible = tol.eps_tail * scale;
  Matrix total;
  int small_run = 0;
  for (Index n = 0; n < cap; ++n) {
    Matrix t = term(n);
    const double norm = fro_norm(t);
    if (trace) trace->term_norms.push_back(norm);
    if (n == 0) {
      total = std::move(t);
    } else {
      total += t;
    }
    small_run = norm <= negligible ? small_run + 1 : 0;
    if (small_run >= 2) return total;
  }
  throw ConvergenceError(std::string(name) + ": terms still above " +
                         std::to_string(negligible) + " after " + std::to_string(cap) +
                         " terms");
}

/// sum_{n>=0} left^{n+left_offset} * mid * right^{n+right_offset}
inline Matrix power_series(const Matrix& left, Index left_offset, const Matrix& mid,
                           const Matrix& right, Index right_offset, double scale,
                           const Tolerance& tol, std::string_view name,
                           SeriesTrace* trace = nullptr) {
  Matrix lp = mat_power(left, static_cast<unsigned>(left_offset));
  Matrix rp = mat_power(right, static_cast<unsigned>(right_offset));
  auto term = [&](Index n) -> Matrix {
    if (n > 0) {
      lp = lp * left;
      rp = rp * right;
    }
    return lp * mid * rp;
  };
  return sum_series(term, std::max(left.rows(), right.rows()), scale, tol, name, trace);
}

}  // namespace gdz
