#pragma once

// Corner decomposition relative to an idempotent, the Drazin inverse of a
// matrix that is triangular with respect to that decomposition, and Cline's
// formula (ab)^d = a ((ba)^d)^2 b.

#include <algorithm>

#include "gdz/drazin.hpp"
#include "gdz/series.hpp"

namespace gdz {

/// The four corners of x relative to an idempotent p, kept at full size:
/// app = p x p, ap1 = p x (1-p), a1p = (1-p) x p, a11 = (1-p) x (1-p).
struct PierceSplit {
  Matrix p;
  Matrix app;
  Matrix ap1;
  Matrix a1p;
  Matrix a11;

  Matrix reconstruct() const { return app + ap1 + a1p + a11; }
};

inline void require_idempotent(const Matrix& p, const Tolerance& tol, std::string_view what) {
  require_square(p, what);
  const double r = fro_norm(p * p - p);
  if (r > tol.eps_check * scale_of(p)) {
    throw NotIdempotent(std::string(what) + ": |p^2 - p| = " + std::to_string(r));
  }
}

inline PierceSplit pierce_split(const Matrix& x, const Matrix& p, const Tolerance& tol = {}) {
  require_square(x, "pierce_split");
  require_same_shape(x, p, "pierce_split");
  require_idempotent(p, tol, "pierce_split");
  const Matrix q = identity(p.rows()) - p;
  return {p, p * x * p, p * x * q, q * x * p, q * x * q};
}

enum class Orientation {
  lower,  ///< x = [[a, 0], [c, b]] relative to p
  upper,  ///< x = [[b, c], [0, a]] relative to p
};

/// Ingredients of the triangular formula. `a` and `b` live in complementary
/// corner algebras whose units are `unit_a` and `unit_b`; spectral
/// idempotents are taken relative to those units.
struct TriangularParts {
  Matrix a, b, c;
  Matrix unit_a, unit_b;
  Matrix a_d, a_pi;
  Matrix b_d, b_pi;
  double scale = 1.0;
  Index dim = 0;

  /// i-th term of sum (b^d)^{i+2} c (a a^pi)^i, before the trailing a^pi.
  Matrix first_term(Index i) const {
    const auto u = static_cast<unsigned>(i);
    return mat_power(b_d, u + 2) * c * mat_power(a * a_pi, u);
  }
  /// i-th term of b^pi sum b^i c (a^d)^{i+2}, written (b b^pi)^i b^pi c (a^d)^{i+2}.
  Matrix second_term(Index i) const {
    const auto u = static_cast<unsigned>(i);
    return mat_power(b * b_pi, u) * b_pi * c * mat_power(a_d, u + 2);
  }
};

inline TriangularParts triangular_parts(const Matrix& x, const Matrix& p, Orientation orientation,
                                        const Tolerance& tol = {}) {
  const PierceSplit split = pierce_split(x, p, tol);
  const Matrix q = identity(p.rows()) - p;
  TriangularParts parts;
  const Matrix* off = nullptr;
  if (orientation == Orientation::lower) {
    parts.a = split.app;
    parts.b = split.a11;
    parts.c = split.a1p;
    parts.unit_a = p;
    parts.unit_b = q;
    off = &split.ap1;
  } else {
    parts.b = split.app;
    parts.a = split.a11;
    parts.c = split.ap1;
    parts.unit_a = q;
    parts.unit_b = p;
    off = &split.a1p;
  }
  const double off_norm = fro_norm(*off);
  if (off_norm > tol.eps_check * scale_of(x)) {
    throw NotTriangular("triangular_drazin: off-triangle corner has norm " +
                        std::to_string(off_norm));
  }
  // Corners carry rounding at the size of x, so rank decisions are made
  // relative to x rather than to the corner itself.
  const double ref = fro_norm(x);
  const DrazinResult da = drazin_oracle(parts.a, tol, ref);
  const DrazinResult db = drazin_oracle(parts.b, tol, ref);
  parts.a_d = da.d;
  parts.b_d = db.d;
  parts.a_pi = parts.unit_a - parts.a * parts.a_d;
  parts.b_pi = parts.unit_b - parts.b * parts.b_d;
  parts.scale = scale_of(x, parts.a_d, parts.b_d);
  parts.dim = x.rows();
  return parts;
}

struct TriangularDrazin {
  Matrix inverse;
  SeriesTrace first;
  SeriesTrace second;
};

inline TriangularDrazin triangular_drazin_detailed(const Matrix& x, const Matrix& p,
                                                   Orientation orientation,
                                                   const Tolerance& tol = {}) {
  const TriangularParts t = triangular_parts(x, p, orientation, tol);
  TriangularDrazin out;
  const Matrix s1 = power_series(t.b_d, 2, t.c, t.a * t.a_pi, 0, t.scale, tol,
                                 "triangular_drazin (first series)", &out.first);
  const Matrix s2 = power_series(t.b * t.b_pi, 0, t.b_pi * t.c, t.a_d, 2, t.scale, tol,
                                 "triangular_drazin (second series)", &out.second);
  const Matrix z = s1 * t.a_pi + s2 - t.b_d * t.c * t.a_d;
  out.inverse = t.a_d + t.b_d + z;
  return out;
}

/// Drazin inverse of x triangular with respect to the idempotent p, from the
/// Drazin inverses of its two diagonal corners.
inline Matrix triangular_drazin(const Matrix& x, const Matrix& p, Orientation orientation,
                                const Tolerance& tol = {}) {
  return triangular_drazin_detailed(x, p, orientation, tol).inverse;
}

/// (ab)^d = a ((ba)^d)^2 b for a (m x n) and b (n x m).
inline Matrix cline_drazin(const Matrix& a, const Matrix& b, const Tolerance& tol = {}) {
  if (a.cols() != b.rows() || a.rows() != b.cols()) {
    throw DimensionMismatch("cline_drazin: need a (m x n) and b (n x m), got " +
                            std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " and " +
                            std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  const Matrix ba_d = drazin_oracle(b * a, tol, fro_norm(a) * fro_norm(b)).d;
  return a * ba_d * ba_d * b;
}

}  // namespace gdz
