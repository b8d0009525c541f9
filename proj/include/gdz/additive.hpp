#pragma once

// Drazin inverse of a sum a + b when a and b commute up to a nonzero factor
// lambda modulo spectral idempotents, plus the checkers for those
// hypotheses.

#include <optional>
#include <string>
#include <vector>

#include "gdz/drazin.hpp"
#include "gdz/series.hpp"

namespace gdz {

/// Outcome of testing lhs = lambda * rhs_base.
struct FactorCheck {
  bool holds = false;
  std::optional<Complex> lambda;  ///< fitted or given factor; empty when degenerate
  double residual = 0.0;
  bool degenerate = false;  ///< both sides vanish, every lambda works
};

struct ConditionCheck {
  std::string name;
  FactorCheck check;
};

inline bool all_hold(const std::vector<ConditionCheck>& checks) {
  for (const auto& c : checks) {
    if (!c.check.holds) return false;
  }
  return true;
}

inline std::size_t count_failing(const std::vector<ConditionCheck>& checks) {
  std::size_t n = 0;
  for (const auto& c : checks) n += c.check.holds ? 0 : 1;
  return n;
}

/// Throws PreconditionViolated naming the first failing condition.
inline void require_conditions(const std::vector<ConditionCheck>& checks, std::string_view what) {
  for (const auto& c : checks) {
    if (!c.check.holds) {
      throw PreconditionViolated(c.name, std::string(what) + ": hypothesis '" + c.name +
                                             "' fails (residual " +
                                             std::to_string(c.check.residual) + ")");
    }
  }
}

/// Tests lhs = lambda * rhs_base. With `given` the factor is fixed; otherwise
/// it is the least-squares fit <rhs, lhs> / |rhs|^2 over the vectorised
/// matrices. A fitted factor of magnitude <= eps_check does not count.
inline FactorCheck check_factor_condition(const Matrix& lhs, const Matrix& rhs_base,
                                          std::optional<Complex> given,
                                          const Tolerance& tol = {}) {
  require_same_shape(lhs, rhs_base, "check_factor_condition");
  const double nl = fro_norm(lhs);
  const double nr = fro_norm(rhs_base);
  const double scale = std::max({1.0, nl, nr});
  const double bound = tol.eps_check * scale;

  FactorCheck out;
  if (nl <= bound && nr <= bound) {
    out.holds = true;
    out.degenerate = true;
    out.residual = std::max(nl, nr);
    return out;
  }
  if (given) {
    out.lambda = *given;
    out.residual = fro_norm(lhs - *given * rhs_base);
    out.holds = *given != Complex(0.0) &&
                out.residual <= tol.eps_check * std::max(scale, std::abs(*given) * nr);
    return out;
  }
  if (nr <= bound) {
    out.residual = nl;
    return out;
  }
  const Complex fitted = rhs_base.conjugate().cwiseProduct(lhs).sum() / (nr * nr);
  out.lambda = fitted;
  out.residual = fro_norm(lhs - fitted * rhs_base);
  out.holds = std::abs(fitted) > tol.eps_check && out.residual <= bound;
  return out;
}

/// Nilpotency recorded as a condition: residual is |a^n| / max(1, |a|)^n.
inline FactorCheck nilpotency_check(const Matrix& a, const Tolerance& tol = {}) {
  FactorCheck out;
  const auto n = static_cast<unsigned>(a.rows());
  out.residual = fro_norm(mat_power(a, n)) / std::pow(std::max(1.0, fro_norm(a)), n);
  out.holds = is_quasinilpotent(a, tol);
  return out;
}

/// Hypotheses for closure of nilpotents under sums: a, b nilpotent and
/// ab = lambda ba.
inline std::vector<ConditionCheck> nilpotent_pair_conditions(const Matrix& a, const Matrix& b,
                                                             std::optional<Complex> lambda,
                                                             const Tolerance& tol = {}) {
  require_square(a, "nilpotent_pair_conditions");
  require_same_shape(a, b, "nilpotent_pair_conditions");
  return {{"a nilpotent", nilpotency_check(a, tol)},
          {"b nilpotent", nilpotency_check(b, tol)},
          {"ab = lambda ba", check_factor_condition(a * b, b * a, lambda, tol)}};
}

/// Hypotheses for a nilpotent plus a Drazin invertible: a nilpotent and
/// ab = lambda b a b^pi.
inline std::vector<ConditionCheck> nilpotent_drazin_conditions(const Matrix& a, const Matrix& b,
                                                               const DrazinResult& db,
                                                               std::optional<Complex> lambda,
                                                               const Tolerance& tol = {}) {
  return {{"a nilpotent", nilpotency_check(a, tol)},
          {"ab = lambda b a b^pi", check_factor_condition(a * b, b * a * db.pi, lambda, tol)}};
}

inline std::vector<ConditionCheck> nilpotent_drazin_conditions(const Matrix& a, const Matrix& b,
                                                               std::optional<Complex> lambda,
                                                               const Tolerance& tol = {}) {
  require_square(a, "nilpotent_drazin_conditions");
  require_same_shape(a, b, "nilpotent_drazin_conditions");
  return nilpotent_drazin_conditions(a, b, drazin_oracle(b, tol), lambda, tol);
}

/// Hypothesis of the general sum formula: ab = lambda a^pi b a b^pi.
inline std::vector<ConditionCheck> additive_conditions(const Matrix& a, const Matrix& b,
                                                       const DrazinResult& da,
                                                       const DrazinResult& db,
                                                       std::optional<Complex> lambda,
                                                       const Tolerance& tol = {}) {
  return {{"ab = lambda a^pi b a b^pi",
           check_factor_condition(a * b, da.pi * b * a * db.pi, lambda, tol)}};
}

inline std::vector<ConditionCheck> additive_conditions(const Matrix& a, const Matrix& b,
                                                       std::optional<Complex> lambda,
                                                       const Tolerance& tol = {}) {
  require_square(a, "additive_conditions");
  require_same_shape(a, b, "additive_conditions");
  return additive_conditions(a, b, drazin_oracle(a, tol), drazin_oracle(b, tol), lambda, tol);
}

struct FormulaOptions {
  std::optional<Complex> lambda;  ///< fixed factor; fitted when empty
  bool force = false;             ///< evaluate even if the hypotheses fail
};

/// For nilpotent a, b with ab = lambda ba, reports whether a + b is
/// nilpotent. Under the hypotheses this is always true.
inline bool nilpotent_sum_closure(const Matrix& a, const Matrix& b, const Tolerance& tol = {}) {
  require_conditions(nilpotent_pair_conditions(a, b, std::nullopt, tol), "nilpotent_sum_closure");
  return is_quasinilpotent(a + b, tol);
}

/// (a+b)^d = b^d + sum_n (b^d)^{n+2} a (a+b)^n for nilpotent a with
/// ab = lambda b a b^pi.
inline Matrix nilpotent_drazin_sum(const Matrix& a, const Matrix& b, const Tolerance& tol = {},
                                   const FormulaOptions& opts = {}) {
  require_square(a, "nilpotent_drazin_sum");
  require_same_shape(a, b, "nilpotent_drazin_sum");
  const DrazinResult db = drazin_oracle(b, tol);
  if (!opts.force) {
    require_conditions(nilpotent_drazin_conditions(a, b, db, opts.lambda, tol),
                       "nilpotent_drazin_sum");
  }
  const double scale = scale_of(a, b, db.d);
  return db.d + power_series(db.d, 2, a, a + b, 0, scale, tol, "nilpotent_drazin_sum");
}

/// Operands of the general sum formula with their Drazin data supplied, so
/// callers can provide inverses obtained by other routes.
struct AdditiveInputs {
  Matrix a;
  Matrix b;
  DrazinResult da;
  DrazinResult db;
};

/// Evaluates the six-term expression for (a+b)^d without checking any
/// hypothesis:
///   b^pi a^d + b^d a^pi + S1 a^pi + b^pi S2 - S3 S2 - S1 b a^d
/// with S1 = sum (b^d)^{n+2} a (a+b)^n, S2 = sum (a+b)^n b (a^d)^{n+2},
/// S3 = sum (b^d)^{k+1} a (a+b)^k. The double series
/// sum_{n,k} (b^d)^{k+1} a (a+b)^{n+k} b (a^d)^{n+2} factors as S3 S2.
inline Matrix additive_drazin_unchecked(const AdditiveInputs& in, const Tolerance& tol = {}) {
  const Matrix& a = in.a;
  const Matrix& b = in.b;
  const Matrix& ad = in.da.d;
  const Matrix& api = in.da.pi;
  const Matrix& bd = in.db.d;
  const Matrix& bpi = in.db.pi;
  const Matrix s = a + b;
  const double scale = scale_of(a, b, ad, bd);

  const Matrix s1 = power_series(bd, 2, a, s, 0, scale, tol, "additive_drazin (S1)");
  const Matrix s2 = power_series(s, 0, b, ad, 2, scale, tol, "additive_drazin (S2)");
  const Matrix s3 = power_series(bd, 1, a, s, 0, scale, tol, "additive_drazin (S3)");
  return bpi * ad + bd * api + s1 * api + bpi * s2 - s3 * s2 - s1 * b * ad;
}

/// (a+b)^d for a, b with ab = lambda a^pi b a b^pi.
inline Matrix additive_drazin(const Matrix& a, const Matrix& b, const Tolerance& tol = {},
                              const FormulaOptions& opts = {}) {
  require_square(a, "additive_drazin");
  require_same_shape(a, b, "additive_drazin");
  AdditiveInputs in{a, b, drazin_oracle(a, tol), drazin_oracle(b, tol)};
  if (!opts.force) {
    require_conditions(additive_conditions(a, b, in.da, in.db, opts.lambda, tol),
                       "additive_drazin");
  }
  return additive_drazin_unchecked(in, tol);
}

}  // namespace gdz
