#pragma once

// Drazin inverse of M = [[A, B], [C, D]] by splitting M = P + Q and applying
// the general sum formula, plus the closed-form block expressions each
// splitting yields.

#include <optional>
#include <string>
#include <vector>

#include "gdz/additive.hpp"
#include "gdz/pierce.hpp"
#include "gdz/target.hpp"

namespace gdz {

/// A (m x m), B (m x n), C (n x m), D (n x n).
struct Block2x2 {
  Matrix A, B, C, D;

  Index m() const { return A.rows(); }
  Index n() const { return D.rows(); }

  void validate() const {
    const Index m = A.rows();
    const Index n = D.rows();
    if (m <= 0 || n <= 0) throw DimensionMismatch("Block2x2: both diagonal blocks must be non-empty");
    if (A.cols() != m || D.cols() != n) throw DimensionMismatch("Block2x2: A and D must be square");
    if (B.rows() != m || B.cols() != n) {
      throw DimensionMismatch("Block2x2: B must be " + std::to_string(m) + "x" + std::to_string(n));
    }
    if (C.rows() != n || C.cols() != m) {
      throw DimensionMismatch("Block2x2: C must be " + std::to_string(n) + "x" + std::to_string(m));
    }
  }
};

inline Matrix assemble(const Block2x2& blk) {
  blk.validate();
  const Index m = blk.m();
  const Index n = blk.n();
  Matrix out(m + n, m + n);
  out << blk.A, blk.B, blk.C, blk.D;
  return out;
}

/// (D, C, B, A): the blocks of Pi^T M Pi for the exchange permutation Pi.
inline Block2x2 exchanged(const Block2x2& blk) { return {blk.D, blk.C, blk.B, blk.A}; }

/// Pi with M = Pi [[D, C], [B, A]] Pi^T; Pi is (m+n) x (n+m).
inline Matrix exchange_permutation(Index m, Index n) {
  Matrix pi = zeros(m + n, n + m);
  pi.topRightCorner(m, m) = identity(m);
  pi.bottomLeftCorner(n, n) = identity(n);
  return pi;
}

enum class SplitScheme {
  diag_offdiag,    ///< P = diag(A, D), Q = [[0, B], [C, 0]]
  core_nilpotent,  ///< P = diag(A A^pi, D), Q = [[A^2 A^d, B], [C, 0]]
};

struct SplitPair {
  Matrix P;
  Matrix Q;
  SplitScheme scheme;
};

/// Spectral data of the blocks shared by every checker and formula.
struct BlockSpectral {
  DrazinResult A, D;
  std::optional<DrazinResult> BC, CB;  // filled when the products are needed
};

inline BlockSpectral block_spectral(const Block2x2& blk, bool with_products,
                                    const Tolerance& tol = {}) {
  blk.validate();
  BlockSpectral s{drazin_oracle(blk.A, tol), drazin_oracle(blk.D, tol), std::nullopt, std::nullopt};
  if (with_products) {
    s.BC = drazin_oracle(blk.B * blk.C, tol, fro_norm(blk.B) * fro_norm(blk.C));
    // (CB)^d by Cline's formula from (BC)^d.
    const Matrix cb = blk.C * blk.B;
    Matrix cbd = cline_drazin(blk.C, blk.B, tol);
    Matrix cbpi = identity(blk.n()) - cb * cbd;
    s.CB = DrazinResult{std::move(cbd), std::move(cbpi), s.BC->index};
  }
  return s;
}

inline SplitPair split(const Block2x2& blk, SplitScheme scheme, const BlockSpectral& s) {
  const Index m = blk.m();
  const Index n = blk.n();
  SplitPair sp{zeros(m + n, m + n), zeros(m + n, m + n), scheme};
  if (scheme == SplitScheme::diag_offdiag) {
    sp.P = block_diag(blk.A, blk.D);
    sp.Q.topRightCorner(m, n) = blk.B;
    sp.Q.bottomLeftCorner(n, m) = blk.C;
  } else {
    sp.P = block_diag(blk.A * s.A.pi, blk.D);
    sp.Q.topLeftCorner(m, m) = blk.A * blk.A * s.A.d;
    sp.Q.topRightCorner(m, n) = blk.B;
    sp.Q.bottomLeftCorner(n, m) = blk.C;
  }
  return sp;
}

namespace detail {

enum class LambdaRelation { same, reciprocal };

struct FactorSpec {
  std::string name;
  Matrix lhs;
  Matrix rhs;
  LambdaRelation relation;
};

struct ZeroSpec {
  std::string name;
  Matrix product;
  double scale;
};

inline FactorCheck zero_check(const Matrix& product, double scale, const Tolerance& tol) {
  FactorCheck out;
  out.residual = fro_norm(product);
  out.holds = out.residual <= tol.eps_check * scale;
  out.degenerate = out.holds;
  return out;
}

// Checks each factor condition (fitting lambda per condition when none is
// given), then, if at least two conditions determine lambda, verifies that
// one lambda serves them all.
inline std::vector<ConditionCheck> evaluate_conditions(const std::vector<FactorSpec>& factors,
                                                       const std::vector<ZeroSpec>& zeros_,
                                                       std::optional<Complex> lambda,
                                                       const Tolerance& tol) {
  std::vector<ConditionCheck> out;
  for (const auto& f : factors) {
    std::optional<Complex> given;
    if (lambda) given = f.relation == LambdaRelation::same ? *lambda : 1.0 / *lambda;
    out.push_back({f.name, check_factor_condition(f.lhs, f.rhs, given, tol)});
  }
  for (const auto& z : zeros_) out.push_back({z.name, zero_check(z.product, z.scale, tol)});

  if (lambda) return out;
  // Reference: the determined condition with the largest right-hand side.
  std::optional<std::size_t> ref;
  std::size_t determined = 0;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const FactorCheck& c = out[i].check;
    if (!c.holds || c.degenerate || !c.lambda) continue;
    ++determined;
    if (!ref || fro_norm(factors[i].rhs) > fro_norm(factors[*ref].rhs)) ref = i;
  }
  if (determined < 2) return out;
  Complex lam = *out[*ref].check.lambda;
  if (factors[*ref].relation == LambdaRelation::reciprocal) lam = 1.0 / lam;

  FactorCheck joint;
  joint.holds = true;
  joint.lambda = lam;
  bool reciprocal = false;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const FactorCheck& c = out[i].check;
    if (!c.holds || c.degenerate) continue;
    const bool rec = factors[i].relation == LambdaRelation::reciprocal;
    reciprocal = reciprocal || rec;
    const FactorCheck again =
        check_factor_condition(factors[i].lhs, factors[i].rhs, rec ? 1.0 / lam : lam, tol);
    joint.residual = std::max(joint.residual, again.residual);
    joint.holds = joint.holds && again.holds;
  }
  out.push_back({reciprocal ? "reciprocal lambda" : "shared lambda", joint});
  return out;
}

}  // namespace detail

/// One check per condition of the named block result (plus a lambda
/// consistency entry when lambda is fitted).
inline std::vector<ConditionCheck> check_hypothesis(const Block2x2& blk, Target target,
                                                    const BlockSpectral& s,
                                                    std::optional<Complex> lambda,
                                                    const Tolerance& tol = {}) {
  using detail::LambdaRelation;
  const Matrix& A = blk.A;
  const Matrix& B = blk.B;
  const Matrix& C = blk.C;
  const Matrix& D = blk.D;
  const Matrix& Api = s.A.pi;
  const Matrix& Dpi = s.D.pi;
  const double bc_scale = scale_of(B, C);
  const double dc_scale = scale_of(D, C);

  std::vector<detail::FactorSpec> f;
  std::vector<detail::ZeroSpec> z;
  auto need_products = [&]() {
    if (!s.BC || !s.CB) throw Error("check_hypothesis: spectral data of BC and CB missing");
  };
  switch (target) {
    case Target::block_qp:
      need_products();
      f.push_back({"BD = lambda (BC)^pi A B D^pi", B * D, s.BC->pi * A * B * Dpi,
                   LambdaRelation::same});
      f.push_back({"CA = lambda (CB)^pi D C A^pi", C * A, s.CB->pi * D * C * Api,
                   LambdaRelation::same});
      break;
    case Target::block_qp_bc_zero:
      f.push_back({"BD = lambda A B D^pi", B * D, A * B * Dpi, LambdaRelation::same});
      f.push_back({"CA = lambda D C A^pi", C * A, D * C * Api, LambdaRelation::same});
      z.push_back({"BC = 0", B * C, bc_scale});
      break;
    case Target::block_pq:
      need_products();
      f.push_back({"AB = lambda A^pi B D (CB)^pi", A * B, Api * B * D * s.CB->pi,
                   LambdaRelation::same});
      f.push_back({"DC = lambda D^pi C A (BC)^pi", D * C, Dpi * C * A * s.BC->pi,
                   LambdaRelation::same});
      break;
    case Target::block_pq_bc_zero:
      f.push_back({"AB = lambda A^pi B D", A * B, Api * B * D, LambdaRelation::same});
      z.push_back({"DC = 0", D * C, dc_scale});
      z.push_back({"BC = 0", B * C, bc_scale});
      break;
    case Target::block_core:
      f.push_back({"BD = lambda A^pi A B", B * D, Api * A * B, LambdaRelation::same});
      f.push_back({"DC = lambda^-1 D^pi C A A^pi", D * C, Dpi * C * A * Api,
                   LambdaRelation::reciprocal});
      z.push_back({"BC = 0", B * C, bc_scale});
      break;
    case Target::block_core_exchanged:
      f.push_back({"CA = lambda D^pi D C", C * A, Dpi * D * C, LambdaRelation::same});
      f.push_back({"AB = lambda^-1 A^pi B D D^pi", A * B, Api * B * D * Dpi,
                   LambdaRelation::reciprocal});
      z.push_back({"CB = 0", C * B, bc_scale});
      break;
    case Target::block_bc_zero:
      f.push_back({"AB = lambda A^pi B D", A * B, Api * B * D, LambdaRelation::same});
      f.push_back({"DC = lambda D^pi C A", D * C, Dpi * C * A, LambdaRelation::same});
      z.push_back({"BC = 0", B * C, bc_scale});
      break;
    default:
      throw Error("check_hypothesis: '" + std::string(target_id(target)) +
                  "' is not a block result");
  }
  return detail::evaluate_conditions(f, z, lambda, tol);
}

inline bool needs_products(Target t) { return t == Target::block_qp || t == Target::block_pq; }

inline std::vector<ConditionCheck> check_hypothesis(const Block2x2& blk, Target target,
                                                    std::optional<Complex> lambda,
                                                    const Tolerance& tol = {}) {
  if (!is_block_target(target)) {
    throw Error("check_hypothesis: '" + std::string(target_id(target)) + "' is not a block result");
  }
  return check_hypothesis(blk, target, block_spectral(blk, needs_products(target), tol), lambda,
                          tol);
}

namespace detail {

inline DrazinResult diag_drazin(const BlockSpectral& s) {
  return {block_diag(s.A.d, s.D.d), block_diag(s.A.pi, s.D.pi), std::max(s.A.index, s.D.index)};
}

// Q = [[0, B], [C, 0]]: Q^d = Q (Q^2)^d with (Q^2)^d = diag((BC)^d, (CB)^d).
inline DrazinResult offdiag_drazin(const Matrix& Q, const BlockSpectral& s) {
  Matrix qd = Q * block_diag(s.BC->d, s.CB->d);
  Matrix qpi = block_diag(s.BC->pi, s.CB->pi);
  return {std::move(qd), std::move(qpi), 0};
}

// Drazin data of the core/nilpotent splitting, in closed form (valid when
// BC = 0): P^d = diag(0, D^d), Q^d = [[A^d, (A^d)^2 B], [C (A^d)^2, C (A^d)^3 B]].
inline std::pair<DrazinResult, DrazinResult> core_split_drazin(const Block2x2& blk,
                                                               const SplitPair& sp,
                                                               const BlockSpectral& s) {
  const Index m = blk.m();
  const Index n = blk.n();
  const Matrix& Ad = s.A.d;
  DrazinResult dp{block_diag(zeros(m, m), s.D.d), block_diag(identity(m), s.D.pi), 0};
  Matrix qd(m + n, m + n);
  qd << Ad, Ad * Ad * blk.B, blk.C * Ad * Ad, blk.C * Ad * Ad * Ad * blk.B;
  Matrix qpi = identity(m + n) - sp.Q * qd;
  return {std::move(dp), DrazinResult{std::move(qd), std::move(qpi), 0}};
}

inline Matrix block_drazin_route(const Block2x2& blk, Target target, const Tolerance& tol) {
  if (target == Target::block_core_exchanged) {
    const Matrix pi = exchange_permutation(blk.m(), blk.n());
    return pi * block_drazin_route(exchanged(blk), Target::block_core, tol) * pi.transpose();
  }
  const BlockSpectral s = block_spectral(blk, target != Target::block_core, tol);
  if (target == Target::block_core) {
    const SplitPair sp = split(blk, SplitScheme::core_nilpotent, s);
    auto [dp, dq] = core_split_drazin(blk, sp, s);
    return additive_drazin_unchecked({sp.P, sp.Q, std::move(dp), std::move(dq)}, tol);
  }
  const SplitPair sp = split(blk, SplitScheme::diag_offdiag, s);
  DrazinResult dp = diag_drazin(s);
  DrazinResult dq = offdiag_drazin(sp.Q, s);
  switch (target) {
    case Target::block_qp:
    case Target::block_qp_bc_zero:
      // QP = lambda Q^pi P Q P^pi: Q plays a, P plays b.
      return additive_drazin_unchecked({sp.Q, sp.P, std::move(dq), std::move(dp)}, tol);
    default:
      // PQ = lambda P^pi Q P Q^pi: P plays a, Q plays b.
      return additive_drazin_unchecked({sp.P, sp.Q, std::move(dp), std::move(dq)}, tol);
  }
}

}  // namespace detail

/// M^d through the splitting of the named result and the general sum
/// formula. Hypotheses are verified first unless `opts.force`.
inline Matrix block_drazin(const Block2x2& blk, Target target, const Tolerance& tol = {},
                           const FormulaOptions& opts = {}) {
  if (!is_block_target(target)) {
    throw Error("block_drazin: '" + std::string(target_id(target)) + "' is not a block result");
  }
  if (!opts.force) {
    require_conditions(check_hypothesis(blk, target, opts.lambda, tol), "block_drazin");
  }
  return detail::block_drazin_route(blk, target, tol);
}

namespace detail {

// [[A^d, (A^d)^2 B + sum_{n>=0} A^n B (D^d)^{n+2}],
//  [C (A^d)^2, D^d + C (A^d)^3 B + sum_{n>=1} sum_{i=1}^{n} D^{i-1} C A^{n-i} B (D^d)^{n+2}]]
inline Matrix core_split_table(const Block2x2& blk, const BlockSpectral& s, const Tolerance& tol) {
  const Matrix& A = blk.A;
  const Matrix& B = blk.B;
  const Matrix& C = blk.C;
  const Matrix& D = blk.D;
  const Matrix& Ad = s.A.d;
  const Matrix& Dd = s.D.d;
  const Index m = blk.m();
  const Index n = blk.n();
  const double scale = scale_of(A, B, C, D, Ad, Dd);

  const Matrix top = power_series(A, 0, B, Dd, 2, scale, tol, "core_split_table (top)");

  // W_n = sum_{i=1}^{n} D^{i-1} C A^{n-i} B, W_{n+1} = D W_n + C A^n B.
  Matrix w = C * B;
  Matrix a_pow = A;
  Matrix dd_pow = Dd * Dd * Dd;
  auto term = [&](Index j) -> Matrix {
    if (j > 0) {
      w = D * w + C * a_pow * B;
      a_pow = a_pow * A;
      dd_pow = dd_pow * Dd;
    }
    return w * dd_pow;
  };
  const Matrix bottom = sum_series(term, m + n, scale, tol, "core_split_table (double)");

  Matrix out(m + n, m + n);
  out << Ad, Ad * Ad * B + top, C * Ad * Ad, Dd + C * Ad * Ad * Ad * B + bottom;
  return out;
}

}  // namespace detail

/// The closed-form block expression of the named result, evaluated as
/// displayed (no hypothesis check). Agrees with block_drazin on valid input.
inline Matrix block_closed_form(const Block2x2& blk, Target target, const Tolerance& tol = {}) {
  if (!is_block_target(target)) {
    throw Error("block_closed_form: '" + std::string(target_id(target)) +
                "' is not a block result");
  }
  if (target == Target::block_core_exchanged) {
    const Matrix pi = exchange_permutation(blk.m(), blk.n());
    return pi * block_closed_form(exchanged(blk), Target::block_core, tol) * pi.transpose();
  }
  const BlockSpectral s = block_spectral(blk, needs_products(target), tol);
  if (target == Target::block_core) return detail::core_split_table(blk, s, tol);

  const Index m = blk.m();
  const Index n = blk.n();
  const Matrix M = assemble(blk);
  const SplitPair sp = split(blk, SplitScheme::diag_offdiag, s);
  const Matrix& P = sp.P;
  const Matrix& Q = sp.Q;
  const Matrix Pd = block_diag(s.A.d, s.D.d);
  const Matrix Ppi = block_diag(s.A.pi, s.D.pi);
  const double scale = scale_of(M, Pd);

  switch (target) {
    case Target::block_qp: {
      const Matrix Qd = Q * block_diag(s.BC->d, s.CB->d);
      const Matrix Qpi = block_diag(s.BC->pi, s.CB->pi);
      const double sc = std::max(scale, fro_norm(Qd));
      Matrix head(m + n, m + n);
      head << s.A.d * s.BC->pi, s.A.pi * blk.B * s.CB->d, s.D.pi * blk.C * s.BC->d,
          s.D.d * s.CB->pi;
      const Matrix s1 = power_series(Pd, 2, Q, M, 0, sc, tol, "closed form (S1)");
      const Matrix s2 = power_series(M, 0, P, Qd, 2, sc, tol, "closed form (S2)");
      const Matrix s3 = power_series(Pd, 1, Q, M, 0, sc, tol, "closed form (S3)");
      return head + s1 * Qpi + Ppi * s2 - s3 * s2 - s1 * P * Qd;
    }
    case Target::block_pq: {
      const Matrix Qd = Q * block_diag(s.BC->d, s.CB->d);
      const Matrix Qpi = block_diag(s.BC->pi, s.CB->pi);
      const double sc = std::max(scale, fro_norm(Qd));
      Matrix head(m + n, m + n);
      head << s.BC->pi * s.A.d, blk.B * s.CB->d * s.D.pi, blk.C * s.BC->d * s.A.pi,
          s.CB->pi * s.D.d;
      const Matrix s1 = power_series(Qd, 2, P, M, 0, sc, tol, "closed form (S1)");
      const Matrix s2 = power_series(M, 0, Q, Pd, 2, sc, tol, "closed form (S2)");
      const Matrix s3 = power_series(Qd, 1, P, M, 0, sc, tol, "closed form (S3)");
      return head + s1 * Ppi + Qpi * s2 - s3 * s2 - s1 * Q * Pd;
    }
    case Target::block_qp_bc_zero:
      return Pd + power_series(Pd, 2, Q, M, 0, scale, tol, "closed form");
    case Target::block_pq_bc_zero:
      return Pd + power_series(M, 0, Q, Pd, 2, scale, tol, "closed form");
    case Target::block_bc_zero: {
      Matrix mp = identity(m + n);
      Matrix ad_pow = s.A.d * s.A.d;
      Matrix dd_pow = s.D.d * s.D.d;
      auto term = [&](Index k) -> Matrix {
        if (k > 0) {
          mp = mp * M;
          ad_pow = ad_pow * s.A.d;
          dd_pow = dd_pow * s.D.d;
        }
        Matrix inner = zeros(m + n, m + n);
        inner.topRightCorner(m, n) = blk.B * dd_pow;
        inner.bottomLeftCorner(n, m) = blk.C * ad_pow;
        return mp * inner;
      };
      return Pd + sum_series(term, m + n, scale, tol, "closed form");
    }
    default:
      break;
  }
  throw Error("block_closed_form: unhandled result");
}

/// The simplified table for the core/nilpotent splitting, verified against
/// the general route. Throws ReconciliationError if the two disagree.
inline Matrix simplified_core_split(const Block2x2& blk, const Tolerance& tol = {},
                                    const FormulaOptions& opts = {}) {
  if (!opts.force) {
    require_conditions(check_hypothesis(blk, Target::block_core, opts.lambda, tol),
                       "simplified_core_split");
  }
  const BlockSpectral s = block_spectral(blk, false, tol);
  Matrix table = detail::core_split_table(blk, s, tol);
  const Matrix general = detail::block_drazin_route(blk, Target::block_core, tol);
  const double diff = fro_norm(table - general);
  const double scale = scale_of(assemble(blk), general);
  if (diff > tol.eps_match * scale) {
    throw ReconciliationError("simplified_core_split: closed form differs from the general route by " +
                              std::to_string(diff));
  }
  return table;
}

}  // namespace gdz
