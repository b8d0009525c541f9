#pragma once

// Seeded construction of instances satisfying the hypotheses of each result,
// and of near misses that violate exactly one hypothesis.

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/QR>
#include <unsupported/Eigen/KroneckerProduct>

#include "gdz/additive.hpp"
#include "gdz/block.hpp"

namespace gdz {

using Rng = std::mt19937_64;

enum class Preset {
  shift_pair,    ///< "example-2.5": 3x3 shifts with ab = (1/2) a^pi b a b^pi
  shift_blocks,  ///< "example-4.4": 4x4 shift blocks, AB = 3 A^pi B D, DC = 3 D^pi C A
};

inline constexpr std::array<std::string_view, 2> preset_ids = {"example-2.5", "example-4.4"};

constexpr std::string_view preset_id(Preset p) { return preset_ids[static_cast<std::size_t>(p)]; }

constexpr std::optional<Preset> parse_preset(std::string_view id) {
  if (id == preset_ids[0]) return Preset::shift_pair;
  if (id == preset_ids[1]) return Preset::shift_blocks;
  return std::nullopt;
}

struct CaseSpec {
  Target target = Target::additive;
  Index dim = 4;              ///< matrix size, or size of A for block results
  std::optional<Index> dim2;  ///< size of D for block results (defaults to dim)
  Complex lambda{0.5, 0.0};
  std::uint64_t seed = 0;
  bool negate = false;
  std::optional<Preset> preset;

  void validate() const {
    if (!preset) {
      if (dim < 2) throw Error("CaseSpec: dim must be at least 2");
      if (dim2 && *dim2 < 2) throw Error("CaseSpec: dim2 must be at least 2");
    }
    if (lambda == Complex(0.0) || !std::isfinite(lambda.real()) || !std::isfinite(lambda.imag())) {
      throw Error("CaseSpec: lambda must be finite and nonzero");
    }
    if (preset && negate) throw Error("CaseSpec: presets cannot be negated");
  }
};

struct PairCase {
  Matrix a;
  Matrix b;
};

using CaseData = std::variant<PairCase, Block2x2>;

struct Instance {
  std::string name;
  Target target = Target::additive;
  Complex lambda{1.0, 0.0};
  bool negated = false;
  CaseData data;
  std::vector<ConditionCheck> certificate;
};

/// The matrix whose Drazin inverse the target's formula computes: a + b, or
/// the assembled block matrix.
inline Matrix combined_matrix(const CaseData& data) {
  if (const auto* p = std::get_if<PairCase>(&data)) return p->a + p->b;
  return assemble(std::get<Block2x2>(data));
}

/// Hypothesis checks of `target` on `data`.
inline std::vector<ConditionCheck> certify(Target target, const CaseData& data,
                                           std::optional<Complex> lambda,
                                           const Tolerance& tol = {}) {
  if (is_block_target(target)) {
    const auto* blk = std::get_if<Block2x2>(&data);
    if (!blk) throw Error("certify: target " + std::string(target_id(target)) + " needs blocks");
    return check_hypothesis(*blk, target, lambda, tol);
  }
  const auto* p = std::get_if<PairCase>(&data);
  if (!p) throw Error("certify: target " + std::string(target_id(target)) + " needs a pair");
  switch (target) {
    case Target::nilpotent_pair:
      return nilpotent_pair_conditions(p->a, p->b, lambda, tol);
    case Target::nilpotent_drazin:
      return nilpotent_drazin_conditions(p->a, p->b, lambda, tol);
    default:
      return additive_conditions(p->a, p->b, lambda, tol);
  }
}

namespace detail {

inline Complex gaussian_complex(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const double re = g(rng);
  const double im = g(rng);
  return {re, im};
}

/// Magnitude uniform in [lo, hi], uniform phase.
inline Complex random_weight(Rng& rng, double lo = 0.5, double hi = 1.5) {
  std::uniform_real_distribution<double> mag(lo, hi);
  std::uniform_real_distribution<double> arg(-3.141592653589793, 3.141592653589793);
  const double r = mag(rng);
  return std::polar(r, arg(rng));
}

inline Index uniform_index(Rng& rng, Index lo, Index hi) {
  std::uniform_int_distribution<Index> d(lo, hi);
  return d(rng);
}

inline bool coin(Rng& rng, double p = 0.5) {
  std::bernoulli_distribution d(p);
  return d(rng);
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return d(rng);
}

inline Matrix gaussian_matrix(Index rows, Index cols, Rng& rng) {
  Matrix out(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) out(i, j) = gaussian_complex(rng);
  }
  return out;
}

inline Matrix random_unitary(Index k, Rng& rng) {
  if (k == 0) return Matrix(0, 0);
  const Matrix g = gaussian_matrix(k, k, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < k; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

/// Invertible with singular values in [0.5, 2].
inline Matrix random_core(Index k, Rng& rng) {
  if (k == 0) return Matrix(0, 0);
  Eigen::VectorXcd s(k);
  for (Index i = 0; i < k; ++i) s(i) = uniform_real(rng, 0.5, 2.0);
  return random_unitary(k, rng) * s.asDiagonal() * random_unitary(k, rng).adjoint();
}

/// Direct sum of weighted Jordan blocks of size at most 4.
inline Matrix random_nilpotent(Index k, Rng& rng) {
  Matrix out = zeros(k, k);
  Index start = 0;
  while (start < k) {
    const Index len = uniform_index(rng, 1, std::min<Index>(4, k - start));
    for (Index j = 0; j + 1 < len; ++j) out(start + j + 1, start + j) = random_weight(rng);
    start += len;
  }
  return out;
}

inline void scale_to(Matrix& a, double target) {
  const double n = fro_norm(a);
  if (n > 0.0) a *= target / n;
}

/// Weighted shifts on one chain e_1 -> ... -> e_len: f moves e_j to
/// e_{j+sf}, g moves e_j to e_{j+sg}, and fg = lambda gf.
struct ChainPair {
  Matrix f;
  Matrix g;
};

inline ChainPair lambda_chain(Index len, Index sf, Index sg, Complex lambda, bool with_f,
                              bool with_g, Rng& rng) {
  std::vector<Complex> fw(static_cast<std::size_t>(len + 1), Complex(0.0));
  std::vector<Complex> gw(fw);
  auto at = [](std::vector<Complex>& v, Index j) -> Complex& { return v[static_cast<std::size_t>(j)]; };
  if (with_f) {
    for (Index j = 1; j + sf <= len; ++j) at(fw, j) = random_weight(rng);
  }
  if (with_g) {
    if (with_f) {
      for (Index j = 1; j <= std::min(sf, len - sg); ++j) at(gw, j) = random_weight(rng);
      for (Index j = 1; j + sf <= len - sg; ++j) {
        at(gw, j + sf) = at(gw, j) * at(fw, j + sg) / (lambda * at(fw, j));
      }
    } else {
      for (Index j = 1; j + sg <= len; ++j) at(gw, j) = random_weight(rng);
    }
  }
  ChainPair out{zeros(len, len), zeros(len, len)};
  for (Index j = 1; j <= len; ++j) {
    if (j + sf <= len) out.f(j + sf - 1, j - 1) = at(fw, j);
    if (j + sg <= len) out.g(j + sg - 1, j - 1) = at(gw, j);
  }
  return out;
}

/// Nilpotent f, g of size k with fg = lambda gf, as a direct sum of chains.
inline ChainPair lambda_nilpotent_pair(Index k, Complex lambda, Rng& rng) {
  ChainPair out{zeros(k, k), zeros(k, k)};
  Index start = 0;
  while (start < k) {
    const Index len = uniform_index(rng, 1, std::min<Index>(4, k - start));
    const Index kind = uniform_index(rng, 0, 4);  // 0..2 both, 3 f only, 4 g only
    const ChainPair c = lambda_chain(len, 1, 1, lambda, kind != 4, kind != 3, rng);
    out.f.block(start, start, len, len) = c.f;
    out.g.block(start, start, len, len) = c.g;
    start += len;
  }
  scale_to(out.f, uniform_real(rng, 1.0, 2.0));
  scale_to(out.g, uniform_real(rng, 1.0, 2.0));
  return out;
}

inline Matrix conjugate(const Matrix& x, const Matrix& u) { return u * x * u.adjoint(); }

inline void conjugate(Block2x2& blk, const Matrix& u1, const Matrix& u2) {
  blk.A = u1 * blk.A * u1.adjoint();
  blk.B = u1 * blk.B * u2.adjoint();
  blk.C = u2 * blk.C * u1.adjoint();
  blk.D = u2 * blk.D * u2.adjoint();
}

// vec(l X r) = (r^T (x) l) vec(X), column-major vec.
inline Matrix sandwich(const Matrix& l, const Matrix& r) {
  return Eigen::kroneckerProduct(r.transpose(), l).eval();
}

inline Matrix stack(const std::vector<Matrix>& ops) {
  Index rows = 0;
  const Index cols = ops.front().cols();
  for (const auto& op : ops) rows += op.rows();
  Matrix out(rows, cols);
  Index at = 0;
  for (const auto& op : ops) {
    out.middleRows(at, op.rows()) = op;
    at += op.rows();
  }
  return out;
}

/// Random element of the common kernel of `ops`, reshaped to rows x cols and
/// scaled to Frobenius norm `norm`; zero if the kernel is trivial.
inline Matrix random_kernel_element(const std::vector<Matrix>& ops, Index rows, Index cols,
                                    double norm, Rng& rng) {
  const Matrix op = stack(ops);
  const double cutoff = 1e-10 * std::max(1.0, op.size() ? op.cwiseAbs().maxCoeff() : 0.0);
  const Matrix basis = kernel_basis(op, cutoff);
  if (basis.cols() == 0) return zeros(rows, cols);
  Eigen::VectorXcd coeff(basis.cols());
  for (Index i = 0; i < coeff.size(); ++i) coeff(i) = gaussian_complex(rng);
  Eigen::VectorXcd v = basis * coeff;
  Matrix out = Eigen::Map<const Matrix>(v.data(), rows, cols);
  scale_to(out, norm);
  return out;
}

// ---- pair targets ------------------------------------------------------

inline PairCase pair_nilpotent(const CaseSpec& spec, Rng& rng) {
  const Index k = spec.dim;
  ChainPair fg = lambda_nilpotent_pair(k, spec.lambda, rng);
  if (spec.negate) {
    // An unrelated nilpotent in a rotated basis keeps both operands
    // nilpotent and breaks the lambda-relation.
    Matrix e = gaussian_matrix(k, k, rng).triangularView<Eigen::StrictlyLower>();
    scale_to(e, uniform_real(rng, 1.0, 2.0));
    fg.g = conjugate(e, random_unitary(k, rng));
  }
  const Matrix u = random_unitary(k, rng);
  return {conjugate(fg.f, u), conjugate(fg.g, u)};
}

// a = diag(0, N), b = diag(core, M) with NM = lambda MN.
inline PairCase pair_nilpotent_drazin(const CaseSpec& spec, Rng& rng) {
  const Index k = spec.dim;
  const Index c = uniform_index(rng, 0, k - 1);
  const ChainPair nm = lambda_nilpotent_pair(k - c, spec.lambda, rng);
  Matrix a = block_diag(zeros(c, c), nm.f);
  Matrix b = block_diag(random_core(c, rng), nm.g);
  if (spec.negate) {
    Matrix e = gaussian_matrix(k, k, rng);
    scale_to(e, 0.5 * fro_norm(b));
    b += e;
  }
  const Matrix u = random_unitary(k, rng);
  return {conjugate(a, u), conjugate(b, u)};
}

// a = diag(core1, 0, N), b = diag(0, core2, M) with NM = lambda MN.
inline PairCase pair_additive(const CaseSpec& spec, Rng& rng) {
  const Index k = spec.dim;
  const Index c1 = uniform_index(rng, 0, k);
  const Index c2 = uniform_index(rng, 0, k - c1);
  const Index nil = k - c1 - c2;
  const ChainPair nm = lambda_nilpotent_pair(nil, spec.lambda, rng);
  Matrix a = zeros(k, k);
  Matrix b = zeros(k, k);
  a.topLeftCorner(c1, c1) = random_core(c1, rng);
  b.block(c1, c1, c2, c2) = random_core(c2, rng);
  a.bottomRightCorner(nil, nil) = nm.f;
  b.bottomRightCorner(nil, nil) = nm.g;
  if (spec.negate) {
    Matrix e = gaussian_matrix(k, k, rng);
    scale_to(e, std::max(1.0, 0.5 * fro_norm(b)));
    b += e;
  }
  const Matrix u = random_unitary(k, rng);
  return {conjugate(a, u), conjugate(b, u)};
}

// ---- graded construction for the P + Q splittings ----------------------
//
// The space splits as X1 + X2 + X3, each graded by the block structure.
// Q is invertible on X1 and vanishes on X2; P vanishes on X1 and is
// invertible on X2; on X3 both are nilpotent (Q odd, P even) and satisfy
// the lambda-relation of whichever of the two plays a.

inline Block2x2 graded_blocks(Index m, Index n, Complex lambda, bool q_is_a, Rng& rng) {
  const Index r = uniform_index(rng, 0, std::min(m, n));
  const Index p0 = uniform_index(rng, 0, m - r);
  const Index p1 = uniform_index(rng, 0, n - r);
  const Index size = m + n;
  Matrix P = zeros(size, size);
  Matrix Q = zeros(size, size);
  Q.block(0, m, r, r) = random_core(r, rng);
  Q.block(m, 0, r, r) = random_core(r, rng);
  P.block(r, r, p0, p0) = random_core(p0, rng);
  P.block(m + r, m + r, p1, p1) = random_core(p1, rng);

  Matrix odd = zeros(size, size);
  Matrix even = zeros(size, size);
  std::array<Index, 2> next = {r + p0, m + r + p1};
  std::array<Index, 2> left = {m - r - p0, n - r - p1};
  while (left[0] + left[1] > 0) {
    std::vector<Index> pos;
    Matrix odd_loc;
    Matrix even_loc;
    if (left[0] > 0 && left[1] > 0 && coin(rng, 0.7)) {
      // Alternating grades: odd maps shift by one, even maps by two.
      const Index g0 = uniform_index(rng, 0, 1);
      Index max_len = 2;
      while (max_len < 5 && (max_len + 2) / 2 <= left[static_cast<std::size_t>(g0)] &&
             (max_len + 1) / 2 <= left[static_cast<std::size_t>(1 - g0)]) {
        ++max_len;
      }
      const Index len = uniform_index(rng, 2, max_len);
      for (Index j = 0; j < len; ++j) {
        const auto g = static_cast<std::size_t>((g0 + j) % 2);
        pos.push_back(next[g]++);
        --left[g];
      }
      const Index kind = uniform_index(rng, 0, 3);  // 0, 1 both, 2 odd only, 3 even only
      const bool with_odd = kind != 3;
      const bool with_even = kind != 2;
      if (q_is_a) {
        const ChainPair c = lambda_chain(len, 1, 2, lambda, with_odd, with_even, rng);
        odd_loc = c.f;
        even_loc = c.g;
      } else {
        const ChainPair c = lambda_chain(len, 2, 1, lambda, with_even, with_odd, rng);
        even_loc = c.f;
        odd_loc = c.g;
      }
    } else {
      // Constant grade: only the even map acts.
      std::size_t g = left[0] > 0 ? 0 : 1;
      if (left[0] > 0 && left[1] > 0) g = static_cast<std::size_t>(uniform_index(rng, 0, 1));
      const Index len = uniform_index(rng, 1, std::min<Index>(4, left[g]));
      for (Index j = 0; j < len; ++j) pos.push_back(next[g]++);
      left[g] -= len;
      const ChainPair c = lambda_chain(len, 1, 1, lambda, true, false, rng);
      even_loc = c.f;
      odd_loc = zeros(len, len);
    }
    for (std::size_t i = 0; i < pos.size(); ++i) {
      for (std::size_t j = 0; j < pos.size(); ++j) {
        const auto ii = static_cast<Index>(i);
        const auto jj = static_cast<Index>(j);
        odd(pos[i], pos[j]) = odd_loc(ii, jj);
        even(pos[i], pos[j]) = even_loc(ii, jj);
      }
    }
  }
  scale_to(odd, uniform_real(rng, 1.0, 2.0));
  scale_to(even, uniform_real(rng, 1.0, 2.0));
  P += even;
  Q += odd;

  Block2x2 blk{P.topLeftCorner(m, m), Q.topRightCorner(m, n), Q.bottomLeftCorner(n, m),
               P.bottomRightCorner(n, n)};
  conjugate(blk, random_unitary(m, rng), random_unitary(n, rng));
  return blk;
}

// Near miss for the graded targets: move B (or C) inside the set that keeps
// BC and CB fixed, which disturbs only the condition containing it.
inline bool perturb_graded(Block2x2& blk, Rng& rng) {
  const Index m = blk.m();
  const Index n = blk.n();
  const bool on_b = coin(rng);
  for (int pass = 0; pass < 2; ++pass) {
    const bool b_side = (pass == 0) == on_b;
    if (b_side) {
      const Matrix e = random_kernel_element(
          {sandwich(identity(m), blk.C), sandwich(blk.C, identity(n))}, m, n,
          std::max(1.0, fro_norm(blk.B)), rng);
      if (fro_norm(e) == 0.0) continue;
      blk.B += e;
    } else {
      const Matrix e = random_kernel_element(
          {sandwich(blk.B, identity(m)), sandwich(identity(n), blk.B)}, n, m,
          std::max(1.0, fro_norm(blk.C)), rng);
      if (fro_norm(e) == 0.0) continue;
      blk.C += e;
    }
    return true;
  }
  return false;
}

// ---- kernel construction for the remaining block targets ---------------
//
// A and D are drawn with known spectral idempotents; every hypothesis is
// then linear in B for fixed C and in C for fixed B.

struct SpectralDraw {
  Matrix a;
  Matrix pi;
};

inline SpectralDraw draw_spectral(Index k, Rng& rng) {
  const Index c = uniform_index(rng, 0, k - 1);
  const Matrix u = random_unitary(k, rng);
  return {conjugate(block_diag(random_core(c, rng), random_nilpotent(k - c, rng)), u),
          conjugate(block_diag(zeros(c, c), identity(k - c)), u)};
}

struct LinearSystem {
  std::vector<Matrix> b_ops;  ///< hypotheses on B alone, as operators on vec(B)
  std::vector<Matrix> c_ops;  ///< hypotheses on C alone
  bool bc_zero = true;        ///< coupling BC = 0 (else CB = 0)
};

inline LinearSystem linear_system(Target t, const Matrix& A, const Matrix& Api, const Matrix& D,
                                  const Matrix& Dpi, Complex lambda) {
  const Index m = A.rows();
  const Index n = D.rows();
  const Matrix Im = identity(m);
  const Matrix In = identity(n);
  switch (t) {
    case Target::block_qp_bc_zero:
      return {{sandwich(Im, D) - lambda * sandwich(A, Dpi)},
              {sandwich(In, A) - lambda * sandwich(D, Api)},
              true};
    case Target::block_pq_bc_zero:
      return {{sandwich(A, In) - lambda * sandwich(Api, D)}, {sandwich(D, Im)}, true};
    case Target::block_core:
      return {{sandwich(Im, D) - lambda * sandwich(Api * A, In)},
              {sandwich(D, Im) - (1.0 / lambda) * sandwich(Dpi, A * Api)},
              true};
    case Target::block_core_exchanged:
      return {{sandwich(A, In) - (1.0 / lambda) * sandwich(Api, D * Dpi)},
              {sandwich(In, A) - lambda * sandwich(Dpi * D, Im)},
              false};
    case Target::block_bc_zero:
      return {{sandwich(A, In) - lambda * sandwich(Api, D)},
              {sandwich(D, Im) - lambda * sandwich(Dpi, A)},
              true};
    default:
      throw Error("linear_system: target has no linear hypotheses");
  }
}

// Coupling as an operator on B for fixed C, or on C for fixed B.
inline Matrix coupling_on_b(const LinearSystem& sys, const Matrix& C, Index m, Index n) {
  return sys.bc_zero ? sandwich(identity(m), C) : sandwich(C, identity(n));
}
inline Matrix coupling_on_c(const LinearSystem& sys, const Matrix& B, Index m, Index n) {
  return sys.bc_zero ? sandwich(B, identity(m)) : sandwich(identity(n), B);
}

inline Block2x2 kernel_blocks(Target t, Index m, Index n, Complex lambda, bool negate, Rng& rng) {
  const SpectralDraw a = draw_spectral(m, rng);
  const SpectralDraw d = draw_spectral(n, rng);
  const LinearSystem sys = linear_system(t, a.a, a.pi, d.a, d.pi, lambda);
  Matrix B = zeros(m, n);
  Matrix C = zeros(n, m);
  for (int attempt = 0; attempt < 8; ++attempt) {
    const double nb = uniform_real(rng, 1.0, 3.0);
    const double nc = uniform_real(rng, 1.0, 3.0);
    if (coin(rng)) {
      B = random_kernel_element(sys.b_ops, m, n, nb, rng);
      std::vector<Matrix> ops = sys.c_ops;
      ops.push_back(coupling_on_c(sys, B, m, n));
      C = random_kernel_element(ops, n, m, nc, rng);
    } else {
      C = random_kernel_element(sys.c_ops, n, m, nc, rng);
      std::vector<Matrix> ops = sys.b_ops;
      ops.push_back(coupling_on_b(sys, C, m, n));
      B = random_kernel_element(ops, m, n, nb, rng);
    }
    if (fro_norm(B) > 0.0 || fro_norm(C) > 0.0) break;
  }
  if (negate) {
    // Perturb one of B, C within the kernel of all but one of the
    // conditions that involve it.
    const bool on_b = coin(rng);
    const bool break_coupling = coin(rng);
    if (on_b) {
      std::vector<Matrix> keep = break_coupling ? sys.b_ops
                                                : std::vector<Matrix>{coupling_on_b(sys, C, m, n)};
      B += random_kernel_element(keep, m, n, std::max(1.0, fro_norm(B)), rng);
    } else {
      std::vector<Matrix> keep = break_coupling ? sys.c_ops
                                                : std::vector<Matrix>{coupling_on_c(sys, B, m, n)};
      C += random_kernel_element(keep, n, m, std::max(1.0, fro_norm(C)), rng);
    }
  }
  return {a.a, B, C, d.a};
}

inline Instance preset_instance(Preset p, const Tolerance& tol) {
  Instance out;
  out.name = std::string(preset_id(p));
  if (p == Preset::shift_pair) {
    Matrix a = zeros(3, 3);
    Matrix b = zeros(3, 3);
    a(1, 0) = 1.0;
    a(2, 1) = 1.0;
    b(1, 0) = 1.0;
    b(2, 1) = 2.0;
    out.target = Target::additive;
    out.lambda = 0.5;
    out.data = PairCase{a, b};
  } else {
    Matrix shift = zeros(4, 4);
    shift(0, 1) = 1.0;
    shift(1, 2) = 1.0;
    shift(2, 3) = 1.0;
    Matrix bc = zeros(4, 4);
    bc(0, 2) = 1.0;
    bc(1, 3) = 3.0;
    out.target = Target::block_bc_zero;
    out.lambda = 3.0;
    out.data = Block2x2{shift, bc, bc, shift};
  }
  out.certificate = certify(out.target, out.data, out.lambda, tol);
  return out;
}

inline std::string instance_name(const CaseSpec& spec) {
  std::string name = std::string(target_id(spec.target)) + "-d" + std::to_string(spec.dim);
  if (spec.dim2 && is_block_target(spec.target)) name += "x" + std::to_string(*spec.dim2);
  name += "-s" + std::to_string(spec.seed);
  if (spec.negate) name += "-neg";
  return name;
}

}  // namespace detail

inline constexpr int generation_attempts = 64;

/// Builds an instance for `spec`. Deterministic in the spec; throws
/// GenerationFailed if no attempt yields a certificate with all conditions
/// holding (or, when negated, exactly one failing).
inline Instance generate(const CaseSpec& spec, const Tolerance& tol = {}) {
  spec.validate();
  if (spec.preset) return detail::preset_instance(*spec.preset, tol);

  std::seed_seq seq{static_cast<std::uint32_t>(spec.seed),
                    static_cast<std::uint32_t>(spec.seed >> 32),
                    static_cast<std::uint32_t>(spec.target),
                    static_cast<std::uint32_t>(spec.dim),
                    static_cast<std::uint32_t>(spec.dim2.value_or(0)),
                    static_cast<std::uint32_t>(spec.negate)};
  Rng rng(seq);
  const Index m = spec.dim;
  const Index n = spec.dim2.value_or(spec.dim);

  for (int attempt = 0; attempt < generation_attempts; ++attempt) {
    try {
      CaseData data;
      switch (spec.target) {
        case Target::nilpotent_pair:
          data = detail::pair_nilpotent(spec, rng);
          break;
        case Target::nilpotent_drazin:
          data = detail::pair_nilpotent_drazin(spec, rng);
          break;
        case Target::additive:
          data = detail::pair_additive(spec, rng);
          break;
        case Target::block_qp:
        case Target::block_pq: {
          Block2x2 blk = detail::graded_blocks(m, n, spec.lambda, spec.target == Target::block_qp, rng);
          if (spec.negate && !detail::perturb_graded(blk, rng)) continue;
          data = std::move(blk);
          break;
        }
        default:
          data = detail::kernel_blocks(spec.target, m, n, spec.lambda, spec.negate, rng);
          break;
      }
      std::vector<ConditionCheck> cert = certify(spec.target, data, spec.lambda, tol);
      const std::size_t failing = count_failing(cert);
      if (failing != (spec.negate ? 1u : 0u)) continue;
      drazin_oracle(combined_matrix(data), tol);  // reject numerically ambiguous cases
      return {detail::instance_name(spec), spec.target, spec.lambda, spec.negate, std::move(data),
              std::move(cert)};
    } catch (const Error&) {
      continue;
    }
  }
  throw GenerationFailed("generate: no valid " + std::string(spec.negate ? "near-miss " : "") +
                         "instance for target " + std::string(target_id(spec.target)) +
                         " after " + std::to_string(generation_attempts) + " attempts");
}

}  // namespace gdz
