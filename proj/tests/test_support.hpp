#pragma once

// Helpers shared by the test binaries. Expected Drazin data comes from
// explicit core-nilpotent constructions a = S diag(K, N) S^-1, whose Drazin
// inverse S diag(K^-1, 0) S^-1 is known without any rank decision.

#include <random>

#include "gdz/gdz.hpp"

namespace gdz::test {

using Rng = std::mt19937_64;

inline Complex rand_complex(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const double re = g(rng);
  return {re, g(rng)};
}

inline Matrix rand_matrix(Index rows, Index cols, Rng& rng) {
  Matrix a(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) a(i, j) = rand_complex(rng);
  }
  return a;
}

inline Matrix rand_unitary(Index n, Rng& rng) {
  Eigen::HouseholderQR<Matrix> qr(rand_matrix(n, n, rng));
  return qr.householderQ();
}

/// Invertible with singular values in [lo, hi].
inline Matrix rand_well_conditioned(Index n, Rng& rng, double lo = 0.5, double hi = 2.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXcd s(n);
  for (Index i = 0; i < n; ++i) s(i) = u(rng);
  return rand_unitary(n, rng) * s.asDiagonal() * rand_unitary(n, rng).adjoint();
}

/// Jordan-type nilpotent: blocks of the given sizes with unit superdiagonal
/// weights scaled by `w`.
inline Matrix jordan_nilpotent(const std::vector<Index>& sizes, Complex w = 1.0) {
  Index n = 0;
  for (Index s : sizes) n += s;
  Matrix out = zeros(n, n);
  Index at = 0;
  for (Index s : sizes) {
    for (Index j = 0; j + 1 < s; ++j) out(at + j, at + j + 1) = w;
    at += s;
  }
  return out;
}

struct KnownDrazin {
  Matrix a;
  Matrix d;
  Matrix pi;
  Index index = 0;
};

/// a = S diag(K, N) S^-1 with K of size `core`, N nilpotent with Jordan
/// blocks `nil`, S well conditioned (unitary when `unitary_similarity`).
inline KnownDrazin known_drazin(Index core, const std::vector<Index>& nil, Rng& rng,
                                bool unitary_similarity = false) {
  const Matrix k = rand_well_conditioned(core, rng);
  const Matrix n = jordan_nilpotent(nil);
  const Index size = core + n.rows();
  const Matrix s = unitary_similarity ? rand_unitary(size, rng) : rand_well_conditioned(size, rng);
  const Matrix si = s.inverse();
  KnownDrazin out;
  out.a = s * block_diag(k, n) * si;
  out.d = s * block_diag(k.inverse(), zeros(n.rows(), n.rows())) * si;
  out.pi = s * block_diag(zeros(core, core), identity(n.rows())) * si;
  Index idx = core == size ? 0 : 1;
  for (Index b : nil) idx = std::max(idx, b);
  out.index = size == core ? 0 : idx;
  return out;
}

/// Random partition of n into parts of size at most `max_part`.
inline std::vector<Index> rand_partition(Index n, Rng& rng, Index max_part = 4) {
  std::vector<Index> parts;
  while (n > 0) {
    std::uniform_int_distribution<Index> d(1, std::min(n, max_part));
    parts.push_back(d(rng));
    n -= parts.back();
  }
  return parts;
}

inline double rel_diff(const Matrix& x, const Matrix& y) {
  return fro_norm(x - y) / scale_of(x, y);
}

/// The lower shift of size 3 (the a of the 3x3 additive example).
inline Matrix lower_shift3() {
  Matrix a = zeros(3, 3);
  a(1, 0) = 1.0;
  a(2, 1) = 1.0;
  return a;
}

inline Matrix example_b3() {
  Matrix b = zeros(3, 3);
  b(1, 0) = 1.0;
  b(2, 1) = 2.0;
  return b;
}

inline Block2x2 example_blocks8() {
  Matrix shift = zeros(4, 4);
  shift(0, 1) = 1.0;
  shift(1, 2) = 1.0;
  shift(2, 3) = 1.0;
  Matrix bc = zeros(4, 4);
  bc(0, 2) = 1.0;
  bc(1, 3) = 3.0;
  return {shift, bc, bc, shift};
}

inline Matrix diag_of(std::initializer_list<Complex> entries) {
  Eigen::VectorXcd v(static_cast<Index>(entries.size()));
  Index i = 0;
  for (Complex e : entries) v(i++) = e;
  return v.asDiagonal();
}

}  // namespace gdz::test
