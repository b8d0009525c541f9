#include <gtest/gtest.h>

#include "test_support.hpp"

namespace gdz {
namespace {

using test::Rng;

// ---- linalg ---------------------------------------------------------------

TEST(Linalg, MatMulIdentityAndShapes) {
  EXPECT_EQ(mat_mul(identity(2), identity(2)), identity(2));
  EXPECT_THROW(mat_mul(zeros(2, 3), zeros(2, 3)), DimensionMismatch);
}

TEST(Linalg, MatMulExampleProductHasSingleEntry) {
  const Matrix ab = mat_mul(test::lower_shift3(), test::example_b3());
  Matrix expected = zeros(3, 3);
  expected(2, 0) = 1.0;
  EXPECT_EQ(ab, expected);
}

TEST(Linalg, JordanSquareMovesToCorner) {
  const Matrix j = test::jordan_nilpotent({3});
  Matrix expected = zeros(3, 3);
  expected(0, 2) = 1.0;
  EXPECT_EQ(mat_mul(j, j), expected);
}

TEST(Linalg, RankExamples) {
  EXPECT_EQ(rank(zeros(3, 3)), 0);
  EXPECT_EQ(rank(identity(4)), 4);
  EXPECT_EQ(rank(test::lower_shift3()), 2);
  EXPECT_EQ(rank(test::diag_of({1.0, 1e-13})), 1);
}

TEST(Linalg, RankInvariances) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = test::rand_matrix(7, 4, rng) * test::rand_matrix(4, 6, rng);
    EXPECT_EQ(rank(a), 4);
    EXPECT_EQ(rank(Matrix(a.transpose())), 4);
    EXPECT_EQ(rank(Matrix(a.adjoint())), 4);
    const Matrix s = test::rand_well_conditioned(7, rng, 0.1, 10.0);
    EXPECT_EQ(rank(Matrix(s * a)), 4);
  }
}

TEST(Linalg, PseudoInverseExamples) {
  EXPECT_TRUE(pseudo_inverse(identity(3)).isApprox(identity(3)));
  const Matrix z = pseudo_inverse(zeros(2, 3));
  EXPECT_EQ(z.rows(), 3);
  EXPECT_EQ(z.cols(), 2);
  EXPECT_EQ(fro_norm(z), 0.0);
  EXPECT_LT(fro_norm(pseudo_inverse(test::diag_of({2.0, 0.0})) - test::diag_of({0.5, 0.0})), 1e-15);
}

TEST(Linalg, PenroseIdentities) {
  Rng rng(12);
  const Tolerance tol;
  for (int trial = 0; trial < 30; ++trial) {
    std::uniform_int_distribution<Index> dim(1, 12);
    const Index m = dim(rng);
    const Index n = dim(rng);
    const Index r = std::uniform_int_distribution<Index>(1, std::min(m, n))(rng);
    const Matrix a = test::rand_matrix(m, r, rng) * test::rand_matrix(r, n, rng);
    const Matrix x = pseudo_inverse(a);
    const double s = scale_of(a, x);
    EXPECT_LE(fro_norm(a * x * a - a), tol.eps_match * s);
    EXPECT_LE(fro_norm(x * a * x - x), tol.eps_match * s);
    EXPECT_LE(fro_norm(Matrix((a * x).adjoint()) - a * x), tol.eps_match * s);
    EXPECT_LE(fro_norm(Matrix((x * a).adjoint()) - x * a), tol.eps_match * s);
  }
}

TEST(Linalg, NormsAndPowers) {
  EXPECT_EQ(fro_norm(zeros(3, 3)), 0.0);
  EXPECT_DOUBLE_EQ(fro_norm(identity(4)), 2.0);
  Matrix single = zeros(2, 2);
  single(1, 0) = 3.0;
  EXPECT_DOUBLE_EQ(fro_norm(single), 3.0);
  EXPECT_EQ(mat_power(single, 0), identity(2));
  EXPECT_EQ(fro_norm(mat_power(test::lower_shift3(), 3)), 0.0);
  EXPECT_EQ(mat_power(test::diag_of({2.0}), 5), test::diag_of({32.0}));
  EXPECT_THROW(mat_power(zeros(2, 3), 2), DimensionMismatch);
}

TEST(Linalg, MakeMatrixIsRowMajorAndChecked) {
  const std::vector<Complex> e = {1.0, 2.0, 3.0, Complex(0, 4), 5.0, 6.0};
  const Matrix a = make_matrix(2, 3, e);
  EXPECT_EQ(a(0, 1), Complex(2.0));
  EXPECT_EQ(a(1, 0), Complex(0, 4));
  EXPECT_THROW(make_matrix(2, 2, e), DimensionMismatch);
  const std::vector<Complex> bad = {Complex(std::nan(""), 0.0)};
  EXPECT_THROW(make_matrix(1, 1, bad), Error);
}

TEST(Linalg, KernelBasisIsOrthonormalKernel) {
  Rng rng(13);
  const Matrix a = test::rand_matrix(4, 2, rng) * test::rand_matrix(2, 6, rng);
  const Matrix k = kernel_basis(a, 1e-10 * singular_values(a)(0));
  EXPECT_EQ(k.cols(), 4);
  EXPECT_LT(fro_norm(a * k), 1e-12);
  EXPECT_LT(fro_norm(Matrix(k.adjoint() * k) - identity(4)), 1e-12);
}

TEST(Linalg, ToleranceValidation) {
  EXPECT_NO_THROW(Tolerance{}.validate());
  EXPECT_THROW((Tolerance{-1.0, 1e-9, 1e-8, 1e-12}.validate()), Error);
  EXPECT_THROW((Tolerance{1e-10, 1e-9, 1.5, 1e-12}.validate()), Error);
}

// ---- drazin ---------------------------------------------------------------

TEST(Drazin, IndexExamples) {
  EXPECT_EQ(drazin_index(identity(3)), 0);
  EXPECT_EQ(drazin_index(test::lower_shift3()), 3);
  EXPECT_EQ(drazin_index(test::diag_of({2.0, 0.0})), 1);
  EXPECT_EQ(drazin_index(zeros(3, 3)), 1);
  EXPECT_THROW(drazin_index(zeros(2, 3)), DimensionMismatch);
}

TEST(Drazin, OracleExamples) {
  const DrazinResult shift = drazin_oracle(test::lower_shift3());
  EXPECT_EQ(fro_norm(shift.d), 0.0);
  EXPECT_EQ(shift.pi, identity(3));
  EXPECT_EQ(shift.index, 3);

  const DrazinResult id = drazin_oracle(identity(4));
  EXPECT_LT(fro_norm(id.d - identity(4)), 1e-14);
  EXPECT_LT(fro_norm(id.pi), 1e-14);
  EXPECT_EQ(id.index, 0);

  const DrazinResult dg = drazin_oracle(test::diag_of({2.0, 0.0, 5.0}));
  EXPECT_LT(fro_norm(dg.d - test::diag_of({0.5, 0.0, 0.2})), 1e-14);
  EXPECT_LT(fro_norm(dg.pi - test::diag_of({0.0, 1.0, 0.0})), 1e-14);
}

TEST(Drazin, OracleMatchesKnownConstructions) {
  Rng rng(21);
  const Tolerance tol;
  for (int trial = 0; trial < 60; ++trial) {
    const Index core = std::uniform_int_distribution<Index>(0, 6)(rng);
    const Index nil = std::uniform_int_distribution<Index>(core == 0 ? 1 : 0, 6)(rng);
    const auto parts = test::rand_partition(nil, rng);
    const test::KnownDrazin k = test::known_drazin(core, parts, rng, trial % 2 == 0);
    const DrazinResult r = drazin_oracle(k.a, tol);
    EXPECT_EQ(r.index, k.index) << "trial " << trial;
    EXPECT_LE(fro_norm(r.d - k.d), tol.eps_match * scale_of(k.a, k.d)) << "trial " << trial;
    EXPECT_LE(fro_norm(r.pi - k.pi), tol.eps_match * scale_of(k.pi)) << "trial " << trial;
  }
}

TEST(Drazin, ResultInvariants) {
  Rng rng(22);
  const Tolerance tol;
  for (int trial = 0; trial < 30; ++trial) {
    const test::KnownDrazin k = test::known_drazin(3, test::rand_partition(4, rng), rng, true);
    const DrazinResult r = drazin_oracle(k.a, tol);
    const double s = scale_of(k.a, r.d, r.pi);
    EXPECT_LE(fro_norm(r.pi * r.pi - r.pi), tol.eps_match * s);
    EXPECT_LE(fro_norm(r.pi * k.a - k.a * r.pi), tol.eps_match * s);
    const Eigen::VectorXd sv = singular_values(k.a + r.pi);
    EXPECT_GT(sv(sv.size() - 1), tol.eps_rank * s);
    EXPECT_TRUE(is_quasinilpotent(Matrix(k.a * r.pi), tol));
  }
}

TEST(Drazin, NilpotentHasZeroInverse) {
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const test::KnownDrazin k = test::known_drazin(0, test::rand_partition(6, rng), rng, true);
    const DrazinResult r = drazin_oracle(k.a);
    EXPECT_LT(fro_norm(r.d), 1e-9);
    EXPECT_LT(fro_norm(r.pi - identity(6)), 1e-9);
  }
}

TEST(Drazin, ScalingSimilarityAndDoubleInverse) {
  Rng rng(24);
  const Tolerance tol;
  for (int trial = 0; trial < 30; ++trial) {
    const test::KnownDrazin k = test::known_drazin(4, test::rand_partition(3, rng), rng, true);
    const DrazinResult r = drazin_oracle(k.a, tol);

    Complex c = test::rand_complex(rng);
    c /= std::abs(c);
    c *= 0.5 + trial % 3;
    const Matrix scaled = drazin_oracle(Matrix(c * k.a), tol).d;
    EXPECT_LE(fro_norm(scaled - r.d / c), tol.eps_match * scale_of(r.d / c));

    const Matrix s = test::rand_well_conditioned(7, rng, 0.5, 2.0);
    const Matrix si = s.inverse();
    const Matrix sim = drazin_oracle(Matrix(s * k.a * si), tol).d;
    const double cond = 16.0;  // condition number bound of s squared
    EXPECT_LE(fro_norm(sim - s * r.d * si), cond * tol.eps_match * scale_of(r.d));

    const Matrix dd = drazin_oracle(r.d, tol).d;
    EXPECT_LE(fro_norm(dd - k.a * k.a * r.d), tol.eps_match * scale_of(k.a, dd));
  }
}

TEST(Drazin, AxiomChecks) {
  Rng rng(25);
  const Matrix a = test::rand_matrix(8, 8, rng);
  EXPECT_TRUE(check_drazin_axioms(a, drazin_oracle(a).d).verdict);
  const AxiomReport id = check_drazin_axioms(identity(3), identity(3));
  EXPECT_EQ(id.worst(), 0.0);
  EXPECT_TRUE(id.verdict);
  EXPECT_FALSE(check_drazin_axioms(identity(3), Matrix(2.0 * identity(3))).verdict);
}

TEST(Drazin, Quasinilpotency) {
  EXPECT_TRUE(is_quasinilpotent(test::lower_shift3()));
  EXPECT_FALSE(is_quasinilpotent(identity(2)));
  EXPECT_TRUE(is_quasinilpotent(test::example_blocks8().A));
}

TEST(Drazin, AmbiguousRankIsRejected) {
  // A singular value sitting right at the rank cutoff.
  const Matrix a = test::diag_of({1.0, 1e-10});
  EXPECT_THROW(drazin_oracle(a), AxiomViolation);
}

TEST(Drazin, ReferenceMagnitudeTreatsNoiseAsZero) {
  Matrix noise = zeros(3, 3);
  noise(0, 1) = 1e-17;
  noise(2, 0) = -3e-17;
  const DrazinResult r = drazin_oracle(noise, Tolerance{}, 4.0);
  EXPECT_EQ(r.index, 1);
  EXPECT_EQ(fro_norm(r.d), 0.0);
}

// ---- series ---------------------------------------------------------------

TEST(Series, StopsAfterTwoNegligibleTerms) {
  const Matrix n = test::jordan_nilpotent({3});
  SeriesTrace trace;
  const Matrix s = power_series(n, 0, identity(3), identity(3), 0, 1.0, Tolerance{}, "test", &trace);
  EXPECT_EQ(s, identity(3) + n + n * n);
  EXPECT_EQ(trace.term_norms.size(), 5u);
}

TEST(Series, ThrowsWhenTermsPersist) {
  EXPECT_THROW(power_series(identity(2), 0, identity(2), identity(2), 0, 1.0, Tolerance{}, "test"),
               ConvergenceError);
  EXPECT_EQ(series_cap(4), 10);
}

// ---- pierce ---------------------------------------------------------------

TEST(Pierce, SplitExamples) {
  Rng rng(31);
  const Matrix x = test::rand_matrix(4, 4, rng);
  const PierceSplit full = pierce_split(x, identity(4));
  EXPECT_EQ(full.app, x);
  EXPECT_EQ(fro_norm(full.ap1) + fro_norm(full.a1p) + fro_norm(full.a11), 0.0);
  const PierceSplit none = pierce_split(x, zeros(4, 4));
  EXPECT_EQ(none.a11, x);

  Matrix y(2, 2);
  y << 2.0, 0.0, 3.0, 0.0;
  const PierceSplit s = pierce_split(y, test::diag_of({1.0, 0.0}));
  EXPECT_EQ(s.app(0, 0), Complex(2.0));
  EXPECT_EQ(s.a1p(1, 0), Complex(3.0));
  EXPECT_EQ(fro_norm(s.ap1) + fro_norm(s.a11), 0.0);
  EXPECT_THROW(pierce_split(y, Matrix(2.0 * identity(2))), NotIdempotent);
}

TEST(Pierce, CornersReconstructAndAbsorb) {
  Rng rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix u = test::rand_well_conditioned(5, rng);
    const Matrix p = u * test::diag_of({1.0, 1.0, 0.0, 1.0, 0.0}) * u.inverse();
    const Matrix q = identity(5) - p;
    const Matrix x = test::rand_matrix(5, 5, rng);
    const PierceSplit s = pierce_split(x, p);
    EXPECT_LT(fro_norm(s.reconstruct() - x), 1e-12 * scale_of(x, p));
    EXPECT_LT(fro_norm(p * s.app * p - s.app), 1e-10 * scale_of(s.app, p));
    EXPECT_LT(fro_norm(p * s.ap1 * q - s.ap1), 1e-10 * scale_of(s.ap1, p));
    EXPECT_LT(fro_norm(q * s.a1p * p - s.a1p), 1e-10 * scale_of(s.a1p, p));
    EXPECT_LT(fro_norm(q * s.a11 * q - s.a11), 1e-10 * scale_of(s.a11, p));
  }
}

TEST(Triangular, SmallLowerExample) {
  Matrix x(2, 2);
  x << 2.0, 0.0, 3.0, 0.0;
  Matrix expected(2, 2);
  expected << 0.5, 0.0, 0.75, 0.0;
  const Matrix d = triangular_drazin(x, test::diag_of({1.0, 0.0}), Orientation::lower);
  EXPECT_LT(fro_norm(d - expected), 1e-14);
  EXPECT_TRUE(check_drazin_axioms(x, d).verdict);
}

TEST(Triangular, ZeroCornerGivesBlockDiagonal) {
  Rng rng(33);
  const Matrix a = test::known_drazin(2, {2}, rng, true).a;
  const Matrix b = test::known_drazin(1, {3}, rng, true).a;
  const Matrix x = block_diag(a, b);
  const Matrix p = block_diag(identity(4), zeros(4, 4));
  const Matrix d = triangular_drazin(x, p, Orientation::lower);
  EXPECT_LT(test::rel_diff(d, block_diag(drazin_oracle(a).d, drazin_oracle(b).d)), 1e-9);
}

// Random x triangular with respect to a random idempotent p = S diag(I, 0) S^-1.
Matrix triangular_instance(Index k, Index l, Orientation o, Matrix& p, Rng& rng) {
  const Index n = k + l;
  const Matrix a = test::known_drazin(1, test::rand_partition(k - 1, rng), rng).a;
  const Matrix b = test::known_drazin(l / 2, test::rand_partition(l - l / 2, rng), rng).a;
  Matrix x = block_diag(a, b);
  if (o == Orientation::lower) {
    x.bottomLeftCorner(l, k) = test::rand_matrix(l, k, rng);
  } else {
    x.topRightCorner(k, l) = test::rand_matrix(k, l, rng);
  }
  const Matrix s = test::rand_well_conditioned(n, rng);
  const Matrix si = s.inverse();
  p = s * block_diag(identity(k), zeros(l, l)) * si;
  return s * x * si;
}

TEST(Triangular, MatchesOracleBothOrientations) {
  Rng rng(34);
  const Tolerance tol;
  for (int trial = 0; trial < 40; ++trial) {
    const Orientation o = trial % 2 ? Orientation::upper : Orientation::lower;
    Matrix p;
    const Matrix x = triangular_instance(3, 3, o, p, rng);
    const Matrix d = triangular_drazin(x, p, o, tol);
    const Matrix ref = drazin_oracle(x, tol).d;
    EXPECT_LE(fro_norm(d - ref), tol.eps_match * scale_of(x, ref)) << "trial " << trial;
    EXPECT_TRUE(check_drazin_axioms(x, d, tol).verdict);
  }
}

TEST(Triangular, ZeroCornerUnderOblique) {
  // A zero corner under a non-unitary similarity comes out as rounding noise;
  // it must still be treated as zero.
  Rng rng(38);
  for (int trial = 0; trial < 20; ++trial) {
    const Orientation o = trial % 2 ? Orientation::upper : Orientation::lower;
    Matrix x = block_diag(zeros(1, 1), test::known_drazin(1, {1}, rng).a);
    if (o == Orientation::lower) {
      x.bottomLeftCorner(2, 1) = test::rand_matrix(2, 1, rng);
    } else {
      x.topRightCorner(1, 2) = test::rand_matrix(1, 2, rng);
    }
    const Matrix s = test::rand_well_conditioned(3, rng);
    const Matrix si = s.inverse();
    const Matrix p = s * block_diag(identity(1), zeros(2, 2)) * si;
    const Matrix y = s * x * si;
    const Matrix d = triangular_drazin(y, p, o);
    EXPECT_LT(test::rel_diff(d, drazin_oracle(y).d), 1e-9) << trial;
  }
}

TEST(Triangular, RejectsNonTriangular) {
  Rng rng(35);
  const Matrix x = test::rand_matrix(4, 4, rng);
  EXPECT_THROW(triangular_drazin(x, block_diag(identity(2), zeros(2, 2)), Orientation::lower),
               NotTriangular);
}

TEST(Triangular, SeriesTermsVanishBeyondDimension) {
  Rng rng(36);
  const Tolerance tol;
  for (int trial = 0; trial < 20; ++trial) {
    const Orientation o = trial % 2 ? Orientation::upper : Orientation::lower;
    Matrix p;
    const Matrix x = triangular_instance(4, 3, o, p, rng);
    const TriangularParts t = triangular_parts(x, p, o, tol);
    for (Index i = t.dim; i < series_cap(t.dim); ++i) {
      EXPECT_LE(fro_norm(t.first_term(i) * t.a_pi), tol.eps_tail * t.scale);
      EXPECT_LE(fro_norm(t.second_term(i)), tol.eps_tail * t.scale);
    }
  }
}

TEST(Cline, Examples) {
  EXPECT_LT(fro_norm(cline_drazin(identity(3), identity(3)) - identity(3)), 1e-14);
  Rng rng(37);
  const Matrix a = test::rand_well_conditioned(4, rng);
  EXPECT_LT(fro_norm(cline_drazin(a, Matrix(a.inverse())) - identity(4)), 1e-12);
  EXPECT_THROW(cline_drazin(zeros(2, 3), zeros(2, 3)), DimensionMismatch);
}

TEST(Cline, RectangularMatchesOracle) {
  Rng rng(38);
  const Tolerance tol;
  for (int trial = 0; trial < 40; ++trial) {
    std::uniform_int_distribution<Index> dim(1, 7);
    const Index m = dim(rng);
    const Index n = dim(rng);
    const Matrix a = test::rand_matrix(m, n, rng);
    const Matrix b = test::rand_matrix(n, m, rng);
    const Matrix d = cline_drazin(a, b, tol);
    const Matrix ref = drazin_oracle(Matrix(a * b), tol).d;
    EXPECT_LE(fro_norm(d - ref), tol.eps_match * scale_of(a * b, ref)) << m << "x" << n;
    EXPECT_TRUE(check_drazin_axioms(Matrix(a * b), d, tol).verdict);
  }
}

}  // namespace
}  // namespace gdz
