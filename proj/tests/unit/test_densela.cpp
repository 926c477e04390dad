#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "ness/densela.hpp"
#include "oracles.hpp"

using namespace ness;

namespace {

ComplexMatrix to_matrix(const oracle::Dense& a) {
  ComplexMatrix m(a.size(), a[0].size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) m(i, j) = a[i][j];
  return m;
}

}  // namespace

TEST(ComplexMatrix, RejectsEmptyAndRagged) {
  EXPECT_THROW(ComplexMatrix(0, 3), DimensionError);
  EXPECT_THROW(ComplexMatrix(2, 2, std::vector<cplx>(3)), DimensionError);
  EXPECT_THROW((ComplexMatrix{{1.0, 2.0}, {3.0}}), DimensionError);
}

TEST(ComplexMatrix, AdjointTraceAndArithmetic) {
  ComplexMatrix a{{{1, 2}, {0, 1}}, {{3, 0}, {4, -1}}};
  const auto h = a.adjoint();
  EXPECT_EQ(h(0, 1), cplx(3, 0));
  EXPECT_EQ(h(1, 0), cplx(0, -1));
  EXPECT_EQ(a.trace(), cplx(5, 1));
  const auto s = a + ComplexMatrix::identity(2);
  EXPECT_EQ(s(0, 0), cplx(2, 2));
  EXPECT_EQ((cplx(2.0) * a)(1, 1), cplx(8, -2));
  EXPECT_THROW(a += ComplexMatrix(3, 3), DimensionError);
}

TEST(HermEigvals, PauliY) {
  ComplexMatrix y{{0.0, cplx(0, -1)}, {cplx(0, 1), 0.0}};
  const auto ev = herm_eigvals(y);
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_NEAR(ev[0], -1.0, 1e-14);
  EXPECT_NEAR(ev[1], 1.0, 1e-14);
}

TEST(HermEigvals, DiagonalIsSorted) {
  const auto ev = herm_eigvals(ComplexMatrix::diagonal({3.0, -1.0, 2.0}));
  EXPECT_EQ(ev, (std::vector<double>{-1.0, 2.0, 3.0}));
}

TEST(HermEigvals, MatchesCharacteristicPolynomialBisection) {
  std::mt19937 rng(7);
  for (std::size_t n : {3u, 4u, 5u, 6u}) {
    const auto a = oracle::random_matrix(n, rng, true);
    const auto ev = herm_eigvals(to_matrix(a));
    const auto ref = oracle::charpoly_eigs(a);
    ASSERT_EQ(ref.size(), n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(ev[i], ref[i], 1e-10) << "n=" << n << " i=" << i;
  }
}

TEST(HermEigvals, RejectsNonHermitianWithDeviation) {
  ComplexMatrix m{{1.0, 2.0}, {0.0, 1.0}};
  try {
    herm_eigvals(m);
    FAIL() << "expected SymmetryError";
  } catch (const SymmetryError& e) {
    EXPECT_NEAR(e.deviation(), 2.0, 1e-15);
  }
  EXPECT_THROW(herm_eigvals(ComplexMatrix(2, 3)), DimensionError);
}

TEST(HermEigvals, RejectsNonFinite) {
  ComplexMatrix m = ComplexMatrix::identity(2);
  m(0, 0) = std::nan("");
  EXPECT_THROW(herm_eigvals(m), DomainError);
}

TEST(GenEigvals, TriangularGivesDiagonal) {
  ComplexMatrix t{{{1, 1}, 5.0, 2.0}, {0.0, {-2, 0.5}, 7.0}, {0.0, 0.0, 3.0}};
  auto ev = gen_eigvals(t);
  auto key = [](cplx z) { return std::pair{z.real(), z.imag()}; };
  std::sort(ev.begin(), ev.end(), [&](cplx a, cplx b) { return key(a) < key(b); });
  EXPECT_NEAR(std::abs(ev[0] - cplx(-2, 0.5)), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(ev[1] - cplx(1, 1)), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(ev[2] - cplx(3, 0)), 0.0, 1e-13);
}

TEST(GenEigvals, TraceAndDeterminantInvariants) {
  std::mt19937 rng(11);
  for (std::size_t n : {2u, 4u, 6u}) {
    const auto a = oracle::random_matrix(n, rng, false);
    const auto ev = gen_eigvals(to_matrix(a));
    cplx sum = 0.0, prod = 1.0, tr = 0.0;
    for (auto z : ev) {
      sum += z;
      prod *= z;
    }
    for (std::size_t i = 0; i < n; ++i) tr += a[i][i];
    const cplx det = oracle::cofactor_det(a);
    EXPECT_NEAR(std::abs(sum - tr), 0.0, 1e-11 * (1 + std::abs(tr)));
    EXPECT_NEAR(std::abs(prod - det), 0.0, 1e-10 * (1 + std::abs(det)));
  }
}

TEST(LuLogdet, MatchesCofactorDeterminant) {
  std::mt19937 rng(3);
  for (std::size_t n : {1u, 2u, 5u, 7u}) {
    const auto a = oracle::random_matrix(n, rng, false);
    const cplx det = oracle::cofactor_det(a);
    const cplx ld = lu_logdet(to_matrix(a));
    EXPECT_NEAR(std::abs(std::exp(ld) - det), 0.0, 1e-10 * std::abs(det)) << "n=" << n;
  }
}

TEST(LuLogdet, PermutationSign) {
  ComplexMatrix swap{{0.0, 1.0}, {1.0, 0.0}};
  const cplx ld = lu_logdet(swap);
  EXPECT_NEAR(ld.real(), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(std::exp(ld) + 1.0), 0.0, 1e-14);
}

TEST(LuLogdet, SingularReportsIndex) {
  ComplexMatrix m{{1.0, 2.0}, {2.0, 4.0}};
  EXPECT_THROW(lu_logdet(m), SingularityError);
}

TEST(Matmul, MatchesNaiveProduct) {
  std::mt19937 rng(5);
  const auto a = oracle::random_matrix(4, rng, false), b = oracle::random_matrix(4, rng, false);
  const auto c = matmul(to_matrix(a), to_matrix(b));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      cplx s = 0.0;
      for (std::size_t k = 0; k < 4; ++k) s += a[i][k] * b[k][j];
      EXPECT_NEAR(std::abs(c(i, j) - s), 0.0, 1e-13);
    }
  EXPECT_THROW(matmul(ComplexMatrix(2, 3), ComplexMatrix(2, 3)), DimensionError);
}

TEST(Solve, ResidualIsSmall) {
  std::mt19937 rng(9);
  const auto a = to_matrix(oracle::random_matrix(5, rng, false));
  const auto b = to_matrix(oracle::random_matrix(5, rng, false));
  const auto x = solve(a, b);
  const auto r = matmul(a, x) - b;
  EXPECT_LT(r.frobenius_norm(), 1e-12 * b.frobenius_norm());
  EXPECT_THROW(solve(ComplexMatrix{{1.0, 1.0}, {1.0, 1.0}}, ComplexMatrix::identity(2)), SingularityError);
}

TEST(SingularValues, SquaresAreEigenvaluesOfGram) {
  std::mt19937 rng(11);
  const auto a = to_matrix(oracle::random_matrix(7, rng, false));
  auto s = singular_values(a);
  ASSERT_EQ(s.size(), 7u);
  EXPECT_TRUE(std::is_sorted(s.rbegin(), s.rend()));
  const auto g = herm_eigvals(matmul(a.adjoint(), a));  // ascending
  for (std::size_t i = 0; i < 7; ++i) EXPECT_NEAR(s[6 - i] * s[6 - i], g[i], 1e-12 * g.back());
}

TEST(Cholesky, ReconstructsAndSolves) {
  std::mt19937 rng(12);
  const auto b = to_matrix(oracle::random_matrix(6, rng, false));
  const ComplexMatrix a = ComplexMatrix::identity(6) + matmul(b, b.adjoint());
  const auto l = cholesky_lower(a);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = i + 1; j < 6; ++j) EXPECT_EQ(l(i, j), cplx(0.0));
  EXPECT_LT((matmul(l, l.adjoint()) - a).frobenius_norm(), 1e-12 * a.frobenius_norm());
  const auto x = lower_solve(l, b);
  EXPECT_LT((matmul(l, x) - b).frobenius_norm(), 1e-12 * b.frobenius_norm());
}

TEST(Cholesky, RejectsIndefinite) {
  EXPECT_THROW(cholesky_lower(ComplexMatrix::diagonal({1.0, -1.0})), SingularityError);
}
