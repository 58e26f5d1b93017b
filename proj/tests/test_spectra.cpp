#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "gridconc/spectra.hpp"
#include "oracles.hpp"

using namespace gridconc;

namespace {

oracle::CMat to_oracle(const DenseMatrix& m) {
  oracle::CMat out(m.rows(), std::vector<std::complex<double>>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

RealMatrix p3_laplacian() {
  RealMatrix l(3, 3);
  l << 1, -1, 0, -1, 2, -1, 0, -1, 1;
  return l;
}

}  // namespace

TEST(Spectra, OperatorNormExamples) {
  EXPECT_NEAR(operator_norm(RealMatrix(RealMatrix::Identity(4, 4))), 1.0, 1e-12);
  RealMatrix e12(2, 2);
  e12 << 1, -1, -1, 1;
  EXPECT_NEAR(operator_norm(e12), 2.0, 1e-12);
  EXPECT_NEAR(operator_norm(p3_laplacian()), 3.0, 1e-12);
}

TEST(Spectra, RejectsNonFinite) {
  RealMatrix m = RealMatrix::Zero(2, 2);
  m(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(operator_norm(m), std::invalid_argument);
  m(0, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(operator_norm(m), std::invalid_argument);
}

TEST(Spectra, NormMatchesOracleOnRandomComplexMatrices) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 30; ++trial) {
    const int r = 1 + trial % 6, c = 1 + (trial * 5) % 7;
    DenseMatrix m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = {z(rng), z(rng)};
    const double expected = oracle::complex_norm(to_oracle(m));
    EXPECT_NEAR(operator_norm(m), expected, 1e-10 * expected);
  }
}

TEST(Spectra, EigenAndSvdPathsAgreeOnHermitian) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 8;
    DenseMatrix a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = {z(rng), z(rng)};
    const DenseMatrix h = a + a.adjoint();
    const auto ev = hermitian_eigenvalues(h);
    const double by_eig = std::max(std::abs(ev(0)), std::abs(ev(n - 1)));
    EXPECT_NEAR(operator_norm(h), by_eig, 1e-9);
    EXPECT_NEAR(operator_norm_svd(h), by_eig, 1e-9);
  }
}

TEST(Spectra, NormIsSubmultiplicativeAndSatisfiesTriangle) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 5;
    DenseMatrix a(n, n), b(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        a(i, j) = {z(rng), z(rng)};
        b(i, j) = {z(rng), z(rng)};
      }
    const double na = operator_norm(a), nb = operator_norm(b);
    EXPECT_LE(operator_norm(DenseMatrix(a * b)), na * nb * (1 + 1e-12));
    EXPECT_LE(operator_norm(DenseMatrix(a + b)), (na + nb) * (1 + 1e-12));
  }
}

TEST(Spectra, IntrinsicDimension) {
  EXPECT_NEAR(intrinsic_dimension(RealMatrix(RealMatrix::Identity(5, 5)), true), 5.0, 1e-12);
  Eigen::VectorXd v(3);
  v << 1, 2, 3;
  EXPECT_NEAR(intrinsic_dimension(RealMatrix(v * v.transpose()), true), 1.0, 1e-12);
  RealMatrix k3(3, 3);
  k3 << 1, -0.5, -0.5, -0.5, 1, -0.5, -0.5, -0.5, 1;
  EXPECT_NEAR(intrinsic_dimension(k3, true), 2.0, 1e-12);
  EXPECT_THROW(intrinsic_dimension(RealMatrix(RealMatrix::Zero(3, 3)), true), std::invalid_argument);
  EXPECT_THROW(intrinsic_dimension(RealMatrix(-RealMatrix::Identity(2, 2)), true), std::invalid_argument);
}

TEST(Spectra, PsdDominates) {
  const RealMatrix i3 = RealMatrix::Identity(3, 3);
  EXPECT_TRUE(psd_dominates(RealMatrix(RealMatrix::Zero(3, 3)), i3, 0.0));
  EXPECT_FALSE(psd_dominates(RealMatrix(2 * i3), i3, 1e-12));
  EXPECT_THROW(psd_dominates(i3, RealMatrix(RealMatrix::Identity(2, 2)), 0.0), std::invalid_argument);
  RealMatrix skew = RealMatrix::Zero(2, 2);
  skew(0, 1) = 1.0;
  EXPECT_THROW(psd_dominates(skew, RealMatrix(RealMatrix::Identity(2, 2)), 0.0), std::invalid_argument);
}

TEST(Spectra, KroneckerExamples) {
  EXPECT_TRUE(kron(RealMatrix(RealMatrix::Identity(2, 2)), RealMatrix(RealMatrix::Identity(3, 3)))
                  .isApprox(RealMatrix::Identity(6, 6)));
  RealMatrix swap(2, 2), e12(2, 2);
  swap << 0, 1, 1, 0;
  e12 << 1, -1, -1, 1;
  const RealMatrix k = kron(swap, e12);
  EXPECT_TRUE(k.topLeftCorner(2, 2).isZero());
  EXPECT_TRUE(k.bottomRightCorner(2, 2).isZero());
  EXPECT_EQ(RealMatrix(k.topRightCorner(2, 2)), e12);
  EXPECT_EQ(RealMatrix(k.bottomLeftCorner(2, 2)), e12);
  RealMatrix upsilon(2, 2);
  upsilon << 3, -4, -4, -3;
  EXPECT_NEAR(operator_norm(kron(upsilon, e12)), 10.0, 1e-12);
}

TEST(Spectra, KroneckerIdentitiesOnRandomInputs) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> z;
  auto rnd = [&](int r, int c) {
    DenseMatrix m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = {z(rng), z(rng)};
    return m;
  };
  for (int trial = 0; trial < 20; ++trial) {
    const DenseMatrix a = rnd(2, 3), b = rnd(3, 2), c = rnd(3, 2), d = rnd(2, 3);
    const DenseMatrix lhs = kron(a, b) * kron(c, d);
    const DenseMatrix rhs = kron(DenseMatrix(a * c), DenseMatrix(b * d));
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NEAR(operator_norm(kron(a, b)), operator_norm(a) * operator_norm(b), 1e-9);
  }
}

TEST(Spectra, BlockDiagNormIsMax) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 20; ++trial) {
    RealMatrix a(3, 3), b(4, 4);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) a(i, j) = z(rng);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) b(i, j) = z(rng);
    EXPECT_NEAR(operator_norm(block_diag(a, b)), std::max(operator_norm(a), operator_norm(b)), 1e-9);
  }
}
