#include <gtest/gtest.h>

#include <cmath>

#include "gridconc/admittance.hpp"
#include "gridconc/lcpf.hpp"
#include "oracles.hpp"

using namespace gridconc;

namespace {

using Pairs = std::vector<std::pair<std::size_t, std::size_t>>;

std::vector<LineAdmittance> random_lines(std::size_t m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<LineAdmittance> w(m);
  for (auto& l : w) l = {u(rng), u(rng)};
  return w;
}

}  // namespace

TEST(Admittance, ElementaryLaplacian) {
  RealMatrix e(2, 2);
  e << 1, -1, -1, 1;
  EXPECT_EQ(elementary_laplacian(0, 1, 2), e);
  RealMatrix e3(3, 3);
  e3 << 1, 0, -1, 0, 0, 0, -1, 0, 1;
  EXPECT_EQ(elementary_laplacian(0, 2, 3), e3);
  for (std::size_t n = 2; n < 6; ++n) {
    const auto m = elementary_laplacian(0, n - 1, n);
    EXPECT_EQ(m.trace(), 2.0);
    EXPECT_NEAR(operator_norm(m), 2.0, 1e-12);
  }
  EXPECT_THROW(elementary_laplacian(1, 1, 3), std::invalid_argument);
  EXPECT_THROW(elementary_laplacian(0, 3, 3), std::invalid_argument);
}

TEST(Admittance, AssembleSingleLine) {
  const auto t = build_topology(2, {{0, 1}});
  const std::vector<LineAdmittance> unit{{1.0, 0.0}};
  const auto y = assemble_admittance(t, unit);
  EXPECT_EQ(y.matrix()(0, 0), Complex(1, 0));
  EXPECT_EQ(y.matrix()(0, 1), Complex(-1, 0));
  const std::vector<LineAdmittance> lossy{{1.0, -1.0}};
  const auto z = assemble_admittance(t, lossy);
  EXPECT_EQ(z.matrix()(0, 0), Complex(1, -1));
  EXPECT_EQ(z.matrix()(1, 0), Complex(-1, 1));
  EXPECT_THROW(assemble_admittance(t, std::vector<LineAdmittance>{}), std::invalid_argument);
}

TEST(Admittance, CompleteGraphNorm) {
  const std::vector<LineAdmittance> w(3, LineAdmittance{1.0, 0.0});
  EXPECT_NEAR(operator_norm(assemble_admittance(Topology::complete(3), w).matrix()), 3.0, 1e-12);
}

TEST(Admittance, AssembleMatchesOracleAndHasZeroRowSums) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 6;
    const Pairs pairs = oracle::random_connected_edges(n, 0.4, rng);
    const auto w = random_lines(pairs.size(), rng);
    std::vector<std::complex<double>> cw;
    for (const auto& l : w) cw.push_back(l.w());
    const auto expected = oracle::laplacian(n, pairs, cw);
    const auto y = assemble_admittance(build_topology(n, pairs), w).matrix();
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_LE(std::abs(y.row(i).sum()), 1e-12);
      for (std::size_t j = 0; j < n; ++j) EXPECT_LE(std::abs(y(i, j) - expected[i][j]), 1e-12);
    }
    EXPECT_LE((y - y.transpose()).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(Admittance, LiftRealExamples) {
  const auto p3 = Topology::path(3);
  const std::vector<LineAdmittance> real{{1.0, 0.0}, {2.0, 0.0}};
  const auto y = assemble_admittance(p3, real);
  const auto lifted = lift_real(y);
  EXPECT_TRUE(lifted.topRightCorner(3, 3).isZero());
  EXPECT_EQ(RealMatrix(lifted.bottomRightCorner(3, 3)), RealMatrix(-y.conductance()));
  EXPECT_NEAR(operator_norm(lifted), operator_norm(y.conductance()), 1e-12);

  const std::vector<LineAdmittance> lossy{{1.0, -1.0}};
  const auto single = assemble_admittance(build_topology(2, {{0, 1}}), lossy);
  EXPECT_NEAR(operator_norm(lift_real(single)), 2.0 * std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(operator_norm_svd(single.matrix()), 2.0 * std::sqrt(2.0), 1e-12);
}

TEST(Admittance, LiftPreservesNormOnRandomLaplacians) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial % 7;
    const Pairs pairs = oracle::random_connected_edges(n, 0.5, rng);
    const auto y = assemble_admittance(build_topology(n, pairs), random_lines(pairs.size(), rng));
    const auto lifted = lift_real(y);
    EXPECT_LE((lifted - lifted.transpose()).cwiseAbs().maxCoeff(), 0.0);
    oracle::CMat m(n, std::vector<std::complex<double>>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m[i][j] = y.matrix()(i, j);
    const double expected = oracle::complex_norm(m);
    EXPECT_NEAR(operator_norm(lifted), expected, 1e-9);
    EXPECT_NEAR(operator_norm(y.matrix()), expected, 1e-9);
  }
}

TEST(Admittance, ElementaryJacobianNorms) {
  EXPECT_NEAR(operator_norm(elementary_jacobian(1, 0, 0, 1, 2, BlockConvention::lifted)), 2.0, 1e-12);
  EXPECT_NEAR(operator_norm(elementary_jacobian(3, 4, 0, 1, 3, BlockConvention::jacobian)), 10.0, 1e-12);
  EXPECT_THROW(elementary_jacobian(1, 1, 2, 2, 3, BlockConvention::lifted), std::invalid_argument);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 20; ++trial) {
    const double g = u(rng), b = u(rng);
    for (auto conv : {BlockConvention::lifted, BlockConvention::jacobian}) {
      const auto m = elementary_jacobian(g, b, 0, 2, 4, conv);
      const auto block = admittance_block(g, b, conv);
      EXPECT_NEAR(m.norm(), 2.0 * std::sqrt(2.0) * operator_norm(block), 1e-12);
      EXPECT_NEAR(operator_norm(m), 2.0 * std::hypot(g, b), 1e-10);
    }
  }
}

TEST(Admittance, BlockConventions) {
  RealMatrix lifted(2, 2), jac(2, 2);
  lifted << 2, 3, 3, -2;
  jac << 2, -3, -3, -2;
  EXPECT_EQ(admittance_block(2, 3, BlockConvention::lifted), lifted);
  EXPECT_EQ(admittance_block(2, 3, BlockConvention::jacobian), jac);
}

TEST(Admittance, KroneckerSumsReconstructLiftAndJacobian) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + trial % 7;
    const Pairs pairs = oracle::random_connected_edges(n, 0.4, rng);
    const auto t = build_topology(n, pairs);
    const auto w = random_lines(pairs.size(), rng);
    RealMatrix lifted_sum = RealMatrix::Zero(2 * n, 2 * n);
    RealMatrix jac_sum = RealMatrix::Zero(2 * n, 2 * n);
    for (std::size_t l = 0; l < pairs.size(); ++l) {
      lifted_sum += elementary_jacobian(w[l].g, w[l].b, pairs[l].first, pairs[l].second, n, BlockConvention::lifted);
      jac_sum += elementary_jacobian(w[l].g, w[l].b, pairs[l].first, pairs[l].second, n, BlockConvention::jacobian);
    }
    EXPECT_LE((lifted_sum - lift_real(assemble_admittance(t, w))).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((jac_sum - flat_start_jacobian(t, w, false).f).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Admittance, BernoulliDegenerateProbabilities) {
  Rng rng(1);
  const std::vector<LineDistribution> always(3, FixedBernoulli{{0.5, -0.5}, 1.0});
  const std::vector<LineDistribution> never(3, FixedBernoulli{{0.5, -0.5}, 0.0});
  for (int s = 0; s < 20; ++s) {
    for (const auto& w : sample_weights(always, rng)) EXPECT_EQ(w.w(), Complex(0.5, -0.5));
    for (const auto& w : sample_weights(never, rng)) EXPECT_EQ(w.w(), Complex(0.0, 0.0));
  }
}

TEST(Admittance, SphereConstraintHoldsOnEveryDraw) {
  Rng rng(2);
  const std::vector<LineDistribution> sphere(8, SphereUniform{0.5, 0});
  for (int s = 0; s < 100; ++s) {
    double gg = 0.0, bb = 0.0;
    for (const auto& w : sample_weights(sphere, rng)) {
      gg += w.g * w.g;
      bb += w.b * w.b;
    }
    EXPECT_NEAR(gg, 0.5, 1e-12);
    EXPECT_NEAR(bb, 0.5, 1e-12);
  }
}

TEST(Admittance, SphereInLargerAmbientSpaceIsInsideBall) {
  Rng rng(3);
  const std::vector<LineDistribution> sphere(2, SphereUniform{0.5, 3});
  for (int s = 0; s < 100; ++s) {
    double gg = 0.0;
    for (const auto& w : sample_weights(sphere, rng)) gg += w.g * w.g;
    EXPECT_LE(gg, 0.5 + 1e-12);
  }
  const std::vector<LineDistribution> too_small(4, SphereUniform{0.5, 3});
  EXPECT_THROW(sample_weights(too_small, rng), std::invalid_argument);
  const std::vector<LineDistribution> mixed{SphereUniform{0.5, 0}, FixedDeterministic{}};
  EXPECT_THROW(sample_weights(mixed, rng), std::invalid_argument);
}

TEST(Admittance, BoundedPerturbationStaysInBox) {
  Rng rng(4);
  const std::vector<LineDistribution> box(5, BoundedPerturbation{1.0, -1.0, 0.1});
  for (int s = 0; s < 200; ++s) {
    for (const auto& w : sample_weights(box, rng)) {
      EXPECT_LE(std::abs(w.g - 1.0), 0.1);
      EXPECT_LE(std::abs(w.b + 1.0), 0.1);
    }
  }
}

TEST(Admittance, DiskLawIsInsideQuadrant) {
  Rng rng(5);
  const std::vector<LineDistribution> disk(6, UnitDisk{1.0});
  for (int s = 0; s < 200; ++s) {
    for (const auto& w : sample_weights(disk, rng)) {
      EXPECT_GE(w.g, 0.0);
      EXPECT_LE(w.b, 0.0);
      EXPECT_LE(w.magnitude(), 1.0);
    }
  }
  // Mean of the quarter disk: 4 r / (3 pi) per coordinate.
  const auto mean = mean_weights(std::vector<LineDistribution>{UnitDisk{1.0}}).front();
  EXPECT_NEAR(mean.g, 4.0 / (3.0 * M_PI), 1e-15);
  EXPECT_NEAR(mean.b, -4.0 / (3.0 * M_PI), 1e-15);
}

TEST(Admittance, InvalidParametersRejected) {
  EXPECT_THROW(validate(LineDistribution{FixedBernoulli{{1, 0}, 1.5}}), std::invalid_argument);
  EXPECT_THROW(validate(LineDistribution{BoundedPerturbation{1, -1, -0.1}}), std::invalid_argument);
  EXPECT_THROW(validate(LineDistribution{SphereUniform{-1.0, 0}}), std::invalid_argument);
  EXPECT_THROW(validate(LineDistribution{UnitDisk{-1.0}}), std::invalid_argument);
}

TEST(Admittance, ExpectedAdmittanceAndCentering) {
  const auto t = build_topology(2, {{0, 1}});
  const std::vector<LineDistribution> half{FixedBernoulli{{1, 0}, 0.5}};
  const auto ey = expected_admittance(t, half);
  EXPECT_TRUE(ey.matrix().isApprox(0.5 * elementary_laplacian(0, 1, 2).cast<Complex>()));

  const std::vector<LineDistribution> fixed(3, FixedDeterministic{{0.3, -0.7}});
  Rng rng(6);
  const auto k3 = Topology::complete(3);
  const auto sample = assemble_admittance(k3, sample_weights(fixed, rng));
  EXPECT_TRUE(center(sample, expected_admittance(k3, fixed)).isZero(0.0));
}

TEST(Admittance, CenteredSamplesHaveZeroMean) {
  const auto t = Topology::complete(4);
  std::vector<LineDistribution> dists;
  for (std::size_t l = 0; l < t.num_edges(); ++l) {
    dists.push_back(FixedBernoulli{std::polar(1.0, -0.3 * static_cast<double>(l)), 0.2 + 0.1 * static_cast<double>(l)});
  }
  const auto ey = expected_admittance(t, dists);
  const int samples = 100000;
  Rng rng(split_seed(7, 0));
  DenseMatrix sum = DenseMatrix::Zero(4, 4);
  RealMatrix sq_re = RealMatrix::Zero(4, 4), sq_im = RealMatrix::Zero(4, 4);
  for (int s = 0; s < samples; ++s) {
    const DenseMatrix c = center(assemble_admittance(t, sample_weights(dists, rng)), ey);
    sum += c;
    sq_re += c.real().cwiseAbs2();
    sq_im += c.imag().cwiseAbs2();
  }
  const DenseMatrix mean = sum / samples;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double se_re = std::sqrt(sq_re(i, j) / samples - std::pow(mean(i, j).real(), 2)) / std::sqrt(samples);
      const double se_im = std::sqrt(sq_im(i, j) / samples - std::pow(mean(i, j).imag(), 2)) / std::sqrt(samples);
      EXPECT_LE(std::abs(mean(i, j).real()), 5 * se_re + 1e-15);
      EXPECT_LE(std::abs(mean(i, j).imag()), 5 * se_im + 1e-15);
    }
  }
}

TEST(Admittance, JsonBroadcastAndPerLine) {
  const auto d = line_distributions_from_json(
      nlohmann::json{{"kind", "bernoulli"}, {"p", {0.1, 0.2, 0.3}}, {"y", {1.0, -1.0}}}, 3);
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(std::get<FixedBernoulli>(d[2]).p, 0.3);
  EXPECT_EQ(std::get<FixedBernoulli>(d[0]).y, Complex(1.0, -1.0));
  EXPECT_THROW(line_distributions_from_json(nlohmann::json{{"kind", "bernoulli"}, {"p", {0.1, 0.2}}}, 3),
               std::invalid_argument);
  EXPECT_THROW(line_distributions_from_json(nlohmann::json{{"kind", "nope"}}, 1), std::invalid_argument);
  for (const auto& law : {LineDistribution{BoundedPerturbation{1, -1, 0.2}}, LineDistribution{UnitDisk{0.5}},
                          LineDistribution{SphereUniform{0.5, 4}}, LineDistribution{FixedDeterministic{{1, 2}}}}) {
    const auto back = line_distributions_from_json(to_json(law), 1).front();
    EXPECT_EQ(to_json(back), to_json(law));
  }
}
