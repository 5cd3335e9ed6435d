#include <cmath>

#include <Eigen/SVD>
#include <gtest/gtest.h>

#include "holobench/dnnbuilder.hpp"
#include "holobench/error.hpp"
#include "holobench/rng.hpp"
#include "holobench/sensing.hpp"

using namespace holo;

namespace {

Network stack_for(const IndexSet& lambda, Family f, double delta, const Activation& act,
                  std::uint32_t dims) {
  std::vector<std::uint32_t> theta;
  for (std::uint32_t j = 1; j <= dims; ++j) theta.push_back(j);
  std::vector<Network> nets;
  for (const auto& nu : lambda) nets.push_back(build_poly_network(f, nu, delta, theta, act).net);
  return stack_networks(nets);
}

}  // namespace

TEST(AssembleExact, Examples) {
  PointSet one = PointSet::Zero(1, 1);
  const auto A = assemble_exact(one, IndexSet{MultiIndex(), MultiIndex::unit(1)}, Family::Legendre);
  EXPECT_EQ(A.entries(0, 0), 1.0);
  EXPECT_EQ(A.entries(0, 1), 0.0);
  EXPECT_EQ(A.provenance, MatrixProvenance::ExactPolynomial);
  const auto B = assemble_exact(sample_points(Family::Chebyshev, 4, 2, 1), IndexSet{MultiIndex()},
                                Family::Chebyshev);
  EXPECT_TRUE(B.entries.isApprox(Eigen::MatrixXd::Constant(4, 1, 0.5)));
  EXPECT_THROW(assemble_exact(one, IndexSet{MultiIndex::unit(2)}, Family::Legendre), Error);
}

TEST(AssembleExact, EntriesAreScaledBasisValues) {
  const IndexSet lambda = hci_index_set(6, 3);
  const PointSet y = sample_points(Family::Legendre, 30, 3, 8);
  const auto A = assemble_exact(y, lambda, Family::Legendre);
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    const std::vector<double> yi{y(i, 0), y(i, 1), y(i, 2)};
    for (std::size_t j = 0; j < lambda.size(); ++j)
      EXPECT_NEAR(A.entries(i, static_cast<Eigen::Index>(j)),
                  eval_tensor(Family::Legendre, lambda[j], yi) / std::sqrt(30.0), 1e-15);
  }
}

TEST(AssembleExact, ExpectedGramIsIdentity) {
  const IndexSet lambda = hci_index_set(3, 2);
  ASSERT_EQ(lambda.size(), 5u);
  for (auto f : {Family::Legendre, Family::Chebyshev}) {
    const auto A = assemble_exact(sample_points(f, 10000, 2, 3), lambda, f);
    const Eigen::MatrixXd G = A.entries.transpose() * A.entries;
    EXPECT_LE((G - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff(), 0.05);
  }
}

TEST(AssembleEmulated, RepuIsExact) {
  const IndexSet lambda = hci_index_set(4, 2);
  const PointSet y = sample_points(Family::Legendre, 40, 2, 4);
  const auto net = stack_for(lambda, Family::Legendre, 0.0, Activation::repu(2), 2);
  const auto Ap = assemble_emulated(net, y, lambda, Family::Legendre, 0.0);
  const auto A = assemble_exact(y, lambda, Family::Legendre);
  EXPECT_LE((A.entries - Ap.entries).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_EQ(Ap.provenance, MatrixProvenance::NetworkEmulated);
}

TEST(AssembleEmulated, ConstantColumn) {
  const IndexSet lambda{MultiIndex()};
  const PointSet y = sample_points(Family::Chebyshev, 9, 1, 4);
  const auto net = stack_for(lambda, Family::Chebyshev, 1e-3, Activation::relu(), 1);
  const auto Ap = assemble_emulated(net, y, lambda, Family::Chebyshev, 1e-3);
  EXPECT_TRUE(Ap.entries.isApprox(Eigen::MatrixXd::Constant(9, 1, 1.0 / 3.0), 1e-15));
}

TEST(AssembleEmulated, ReluGapWithinSqrtNDelta) {
  const IndexSet lambda = hci_index_set(4);
  ASSERT_EQ(lambda.size(), 19u);
  const PointSet y = sample_points(Family::Legendre, 60, 4, 12);
  const auto net = stack_for(lambda, Family::Legendre, 1e-3, Activation::relu(), 4);
  const auto Ap = assemble_emulated(net, y, lambda, Family::Legendre, 1e-3);
  const auto A = assemble_exact(y, lambda, Family::Legendre);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A.entries - Ap.entries);
  EXPECT_LE(svd.singularValues()[0], std::sqrt(19.0) * 1e-3);
  EXPECT_NEAR(Ap.emulation_gap, svd.singularValues()[0], 1e-8 + 1e-6 * svd.singularValues()[0]);
}

TEST(ApplyBlock, ChannelwiseAndLinear) {
  const Eigen::MatrixXd A = Eigen::MatrixXd::Random(7, 5);
  const Eigen::MatrixXd U = Eigen::MatrixXd::Random(5, 3), V = Eigen::MatrixXd::Random(5, 3);
  const Eigen::MatrixXd AU = apply_block(A, U);
  for (int k = 0; k < 3; ++k) EXPECT_LE((AU.col(k) - A * U.col(k)).norm(), 1e-12);
  EXPECT_LE((apply_block(A, 2.0 * U - 0.5 * V) - (2.0 * AU - 0.5 * apply_block(A, V))).norm(), 1e-12);
  EXPECT_EQ(apply_block(Eigen::MatrixXd::Identity(5, 5), U), U);
  EXPECT_THROW(apply_block(A, Eigen::MatrixXd::Ones(4, 3)), Error);
}

TEST(SpectralNorm, MatchesSvd) {
  const Eigen::MatrixXd A = Eigen::MatrixXd::Random(20, 12);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  EXPECT_NEAR(spectral_norm(A), svd.singularValues()[0], 1e-6 * svd.singularValues()[0]);
}

TEST(SynthesizeData, NoiseIsRescaledExactly) {
  const PointSet y = sample_points(Family::Legendre, 50, 2, 1);
  const DiscreteSpace sp(3, BlockNorm::L1);
  const VectorFunction f = [](std::span<const double> p) { return Eigen::Vector3d(p[0], p[1], 1.0).eval(); };
  const auto clean = synthesize_data(f, y, sp, 0.0, 5);
  EXPECT_EQ(clean.noise.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(clean.e_samp, 0.0);
  EXPECT_NEAR(clean.values(3, 0), y(3, 0) / std::sqrt(50.0), 1e-16);
  const auto noisy = synthesize_data(f, y, sp, 0.1, 5);
  EXPECT_NEAR(noisy.e_samp, 0.1, 1e-12);
  for (Eigen::Index i = 0; i < 50; ++i) EXPECT_NEAR(sp.norm(noisy.noise.row(i).transpose()), 0.1, 1e-12);
  EXPECT_EQ(synthesize_data(f, y, sp, 0.1, 5).noise, noisy.noise);
  EXPECT_NE(synthesize_data(f, y, sp, 0.1, 6).noise, noisy.noise);
}

TEST(Rip, IdentityHasZeroConstant) {
  const auto est = estimate_rip_constant(Eigen::MatrixXd::Identity(6, 6), 4.0, Eigen::VectorXd::Ones(6), 20, 1);
  EXPECT_NEAR(est.delta_hat, 0.0, 1e-12);
}

TEST(Rip, EmptySparsityClassIsReported) {
  const auto est = estimate_rip_constant(Eigen::MatrixXd::Identity(3, 3), 0.5, Eigen::VectorXd::Ones(3), 5, 1);
  EXPECT_TRUE(est.empty_sparsity);
}

TEST(Rip, FullSupportReducesToExtremeSingularValues) {
  const auto A = assemble_exact(sample_points(Family::Legendre, 40, 2, 9), hci_index_set(3, 2), Family::Legendre);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A.entries);
  const auto& s = svd.singularValues();
  const double expect = std::max(std::abs(s[0] * s[0] - 1), std::abs(s[s.size() - 1] * s[s.size() - 1] - 1));
  const auto est = estimate_rip_constant(A.entries, 1e6, Eigen::VectorXd::Ones(A.cols()), 3, 2);
  EXPECT_NEAR(est.delta_hat, expect, 1e-10);
}

TEST(Rip, MonotoneInKAndBelowExact) {
  const IndexSet lambda = hci_index_set(4, 2);
  ASSERT_LE(lambda.size(), 8u);
  const auto A = assemble_exact(sample_points(Family::Chebyshev, 25, 2, 3), lambda, Family::Chebyshev);
  const Eigen::VectorXd u = intrinsic_weights(Family::Chebyshev, lambda);
  double prev = 0.0;
  for (double k = 1; k <= 20; k += 1) {
    const auto est = estimate_rip_constant(A.entries, k, u, 50, 77);
    EXPECT_GE(est.delta_hat, prev);
    EXPECT_LE(est.delta_hat, exact_rip_constant(A.entries, k, u) + 1e-12);
    prev = est.delta_hat;
  }
}

TEST(FullCase, Examples) {
  const auto id = full_case_stability(Eigen::MatrixXd::Identity(4, 4));
  EXPECT_NEAR(id.sigma_min, 1.0, 1e-15);
  EXPECT_NEAR(id.gamma_bound, 1.0, 1e-15);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(3, 2);
  D(0, 0) = 2;
  D(1, 1) = 1;
  EXPECT_NEAR(full_case_stability(D).sigma_min, 1.0, 1e-15);
  EXPECT_THROW(full_case_stability(Eigen::MatrixXd::Ones(2, 3)), Error);
}

TEST(FullCase, GammaBoundsEveryVector) {
  const auto A = assemble_exact(sample_points(Family::Legendre, 80, 3, 5), hci_index_set(5, 3), Family::Legendre);
  const auto st = full_case_stability(A.entries);
  CounterRng rng(1);
  for (int t = 0; t < 100; ++t) {
    Eigen::VectorXd z(A.cols());
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.split(t).split(i).normal();
    EXPECT_LE(z.norm(), st.gamma_bound * (A.entries * z).norm() * (1 + 1e-12));
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A.entries, Eigen::ComputeThinV);
  const Eigen::VectorXd v = svd.matrixV().col(A.cols() - 1);
  EXPECT_NEAR(v.norm(), st.gamma_bound * (A.entries * v).norm(), 1e-8);
}
