#include <cmath>

#include <gtest/gtest.h>

#include "holobench/banachspace.hpp"
#include "holobench/error.hpp"
#include "holobench/rng.hpp"

using namespace holo;

namespace {

// Exhaustive search over all subsets (oracle for best_kterm).
double brute_sigma(const Eigen::VectorXd& norms, const Eigen::VectorXd& w, double k, double p) {
  const auto n = norms.size();
  double best = INFINITY;
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    double card = 0, rest = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (mask >> i & 1)
        card += w[i] * w[i];
      else
        rest += std::pow(w[i], 2 - p) * std::pow(norms[i], p);
    }
    if (card <= k) best = std::min(best, std::pow(rest, 1 / p));
  }
  return best;
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

}  // namespace

TEST(BlockNorm, Examples) {
  EXPECT_DOUBLE_EQ(block_norm(DiscreteSpace(2), vec({3, 4})), 5.0);
  EXPECT_DOUBLE_EQ(block_norm(DiscreteSpace(2, BlockNorm::L1), vec({3, -4})), 7.0);
  EXPECT_DOUBLE_EQ(block_norm(DiscreteSpace(2, BlockNorm::LInf), vec({3, -4})), 4.0);
  Eigen::MatrixXd G = Eigen::Vector2d(4, 1).asDiagonal();
  EXPECT_NEAR(block_norm(DiscreteSpace(G), vec({1, 1})), std::sqrt(5.0), 1e-15);
  EXPECT_THROW(block_norm(DiscreteSpace(3), vec({1, 1})), Error);
}

TEST(BlockNorm, GramMustBeSymmetricPositiveDefinite) {
  Eigen::MatrixXd bad(2, 2);
  bad << 1, 2, 2, 1;
  EXPECT_THROW(DiscreteSpace{bad}, Error);
  Eigen::MatrixXd asym(2, 2);
  asym << 2, 1, 0, 2;
  EXPECT_THROW(DiscreteSpace{asym}, Error);
}

TEST(WeightedNorm, Examples) {
  EXPECT_DOUBLE_EQ(weighted_lpw_norm(vec({3, 4}), vec({7, 0.1}), 2.0), 5.0);
  EXPECT_DOUBLE_EQ(weighted_lpw_norm(vec({3, 4}), vec({1, 2}), 1.0), 11.0);
  EXPECT_DOUBLE_EQ(weighted_lpw_norm(vec({2.5}), vec({1}), 1.0), 2.5);
  EXPECT_THROW(weighted_lpw_norm(vec({1}), vec({1}), 2.5), Error);
  EXPECT_THROW(weighted_lpw_norm(vec({1}), vec({1}), 0.0), Error);
}

TEST(WeightedNorm, UnitWeightsAndPOneSumBlockNorms) {
  const IndexSet s = hci_index_set(4, 2);
  Eigen::MatrixXd b = Eigen::MatrixXd::Random(static_cast<Eigen::Index>(s.size()), 3);
  const DiscreteSpace sp(3, BlockNorm::L1);
  const BlockVector v(s, b);
  EXPECT_NEAR(weighted_lpw_norm(v, sp, 1.0, WeightVector::ones(s)), sp.row_norms(b).sum(), 1e-12);
}

TEST(WeightedCardinality, Examples) {
  EXPECT_DOUBLE_EQ(weighted_cardinality(IndexSet{MultiIndex()}, Family::Legendre), 1.0);
  EXPECT_NEAR(weighted_cardinality(IndexSet{MultiIndex(), MultiIndex::unit(1)}, Family::Legendre), 4.0, 1e-14);
  EXPECT_DOUBLE_EQ(weighted_cardinality(IndexSet{}, Family::Chebyshev), 0.0);
  const WeightVector w = WeightVector::ones(IndexSet{MultiIndex()});
  EXPECT_THROW(weighted_cardinality(IndexSet{MultiIndex::unit(1)}, w), Error);
}

TEST(BestTerm, Examples) {
  const auto r = best_kterm(vec({3, 1, 2}), vec({1, 1, 1}), 1.0, 1.0);
  ASSERT_EQ(r.support.size(), 1u);
  EXPECT_EQ(r.support[0], 0u);
  EXPECT_DOUBLE_EQ(r.residual, 3.0);
  const auto z = best_kterm(vec({3, 1, 2}), vec({1, 2, 1}), 0.0, 1.0);
  EXPECT_TRUE(z.support.empty());
  EXPECT_DOUBLE_EQ(z.residual, 3.0 + 2.0 + 2.0);
  EXPECT_DOUBLE_EQ(best_kterm(vec({3, 1, 2}), vec({1, 2, 1}), 6.0, 1.0).residual, 0.0);
}

TEST(BestTerm, SigmaIsNonincreasingInK) {
  CounterRng rng(9);
  Eigen::VectorXd norms(10), w(10);
  for (int i = 0; i < 10; ++i) {
    norms[i] = rng.uniform();
    w[i] = 1.0 + 2.0 * rng.uniform();
  }
  double prev = INFINITY;
  for (double k = 0; k <= w.squaredNorm(); k += 0.5) {
    const double s = best_kterm(norms, w, k, 1.0).residual;
    EXPECT_LE(s, prev + 1e-15);
    prev = s;
  }
  EXPECT_EQ(best_kterm(norms, w, w.squaredNorm() * (1 + 1e-12), 1.0).residual, 0.0);
}

TEST(BestTerm, ExactSearchMatchesEnumeration) {
  CounterRng rng(2024);
  for (int t = 0; t < 60; ++t) {
    CounterRng r = rng.split(t);
    const auto n = static_cast<Eigen::Index>(1 + r.uniform_index(10));
    Eigen::VectorXd norms(n), w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      norms[i] = r.uniform() < 0.2 ? 0.0 : r.uniform();
      w[i] = 1.0 + 3.0 * r.uniform();
    }
    const double k = r.uniform() * w.squaredNorm();
    for (double p : {1.0, 2.0, 0.5}) {
      const auto res = best_kterm(norms, w, k, p);
      EXPECT_FALSE(res.greedy);
      EXPECT_NEAR(res.residual, brute_sigma(norms, w, k, p), 1e-12);
      double card = 0;
      for (auto i : res.support) card += w[static_cast<Eigen::Index>(i)] * w[static_cast<Eigen::Index>(i)];
      EXPECT_LE(card, k + 1e-12);
    }
  }
}

TEST(BestTerm, LargeInstancesFallBackToGreedy) {
  Eigen::VectorXd norms = Eigen::VectorXd::LinSpaced(30, 1.0, 0.1);
  const auto r = best_kterm(norms, Eigen::VectorXd::Ones(30), 5.0, 1.0);
  EXPECT_TRUE(r.greedy);
  EXPECT_EQ(r.support.size(), 5u);
  EXPECT_NEAR(r.residual, norms.tail(25).sum(), 1e-12);
}

TEST(Majorant, Examples) {
  EXPECT_EQ(monotone_majorant({1, 3, 2}), (std::vector<double>{3, 3, 2}));
  EXPECT_EQ(monotone_majorant({4, 2, 1}), (std::vector<double>{4, 2, 1}));
  EXPECT_EQ(monotone_majorant({0, 0, 5}), (std::vector<double>{5, 5, 5}));
  EXPECT_EQ(monotone_majorant({-2, 1}), (std::vector<double>{2, 1}));
  EXPECT_THROW(monotone_majorant({}), Error);
}

TEST(Majorant, IsIdempotentAndDominates) {
  CounterRng rng(4);
  std::vector<double> b(50);
  for (auto& x : b) x = rng.normal();
  const auto m = monotone_majorant(b);
  EXPECT_EQ(monotone_majorant(m), m);
  for (std::size_t i = 0; i < b.size(); ++i) {
    EXPECT_GE(m[i], std::abs(b[i]));
    if (i) EXPECT_LE(m[i], m[i - 1]);
  }
}
