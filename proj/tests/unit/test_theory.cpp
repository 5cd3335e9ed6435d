#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "holobench/error.hpp"
#include "holobench/theory.hpp"

using namespace holo;

namespace {

const Regime kUB{Anisotropy::Unknown, Codomain::Banach};
const Regime kUH{Anisotropy::Unknown, Codomain::Hilbert};
const Regime kKB{Anisotropy::Known, Codomain::Banach};
const Regime kKH{Anisotropy::Known, Codomain::Hilbert};

bool same_members(const IndexSet& a, const IndexSet& b) {
  if (a.size() != b.size()) return false;
  return std::all_of(a.begin(), a.end(), [&](const MultiIndex& nu) { return b.contains(nu); });
}

}  // namespace

TEST(Regime, NamesRoundTrip) {
  for (const auto& r : {kUB, kUH, kKB, kKH}) EXPECT_EQ(Regime::parse(r.name()), r);
  EXPECT_EQ(kUH.name(), "unknown-hilbert");
  EXPECT_THROW(Regime::parse("sideways"), Error);
}

TEST(LogFactor, Examples) {
  const double m = std::exp(3.0);
  EXPECT_NEAR(log_factor_L(m, 1.0 / std::numbers::e, kUB), 82.0, 1e-10);
  EXPECT_NEAR(log_factor_L(m, 1.0 / std::numbers::e, kKH), 4.0, 1e-12);
  EXPECT_NEAR(log_factor_L(m, 1.0 - 1e-15, kKB), 3.0, 1e-12);
  EXPECT_NEAR(log_factor_L(m, 0.5, kUB, LMode::PlainLog), 3.0, 1e-12);
  EXPECT_NEAR(log_factor_L(m, 1.0 / std::numbers::e, kUB, LMode::KnownLog), 4.0, 1e-12);
}

TEST(LogFactor, Rejects) {
  EXPECT_THROW(log_factor_L(2.0, 0.5, kUB), Error);
  EXPECT_THROW(log_factor_L(10.0, 0.0, kUB), Error);
  EXPECT_THROW(log_factor_L(10.0, 1.0, kUB), Error);
}

TEST(Sparsity, Examples) {
  EXPECT_NEAR(sparsity_k(40.0, 10.0, kUB).k, 2.0, 1e-14);
  EXPECT_NEAR(sparsity_k(40.0, 10.0, kUH).k, 4.0, 1e-14);
  EXPECT_NEAR(sparsity_k(220.0, 10.0, kKB).k, 2.0, 1e-14);
  EXPECT_TRUE(sparsity_k(5.0, 10.0, kUH).below_one);
  EXPECT_FALSE(sparsity_k(50.0, 10.0, kUH).below_one);
  EXPECT_EQ(active_dimension_n(41.0, 10.0), 5u);
}

TEST(Lambda, Examples) {
  const double m = 100.0;
  const double L = log_factor_L(m, 0.5, kUB);
  EXPECT_NEAR(L, std::pow(std::log(100.0), 4) + std::log(2.0), 1e-10);
  EXPECT_NEAR(lambda_param(m, L, kUB), 0.35373, 5e-6);
  EXPECT_NEAR(lambda_param(36.0, 1.0, kUH), 1.0 / 36.0, 1e-15);
  EXPECT_THROW(lambda_param(m, L, kKH), Error);
}

TEST(Lambda, DecreasesPastTheKnee) {
  double prev = 1e300;
  for (double m = 100.0; m <= 1e5; m *= 1.5) {
    const double lam = lambda_param(m, log_factor_L(m, 0.5, kUB), kUB);
    if (m > 1e4) {
      EXPECT_LT(lam, prev);
    }
    prev = lam;
  }
}

TEST(Delta, Examples) {
  EXPECT_NEAR(emulation_delta(1.0, 1.0, 0.5, kUB).delta, 2.0 / 21.0, 1e-15);
  EXPECT_NEAR(emulation_delta(4.0, 16.0, 0.5, kUH).delta, 1.0 / 66.0, 1e-15);
  const double big = emulation_delta(1e30, 1e6, 0.5, kUB).delta;
  EXPECT_EQ(big, 1e-12);
  EXPECT_TRUE(emulation_delta(1e30, 1e6, 0.5, kUB).floored);
  EXPECT_THROW(emulation_delta(1.0, 1.0, 1.0, kUB), Error);
  EXPECT_THROW(emulation_delta(1.0, 1.0, 0.0, kUB), Error);
}

TEST(Delta, KnownCaseBranches) {
  // min{sqrt3/(2 sqrt5 sqrt k), k^{1/2-1/p}} at k=4, p=1/2: min{0.1936.., 1/8}
  EXPECT_NEAR(emulation_delta(4.0, 100.0, 0.5, kKH).delta, 0.125, 1e-15);
  EXPECT_NEAR(emulation_delta(1.0, 100.0, 0.5, kKB).delta, std::sqrt(3.0) / (2.0 * std::sqrt(5.0)),
              1e-15);
}

TEST(Wrip, IdentityInstance) {
  const double delta = 0.1;
  const double k = std::numbers::e * delta;
  const double n = 1.0;  // log(e n) = 1
  const double eps = 2.0 / std::numbers::e;
  const double c0 = 3.0;
  EXPECT_EQ(wrip_sample_complexity(k, delta, eps, n, c0),
            std::ceil(c0 * k * 2.0 / (delta * delta) - 1e-9));
}

TEST(Wrip, LinearAndMonotone) {
  const double a = wrip_sample_complexity(5.0, 0.3, 0.1, 10.0, 1.0);
  const double b = wrip_sample_complexity(5.0, 0.3, 0.1, 10.0, 2.0);
  EXPECT_NEAR(b, 2.0 * a, 1.0);
  EXPECT_GT(wrip_sample_complexity(5.0, 0.3, 0.01, 10.0), a);
}

TEST(FullCaseComplexity, Examples) {
  const double pre = 1.0 / (0.6 * std::log(0.6) + 0.4);
  EXPECT_NEAR(pre, 10.6947, 1e-4);
  EXPECT_EQ(full_case_sample_complexity(1.0, 0.4, 1.0 / std::numbers::e), std::ceil(pre));
  EXPECT_EQ(full_case_sample_complexity(10.0, 0.4, 0.1), 493.0);
  EXPECT_GT(full_case_sample_complexity(10.0, 1e-3, 0.1), 1e6);
}

TEST(Rnsp, Examples) {
  const auto c = rnsp_error_constants(0.0, 1.0);
  EXPECT_DOUBLE_EQ(c.C1, 1.0);
  EXPECT_DOUBLE_EQ(c.C2, 2.0);
  EXPECT_DOUBLE_EQ(c.C1p, 1.0);
  EXPECT_DOUBLE_EQ(c.C2p, 3.0);
  const auto d = rnsp_error_constants(0.75, 2.0);
  EXPECT_NEAR(d.C1p, 12.25, 1e-12);
  EXPECT_NEAR(d.C2p, 30.0, 1e-12);
  EXPECT_THROW(rnsp_error_constants(1.0, 1.0), Error);
}

TEST(Rnsp, IncreasingInRho) {
  auto prev = rnsp_error_constants(0.0, 1.5);
  for (double rho = 0.05; rho < 0.99; rho += 0.05) {
    const auto c = rnsp_error_constants(rho, 1.5);
    EXPECT_GT(c.C1, prev.C1);
    EXPECT_GT(c.C2, prev.C2);
    EXPECT_GT(c.C1p, prev.C1p);
    EXPECT_GT(c.C2p, prev.C2p);
    prev = c;
  }
}

TEST(ApproxBound, Exponents) {
  EXPECT_NEAR(approx_error_bound(100, 2, 0.5, kUB).exponent, -0.75, 1e-15);
  EXPECT_NEAR(approx_error_bound(100, 2, 0.5, kKB).exponent, -1.0, 1e-15);
  EXPECT_NEAR(approx_error_bound(100, 2, 2.0 / 3.0, kUH).exponent, -1.0, 1e-12);
  EXPECT_NEAR(approx_error_bound(100, 2, 2.0 / 3.0, kKH).exponent, -1.0, 1e-12);
  EXPECT_DOUBLE_EQ(approx_error_bound(100, 2, 0.5, kUB).theta, 0.25);
  EXPECT_DOUBLE_EQ(approx_error_bound(100, 2, 0.5, kKB).theta, 0.5);
  EXPECT_DOUBLE_EQ(approx_error_bound(100, 2, 0.5, kUH).theta, 0.0);
  const auto v = approx_error_bound(400, 4, 0.5, kKB, 2.0, 3.0);
  EXPECT_NEAR(v.value, 6.0 / 100.0, 1e-14);
}

TEST(ApproxBound, OrderingBelowTwoThirds) {
  // 1/2 - 1/p < 1 - 1/p always; 1 - 1/p < (1/2)(1/2 - 1/p) exactly when p < 2/3.
  for (double p : {0.1, 0.3, 0.5, 0.6}) {
    const double kb = approx_error_bound(100, 2, p, kKB).exponent;
    const double h = approx_error_bound(100, 2, p, kUH).exponent;
    const double ub = approx_error_bound(100, 2, p, kUB).exponent;
    EXPECT_LT(h, kb) << p;
    EXPECT_LT(kb, ub) << p;
    EXPECT_EQ(h, approx_error_bound(100, 2, p, kKH).exponent);
  }
  for (double p : {0.7, 0.9}) {
    EXPECT_GT(approx_error_bound(100, 2, p, kKB).exponent,
              approx_error_bound(100, 2, p, kUB).exponent);
  }
}

TEST(Architecture, Shapes) {
  const auto a = architecture_bounds(16, 0.5, kUB, Activation::repu());
  EXPECT_DOUBLE_EQ(a.width, std::pow(16.0, 7.0));
  EXPECT_DOUBLE_EQ(a.depth, 4.0);
  const auto b = architecture_bounds(16, 0.5, kKH, Activation::tanh());
  EXPECT_DOUBLE_EQ(b.width, 256.0);
  EXPECT_DOUBLE_EQ(b.depth, 4.0);
  const double lm = std::log(16.0);
  const auto c = architecture_bounds(16, 0.5, kUH, Activation::relu());
  EXPECT_NEAR(c.depth, lm * (lm * lm + lm / 0.5 + 16.0), 1e-12);
}

TEST(Selection, SingleMemberIsZero) {
  const auto s = known_set_selection_surrogate({0.5, 0.25}, 1.0, 1);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_TRUE(s[0].is_zero());
}

TEST(Selection, LargerBPreferred) {
  std::vector<double> b;
  for (int j = 1; j <= 4; ++j) b.push_back(std::pow(0.5, j));
  const auto r = surrogate_log_radii(b, 1.0);
  for (std::size_t j = 1; j < r.size(); ++j) EXPECT_LE(r[j - 1], r[j]);
  const auto s = known_set_selection_surrogate(b, 1.0, 2);
  EXPECT_TRUE(s.contains(MultiIndex::unit(1)));
  EXPECT_FALSE(s.contains(MultiIndex::unit(2)));
}

TEST(Selection, RadiusSolvesEllipseEquation) {
  const std::vector<double> b{0.3, 0.2, 0.1};
  const double eps = 0.7;
  const auto r = surrogate_log_radii(b, eps);
  const double norm = 0.5 + 0.25 + 0.125;
  for (std::size_t j = 0; j < b.size(); ++j) {
    const double rho = std::exp(r[j]);
    const double tau = std::ldexp(1.0, -static_cast<int>(j + 1)) / norm;
    EXPECT_NEAR((rho + 1.0 / rho) / 2.0 - 1.0, eps * tau / b[j], 1e-12);
  }
  EXPECT_THROW(surrogate_log_radii({0.5, 0.0}, 1.0), Error);
}

TEST(Selection, SurrogateAnchoredForManySizes) {
  const std::vector<double> b{0.6, 0.3, 0.2, 0.1, 0.05};
  for (std::size_t n = 1; n <= 30; ++n) {
    const auto s = known_set_selection_surrogate(b, 0.5, n);
    EXPECT_TRUE(is_anchored(s)) << n;
    EXPECT_LE(s.size(), n);
  }
}

TEST(Selection, OracleFindsDominantIndex) {
  const auto cands = hci_index_set(4, 2);
  std::vector<double> norms(cands.size(), 0.0);
  for (std::size_t i = 0; i < cands.size(); ++i) norms[i] = 1e-3 / (1.0 + cands[i].l1());
  norms[static_cast<std::size_t>(cands.position(MultiIndex::unit(1)))] = 1.0;
  const auto s = known_set_selection_oracle(cands, norms, 2);
  EXPECT_TRUE(same_members(s, IndexSet{MultiIndex(), MultiIndex::unit(1)}));
}

TEST(Selection, OracleIndependentOfCandidateOrder) {
  auto norm_of = [](const MultiIndex& nu) {
    double v = 1.0;
    for (const auto& [j, k] : nu.entries()) v *= std::pow(0.3 * j, static_cast<double>(k));
    return v;
  };
  const auto canon = hci_index_set(8, 3);
  std::vector<MultiIndex> shuffled(canon.begin(), canon.end());
  std::reverse(shuffled.begin(), shuffled.end());
  std::rotate(shuffled.begin(), shuffled.begin() + 5, shuffled.end());
  const IndexSet other(shuffled);
  auto norms_for = [&](const IndexSet& s) {
    std::vector<double> out;
    for (const auto& nu : s) out.push_back(norm_of(nu));
    return out;
  };
  for (std::size_t n : {1u, 3u, 6u, 10u}) {
    const auto a = known_set_selection_oracle(canon, norms_for(canon), n);
    const auto b = known_set_selection_oracle(other, norms_for(other), n);
    EXPECT_TRUE(same_members(a, b)) << n;
    EXPECT_TRUE(is_anchored(a));
    EXPECT_EQ(a.size(), n);
  }
}

TEST(Selection, WeightBudgetStopsGrowth) {
  auto w = [](const MultiIndex& nu) {
    double v = 1.0;
    for (const auto& [j, k] : nu.entries()) v *= std::sqrt(2.0 * k + 1.0);
    return v;
  };
  const auto s = known_set_selection_surrogate({0.5, 0.25, 0.125}, 1.0, 50, w, 10.0);
  double used = 0.0;
  for (const auto& nu : s) used += w(nu) * w(nu);
  EXPECT_LE(used, 10.0);
  EXPECT_TRUE(is_anchored(s));
}
