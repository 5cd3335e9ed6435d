#include "holobench/polybasis.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "holobench/error.hpp"
#include "holobench/rng.hpp"

namespace holo {

std::string_view to_string(Family f) {
  return f == Family::Legendre ? "legendre" : "chebyshev";
}

Family parse_family(std::string_view name) {
  if (name == "legendre" || name == "uniform") return Family::Legendre;
  if (name == "chebyshev" || name == "arcsine") return Family::Chebyshev;
  throw Error(ErrorKind::InvalidArgument, "unknown polynomial family '" + std::string(name) + "'");
}

void eval_univariate_all(Family family, std::uint32_t max_degree, double y, std::span<double> out) {
  require(std::abs(y) <= 1.0, ErrorKind::DomainError, "evaluation point outside [-1,1]");
  require(out.size() >= max_degree + 1, ErrorKind::DimensionMismatch, "output span too short");
  // Classical polynomials first, normalised afterwards.
  out[0] = 1.0;
  if (max_degree >= 1) out[1] = y;
  if (family == Family::Legendre) {
    for (std::uint32_t k = 1; k < max_degree; ++k)
      out[k + 1] = ((2.0 * k + 1.0) * y * out[k] - k * out[k - 1]) / (k + 1.0);
    for (std::uint32_t k = 1; k <= max_degree; ++k) out[k] *= std::sqrt(2.0 * k + 1.0);
  } else {
    for (std::uint32_t k = 1; k < max_degree; ++k) out[k + 1] = 2.0 * y * out[k] - out[k - 1];
    for (std::uint32_t k = 1; k <= max_degree; ++k) out[k] *= std::numbers::sqrt2;
  }
}

double eval_univariate(Family family, std::uint32_t degree, double y) {
  std::vector<double> buf(degree + 1);
  eval_univariate_all(family, degree, y, buf);
  return buf[degree];
}

double eval_tensor(Family family, const MultiIndex& nu, std::span<const double> y) {
  require(nu.max_dim() <= y.size(), ErrorKind::DimensionMismatch,
          "multi-index support exceeds point dimension");
  double v = 1.0;
  for (const auto& [d, deg] : nu.entries()) v *= eval_univariate(family, deg, y[d - 1]);
  return v;
}

double intrinsic_weight(Family family, const MultiIndex& nu) {
  if (family == Family::Chebyshev) return std::pow(2.0, 0.5 * static_cast<double>(nu.l0()));
  double w = 1.0;
  for (const auto& [d, deg] : nu.entries()) w *= std::sqrt(2.0 * deg + 1.0);
  return w;
}

Eigen::VectorXd intrinsic_weights(Family family, const IndexSet& set) {
  Eigen::VectorXd u(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) u[i] = intrinsic_weight(family, set[i]);
  return u;
}

PointSet sample_points(Family family, std::size_t m, std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed);
  PointSet pts(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      pts(i, j) = family == Family::Legendre ? 2.0 * rng.uniform() - 1.0
                                             : std::cos(std::numbers::pi * rng.uniform_open());
  return pts;
}

double leading_coefficient(Family family, std::uint32_t degree) {
  if (degree == 0) return 1.0;
  if (family == Family::Chebyshev) return std::ldexp(1.0, static_cast<int>(degree) - 1);
  // 2^{-nu} (2nu)!/(nu!)^2 = prod_{k=1}^{nu} (2k - 1)/k
  double d = 1.0;
  for (std::uint32_t k = 1; k <= degree; ++k) d *= (2.0 * k - 1.0) / k;
  return d;
}

namespace {

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> legendre_jacobi(std::uint32_t q, bool vectors) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(q, q);
  for (std::uint32_t k = 1; k < q; ++k) {
    const double beta = k / std::sqrt(4.0 * k * k - 1.0);
    J(k - 1, k) = beta;
    J(k, k - 1) = beta;
  }
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(
      J, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
}

}  // namespace

RootFactorization roots_and_scale(Family family, std::uint32_t degree) {
  require(degree >= 1, ErrorKind::InvalidArgument, "degree-0 polynomial has no roots");
  RootFactorization rf;
  rf.roots.resize(degree);
  const double nu = degree;
  if (family == Family::Chebyshev) {
    for (std::uint32_t j = 1; j <= degree; ++j)
      rf.roots[degree - j] = std::cos((2.0 * j - 1.0) * std::numbers::pi / (2.0 * nu));
    rf.scale = std::pow(std::numbers::sqrt2 * leading_coefficient(family, degree), 1.0 / nu);
  } else {
    auto es = legendre_jacobi(degree, false);
    for (std::uint32_t j = 0; j < degree; ++j) rf.roots[j] = es.eigenvalues()[j];
    // Symmetrise: the exact root set is symmetric about 0.
    for (std::uint32_t j = 0; j < degree / 2; ++j) {
      const double r = 0.5 * (rf.roots[degree - 1 - j] - rf.roots[j]);
      rf.roots[j] = -r;
      rf.roots[degree - 1 - j] = r;
    }
    if (degree % 2 == 1) rf.roots[degree / 2] = 0.0;
    rf.scale = std::pow(std::sqrt(2.0 * nu + 1.0) * leading_coefficient(family, degree), 1.0 / nu);
  }
  return rf;
}

QuadratureRule gauss_rule(Family family, std::uint32_t q) {
  require(q >= 1, ErrorKind::InvalidArgument, "quadrature needs at least one node");
  QuadratureRule rule;
  rule.nodes.resize(q);
  rule.weights.resize(q);
  if (family == Family::Chebyshev) {
    for (std::uint32_t j = 0; j < q; ++j) {
      rule.nodes[j] = std::cos((2.0 * (q - j) - 1.0) * std::numbers::pi / (2.0 * q));
      rule.weights[j] = 1.0 / q;
    }
    return rule;
  }
  auto es = legendre_jacobi(q, true);
  for (std::uint32_t j = 0; j < q; ++j) {
    rule.nodes[j] = es.eigenvalues()[j];
    const double v0 = es.eigenvectors()(0, j);
    rule.weights[j] = v0 * v0;  // mu_0 = 1 for the probability measure
  }
  return rule;
}

}  // namespace holo
