#include "holobench/models.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Cholesky>

#include "holobench/error.hpp"
#include "holobench/parallel.hpp"
#include "holobench/rng.hpp"
#include "holobench/sensing.hpp"

namespace holo {

double ellipticity_margin(const DiffusionConfig& cfg) {
  double s = 0.0;
  for (double bj : cfg.b) {
    require(bj > 0.0, ErrorKind::ModelError, "amplitudes must be positive");
    s += bj;
  }
  const double r = cfg.a0 - s;
  require(r > 0.0, ErrorKind::ModelError,
          "diffusion coefficient is not uniformly elliptic: a0 - sum b_j = " + std::to_string(r));
  return r;
}

Eigen::VectorXd diffusion_solution(std::span<const double> y, const DiffusionConfig& cfg) {
  require(cfg.grid_size >= 1, ErrorKind::InvalidArgument, "grid needs at least one interior node");
  ellipticity_margin(cfg);
  const auto K = static_cast<Eigen::Index>(cfg.grid_size);
  const double h = 1.0 / static_cast<double>(K + 1);
  const std::size_t d = std::min(cfg.b.size(), y.size());
  for (std::size_t j = 0; j < d; ++j)
    require(std::abs(y[j]) <= 1.0, ErrorKind::DomainError, "parameter outside [-1,1]");

  auto coeff = [&](double x) {
    double a = cfg.a0;
    for (std::size_t j = 0; j < d; ++j)
      a += y[j] * cfg.b[j] * std::sin(static_cast<double>(j + 1) * std::numbers::pi * x);
    return a;
  };
  // a at the K + 1 cell midpoints.
  Eigen::VectorXd am(K + 1);
  for (Eigen::Index i = 0; i <= K; ++i) {
    am[i] = coeff((static_cast<double>(i) + 0.5) * h);
    require(am[i] > 0.0, ErrorKind::ModelError, "diffusion coefficient is not positive");
  }
  // Thomas algorithm on the symmetric tridiagonal system scaled by h^2.
  Eigen::VectorXd diag(K), off(K), rhs(K);
  for (Eigen::Index i = 0; i < K; ++i) {
    diag[i] = am[i] + am[i + 1];
    off[i] = -am[i + 1];
    rhs[i] = h * h * cfg.forcing(static_cast<double>(i + 1) * h);
  }
  Eigen::VectorXd c(K), u(K);
  double beta = diag[0];
  u[0] = rhs[0] / beta;
  for (Eigen::Index i = 1; i < K; ++i) {
    c[i] = off[i - 1] / beta;
    beta = diag[i] - off[i - 1] * c[i];
    u[i] = (rhs[i] - off[i - 1] * u[i - 1]) / beta;
  }
  for (Eigen::Index i = K - 2; i >= 0; --i) u[i] -= c[i + 1] * u[i + 1];
  return u;
}

std::vector<double> algebraic_amplitudes(std::size_t d, double beta, double scale) {
  std::vector<double> b(d);
  for (std::size_t j = 0; j < d; ++j) b[j] = scale * std::pow(static_cast<double>(j + 2), -beta);
  return b;
}

std::vector<double> geometric_amplitudes(std::size_t d, double theta, double scale) {
  std::vector<double> b(d);
  for (std::size_t j = 0; j < d; ++j) b[j] = scale * std::pow(theta, static_cast<double>(j + 1));
  return b;
}

double synthetic_holomorphic(std::span<const double> y, const HolomorphicParams& params) {
  double l1 = 0.0, s = 0.0;
  for (std::size_t j = 0; j < params.b.size(); ++j) {
    l1 += std::abs(params.b[j]);
    if (j < y.size()) s += params.b[j] * y[j];
  }
  switch (params.kind) {
    case SyntheticKind::Rational:
      require(params.c0 - l1 > 0.0, ErrorKind::ModelError,
              "rational model has a pole on the parameter domain (c0 <= ||b||_1)");
      return 1.0 / (params.c0 - s);
    case SyntheticKind::Exponential:
      return std::exp(s - l1);
  }
  return 0.0;
}

bool check_polyellipse(const std::vector<double>& rho, const std::vector<double>& b, double eps) {
  require(rho.size() <= b.size(), ErrorKind::DimensionMismatch, "more radii than amplitudes");
  double s = 0.0;
  for (std::size_t j = 0; j < rho.size(); ++j) {
    require(rho[j] >= 1.0, ErrorKind::InvalidArgument, "polyellipse radii must be >= 1");
    s += ((rho[j] + 1.0 / rho[j]) / 2.0 - 1.0) * b[j];
  }
  return s <= eps;
}

CoarseProjection make_coarse_projection(Eigen::Index K_fine, Eigen::Index K_coarse,
                                        const DiscreteSpace& fine_space, std::uint64_t seed) {
  require(K_coarse >= 1 && K_coarse <= K_fine, ErrorKind::InvalidArgument,
          "need 1 <= K_coarse <= K_fine");
  require((K_fine + 1) % (K_coarse + 1) == 0, ErrorKind::InvalidArgument,
          "coarse grid is not nested in the fine grid");
  require(fine_space.dim() == K_fine, ErrorKind::DimensionMismatch, "fine space has wrong size");
  const Eigen::Index r = (K_fine + 1) / (K_coarse + 1);
  CoarseProjection P;
  P.fine = K_fine;
  P.coarse = K_coarse;
  P.decimate = Eigen::MatrixXd::Zero(K_coarse, K_fine);
  P.embed = Eigen::MatrixXd::Zero(K_fine, K_coarse);
  for (Eigen::Index c = 0; c < K_coarse; ++c) P.decimate(c, (c + 1) * r - 1) = 1.0;
  // Hat function of coarse node c at fine node i (1-based positions).
  for (Eigen::Index i = 1; i <= K_fine; ++i)
    for (Eigen::Index c = 1; c <= K_coarse; ++c) {
      const double dist = std::abs(static_cast<double>(i - c * r)) / static_cast<double>(r);
      if (dist < 1.0) P.embed(i - 1, c - 1) = 1.0 - dist;
    }
  if (K_coarse == K_fine) return P;

  const Eigen::MatrixXd op = P.embed * P.decimate;
  double est = 1.0;
  if (fine_space.is_hilbert()) {
    // ||op||_G = ||L^T op L^{-T}||_2 with G = L L^T.
    const Eigen::MatrixXd L = fine_space.gram_factor();
    const Eigen::MatrixXd LiT =
        L.transpose().triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(K_fine, K_fine));
    est = std::max(est, spectral_norm(L.transpose() * op * LiT));
  } else {
    CounterRng rng(seed);
    for (int t = 0; t < 200; ++t) {
      Eigen::VectorXd v(K_fine);
      for (Eigen::Index i = 0; i < K_fine; ++i) v[i] = rng.normal();
      const double nv = fine_space.norm(v);
      if (nv > 0.0) est = std::max(est, fine_space.norm(op * v) / nv);
    }
  }
  P.pi_estimate = est;
  return P;
}

std::pair<Eigen::VectorXd, double> project_coarse(const Eigen::VectorXd& v_fine, Eigen::Index K_coarse,
                                                  const DiscreteSpace& fine_space) {
  const CoarseProjection P = make_coarse_projection(v_fine.size(), K_coarse, fine_space);
  return {P.project(v_fine), P.pi_estimate};
}

Eigen::MatrixXd coarse_gram(const CoarseProjection& proj) {
  const double h = 1.0 / static_cast<double>(proj.fine + 1);
  return h * proj.embed.transpose() * proj.embed;
}

Eigen::MatrixXd reference_coefficients(const VectorFunction& f, const IndexSet& index_set,
                                       Family family, std::size_t d_active, std::uint32_t q,
                                       Eigen::Index K) {
  require(d_active <= 6 && q <= 20, ErrorKind::CostGuard,
          "tensor quadrature limited to 6 coordinates and 20 nodes");
  require(d_active >= 1 && q >= 1, ErrorKind::InvalidArgument, "need d_active >= 1 and q >= 1");
  require(index_set.max_dim() <= d_active, ErrorKind::DimensionMismatch,
          "index set uses coordinates beyond d_active");
  require(index_set.max_l1() < 2 * static_cast<std::uint64_t>(q), ErrorKind::InvalidArgument,
          "quadrature order too low for the index set");
  const QuadratureRule rule = gauss_rule(family, q);
  std::size_t total = 1;
  for (std::size_t i = 0; i < d_active; ++i) total *= q;
  const auto N = static_cast<Eigen::Index>(index_set.size());
  const std::uint32_t deg = static_cast<std::uint32_t>(index_set.max_l1());

  // Univariate basis values at the nodes.
  Eigen::MatrixXd table(q, deg + 1);
  for (std::uint32_t i = 0; i < q; ++i) {
    std::vector<double> row(deg + 1);
    eval_univariate_all(family, deg, rule.nodes[i], row);
    for (std::uint32_t k = 0; k <= deg; ++k) table(i, k) = row[k];
  }
  // Fixed chunking keeps the summation order independent of the thread count.
  const std::size_t workers = std::min<std::size_t>(64, total);
  std::vector<Eigen::MatrixXd> partial(workers, Eigen::MatrixXd::Zero(N, K));
  const std::size_t chunk = (total + workers - 1) / workers;
  parallel_for(workers, [&](std::size_t w) {
    std::vector<double> y(d_active);
    std::vector<std::uint32_t> idx(d_active);
    for (std::size_t p = w * chunk; p < std::min(total, (w + 1) * chunk); ++p) {
      std::size_t rem = p;
      double weight = 1.0;
      for (std::size_t j = 0; j < d_active; ++j) {
        idx[j] = static_cast<std::uint32_t>(rem % q);
        rem /= q;
        y[j] = rule.nodes[idx[j]];
        weight *= rule.weights[idx[j]];
      }
      const Eigen::VectorXd fy = f(y);
      require(fy.size() == K, ErrorKind::DimensionMismatch, "f returns a block of the wrong length");
      for (Eigen::Index c = 0; c < N; ++c) {
        double psi = weight;
        for (const auto& [dim, val] : index_set[static_cast<std::size_t>(c)].entries())
          psi *= table(idx[dim - 1], val);
        partial[w].row(c) += psi * fy.transpose();
      }
    }
  });
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(N, K);
  for (const auto& p : partial) out += p;
  return out;
}

}  // namespace holo
