#include "holobench/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include <Eigen/QR>

#include "holobench/error.hpp"
#include "holobench/sensing.hpp"

namespace holo {

namespace {

BlockNorm dual_of(BlockNorm n) {
  switch (n) {
    case BlockNorm::L2: return BlockNorm::L2;
    case BlockNorm::L1: return BlockNorm::LInf;
    case BlockNorm::LInf: return BlockNorm::L1;
  }
  return BlockNorm::L2;
}

double plain_norm(const Eigen::Ref<const Eigen::RowVectorXd>& v, BlockNorm n) {
  switch (n) {
    case BlockNorm::L2: return v.norm();
    case BlockNorm::L1: return v.lpNorm<1>();
    case BlockNorm::LInf: return v.lpNorm<Eigen::Infinity>();
  }
  return 0.0;
}

// Projection of v onto the l1 ball of radius c (sorting method).
Eigen::RowVectorXd project_l1_ball(const Eigen::RowVectorXd& v, double c) {
  if (v.lpNorm<1>() <= c) return v;
  if (c <= 0.0) return Eigen::RowVectorXd::Zero(v.size());
  std::vector<double> a(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) a[static_cast<std::size_t>(i)] = std::abs(v[i]);
  std::sort(a.begin(), a.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (std::size_t r = 0; r < a.size(); ++r) {
    cum += a[r];
    const double t = (cum - c) / static_cast<double>(r + 1);
    if (r + 1 == a.size() || a[r + 1] <= t) {
      theta = t;
      break;
    }
  }
  Eigen::RowVectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out[i] = std::copysign(std::max(std::abs(v[i]) - theta, 0.0), v[i]);
  return out;
}

// Rows of |Q| sorted in decreasing order with prefix sums, for the exact
// per-row solves of the mixed-norm projection.
struct SortedRows {
  Eigen::MatrixXd a;       // sorted magnitudes
  Eigen::MatrixXd prefix;  // prefix(i, r) = sum of the r + 1 largest
};

SortedRows sort_rows(const Eigen::MatrixXd& Q) {
  SortedRows s;
  s.a = Q.cwiseAbs();
  s.prefix.resize(Q.rows(), Q.cols());
  for (Eigen::Index i = 0; i < Q.rows(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(Q.cols()));
    for (Eigen::Index j = 0; j < Q.cols(); ++j) row[static_cast<std::size_t>(j)] = s.a(i, j);
    std::sort(row.begin(), row.end(), std::greater<>());
    double cum = 0.0;
    for (Eigen::Index j = 0; j < Q.cols(); ++j) {
      s.a(i, j) = row[static_cast<std::size_t>(j)];
      cum += row[static_cast<std::size_t>(j)];
      s.prefix(i, j) = cum;
    }
  }
  return s;
}

// Per row: minimiser of 1/2||y - q||^2 + mu/2 phi(y)^2 is a clip at t (phi =
// linf) or a soft threshold at theta (phi = l1). Returns phi(y) for the row
// and writes the threshold.
double row_level(const SortedRows& s, Eigen::Index i, double mu, BlockNorm dual, double& thr) {
  const Eigen::Index K = s.a.cols();
  if (s.a(i, 0) == 0.0) {
    thr = 0.0;
    return 0.0;
  }
  for (Eigen::Index r = 1; r <= K; ++r) {
    const double Sr = s.prefix(i, r - 1);
    const double next = r < K ? s.a(i, r) : 0.0;
    const double hi = s.a(i, r - 1);
    if (dual == BlockNorm::LInf) {
      const double t = Sr / (mu + static_cast<double>(r));
      if (t >= next && t <= hi) {
        thr = t;
        return t;
      }
    } else {
      const double theta = mu * Sr / (1.0 + mu * static_cast<double>(r));
      if (theta >= next && theta <= hi) {
        thr = theta;
        return Sr - static_cast<double>(r) * theta;
      }
    }
  }
  // Ties can make every interval test fail by rounding; fall back to the last piece.
  const double Sr = s.prefix(i, K - 1);
  if (dual == BlockNorm::LInf) {
    thr = Sr / (mu + static_cast<double>(K));
    return thr;
  }
  thr = mu * Sr / (1.0 + mu * static_cast<double>(K));
  return std::max(0.0, Sr - static_cast<double>(K) * thr);
}

}  // namespace

Eigen::MatrixXd project_dual_ball(const Eigen::MatrixXd& Q, BlockNorm norm) {
  const BlockNorm dual = dual_of(norm);
  if (dual == BlockNorm::L2) {
    const double n = Q.norm();
    return n <= 1.0 ? Q : Eigen::MatrixXd(Q / n);
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < Q.rows(); ++i) {
    const double v = plain_norm(Q.row(i), dual);
    total += v * v;
  }
  if (total <= 1.0) return Q;

  const SortedRows s = sort_rows(Q);
  std::vector<double> thr(static_cast<std::size_t>(Q.rows()));
  auto excess = [&](double mu) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < Q.rows(); ++i) {
      const double v = row_level(s, i, mu, dual, thr[static_cast<std::size_t>(i)]);
      acc += v * v;
    }
    return acc - 1.0;
  };
  // Outer search for the multiplier: the excess is continuous and decreasing.
  double lo = 0.0, flo = total - 1.0;
  double hi = 1.0, fhi = excess(hi);
  while (fhi > 0.0) {
    lo = hi;
    flo = fhi;
    hi *= 4.0;
    fhi = excess(hi);
  }
  double mu = hi;
  int side = 0;
  for (int it = 0; it < 200; ++it) {
    mu = (lo * fhi - hi * flo) / (fhi - flo);
    if (!(mu > lo && mu < hi)) mu = 0.5 * (lo + hi);
    const double fm = excess(mu);
    if (std::abs(fm) <= 1e-14 || hi - lo <= 1e-15 * hi) break;
    if (fm > 0.0) {
      lo = mu;
      flo = fm;
      if (side == -1) fhi *= 0.5;
      side = -1;
    } else {
      hi = mu;
      fhi = fm;
      if (side == 1) flo *= 0.5;
      side = 1;
    }
  }
  excess(mu);
  Eigen::MatrixXd Y(Q.rows(), Q.cols());
  for (Eigen::Index i = 0; i < Q.rows(); ++i) {
    const double t = thr[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < Q.cols(); ++j) {
      const double q = Q(i, j);
      Y(i, j) = dual == BlockNorm::LInf ? std::clamp(q, -t, t)
                                        : std::copysign(std::max(std::abs(q) - t, 0.0), q);
    }
  }
  return Y;
}

Eigen::MatrixXd prox_weighted_group(const Eigen::MatrixXd& V, const Eigen::VectorXd& c,
                                    BlockNorm norm) {
  Eigen::MatrixXd out(V.rows(), V.cols());
  for (Eigen::Index i = 0; i < V.rows(); ++i) {
    const double ci = c[i];
    switch (norm) {
      case BlockNorm::L2: {
        const double n = V.row(i).norm();
        out.row(i) = n > ci ? Eigen::RowVectorXd(V.row(i) * (1.0 - ci / n))
                            : Eigen::RowVectorXd::Zero(V.cols());
        break;
      }
      case BlockNorm::L1:
        for (Eigen::Index j = 0; j < V.cols(); ++j)
          out(i, j) = std::copysign(std::max(std::abs(V(i, j)) - ci, 0.0), V(i, j));
        break;
      case BlockNorm::LInf:
        out.row(i) = V.row(i) - project_l1_ball(V.row(i), ci);
        break;
    }
  }
  return out;
}

double residual_norm(const Eigen::MatrixXd& A, const Eigen::MatrixXd& f, const Eigen::MatrixXd& z,
                     const DiscreteSpace& space) {
  require(A.rows() == f.rows() && A.cols() == z.rows() && f.cols() == z.cols() &&
              f.cols() == space.dim(),
          ErrorKind::DimensionMismatch, "inconsistent shapes in residual");
  const Eigen::MatrixXd r = A * z - f;
  return space.row_norms(r).norm();
}

double objective_srlasso(const Eigen::MatrixXd& A, const Eigen::MatrixXd& f,
                         const Eigen::MatrixXd& z, double lambda, const Eigen::VectorXd& u,
                         const DiscreteSpace& space) {
  require(lambda >= 0.0, ErrorKind::InvalidArgument, "lambda must be nonnegative");
  require(u.size() == z.rows(), ErrorKind::DimensionMismatch, "weights and blocks are not aligned");
  const double reg = lambda > 0.0 ? lambda * u.dot(space.row_norms(z)) : 0.0;
  return reg + residual_norm(A, f, z, space);
}

namespace {

// Chambolle-Pock on min_z lambda sum_i u_i ||z_i|| + ||A z - f||_{2;V} with
// plain (non-Gram) block norms. lambda = 0 drops the regulariser.
SolveResult chambolle_pock(const Eigen::MatrixXd& A, const Eigen::MatrixXd& f,
                           const Eigen::VectorXd& u, double lambda, BlockNorm norm,
                           const SolverOptions& opts, const Eigen::MatrixXd* warm) {
  require(opts.max_iters >= 1, ErrorKind::InvalidArgument, "max_iters must be >= 1");
  require(opts.rel_tol > 0.0, ErrorKind::InvalidArgument, "rel_tol must be positive");
  const Eigen::Index N = A.cols(), K = f.cols();
  SolveResult res;
  res.report.operator_norm = spectral_norm(A);
  const double Lnorm = std::max(res.report.operator_norm, 1e-300);
  double tau = opts.tau > 0.0 ? opts.tau : 0.99 / Lnorm;
  double sigma = opts.sigma > 0.0 ? opts.sigma : 0.99 / Lnorm;
  // Auto steps start balanced and shift weight to the dual step in stages;
  // tau * sigma stays at 0.99^2 / ||A||^2 throughout.
  const bool adaptive = opts.tau <= 0.0 && opts.sigma <= 0.0;
  constexpr int kStageLength = 300;
  constexpr double kMinRatio = 1e-3;
  double ratio = 1.0;

  auto objective = [&](const Eigen::MatrixXd& z, const Eigen::MatrixXd& az) {
    double reg = 0.0;
    if (lambda > 0.0)
      for (Eigen::Index i = 0; i < N; ++i) reg += u[i] * plain_norm(z.row(i), norm);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < az.rows(); ++i) {
      const double v = plain_norm(az.row(i) - f.row(i), norm);
      acc += v * v;
    }
    return lambda * reg + std::sqrt(acc);
  };

  Eigen::MatrixXd z = warm ? *warm : Eigen::MatrixXd::Zero(N, K);
  require(z.rows() == N && z.cols() == K, ErrorKind::DimensionMismatch, "warm start has wrong shape");
  Eigen::MatrixXd az = A * z;
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(A.rows(), K);
  Eigen::MatrixXd aty = Eigen::MatrixXd::Zero(N, K);
  Eigen::MatrixXd azbar = az;

  res.z = z;
  res.report.final_objective = objective(z, az);
  if (opts.record_history) res.report.history.reserve(static_cast<std::size_t>(opts.max_iters));

  for (int it = 1; it <= opts.max_iters; ++it) {
    Eigen::MatrixXd y_new = project_dual_ball(y + sigma * (azbar - f), norm);
    Eigen::MatrixXd aty_new = A.transpose() * y_new;
    Eigen::MatrixXd v = z - tau * aty_new;
    Eigen::MatrixXd z_new = lambda > 0.0 ? prox_weighted_group(v, u * (tau * lambda), norm) : v;
    Eigen::MatrixXd az_new = A * z_new;

    const double obj = objective(z_new, az_new);
    if (obj < res.report.final_objective) {
      res.report.final_objective = obj;
      res.z = z_new;
    }
    if (opts.record_history) res.report.history.push_back(res.report.final_objective);

    const double p = ((z - z_new) / tau - (aty - aty_new)).norm();
    const double d = ((y - y_new) / sigma - (az - az_new)).norm();
    const double pscale = aty_new.norm() + z_new.norm() / tau + 1e-300;
    const double dscale = az_new.norm() + f.norm() + 1e-300;
    res.report.residual = std::max(p / pscale, d / dscale);
    res.report.iterations = it;

    azbar = 2.0 * az_new - az;
    if (adaptive && it % kStageLength == 0 && ratio > kMinRatio) {
      ratio = std::max(kMinRatio, ratio / 10.0);
      tau = 0.99 * ratio / Lnorm;
      sigma = 0.99 / (ratio * Lnorm);
    }
    z = std::move(z_new);
    az = std::move(az_new);
    y = std::move(y_new);
    aty = std::move(aty_new);
    if (res.report.residual <= opts.rel_tol) {
      res.report.converged = true;
      break;
    }
  }
  return res;
}

// Runs the plain-norm solver in Gram coordinates when needed.
SolveResult solve_in_space(const Eigen::MatrixXd& A, const Eigen::MatrixXd& f,
                           const Eigen::VectorXd& u, double lambda, const DiscreteSpace& space,
                           const SolverOptions& opts, const Eigen::MatrixXd* warm) {
  if (!space.gram()) return chambolle_pock(A, f, u, lambda, space.norm_kind(), opts, warm);
  const Eigen::MatrixXd L = space.gram_factor();
  const Eigen::MatrixXd ft = f * L;
  Eigen::MatrixXd wt;
  if (warm) wt = *warm * L;
  SolveResult res = chambolle_pock(A, ft, u, lambda, BlockNorm::L2, opts, warm ? &wt : nullptr);
  // z L = z~  <=>  L^T z^T = z~^T
  res.z = L.transpose().triangularView<Eigen::Upper>().solve(res.z.transpose()).transpose();
  return res;
}

}  // namespace

SolveResult solve_srlasso(const Eigen::MatrixXd& A, const Eigen::MatrixXd& f,
                          const Eigen::VectorXd& u, double lambda, const DiscreteSpace& space,
                          const SolverOptions& opts, const Eigen::MatrixXd* warm_start) {
  require(lambda > 0.0, ErrorKind::InvalidArgument,
          "solve_srlasso needs lambda > 0; use solve_leastsquares for lambda = 0");
  require(A.rows() == f.rows() && f.cols() == space.dim(), ErrorKind::DimensionMismatch,
          "data shape differs from A and V_K");
  require(u.size() == A.cols(), ErrorKind::DimensionMismatch, "weights and columns are not aligned");
  SolveResult res = solve_in_space(A, f, u, lambda, space, opts, warm_start);
  res.report.final_objective = objective_srlasso(A, f, res.z, lambda, u, space);
  return res;
}

SolveResult solve_leastsquares(const Eigen::MatrixXd& A, const Eigen::MatrixXd& f,
                               const DiscreteSpace& space, const SolverOptions& opts) {
  require(A.rows() == f.rows() && f.cols() == space.dim(), ErrorKind::DimensionMismatch,
          "data shape differs from A and V_K");
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
  SolveResult res;
  res.z = cod.solve(f);
  res.report.rank_deficient = cod.rank() < A.cols();
  res.report.converged = true;
  if (!space.is_hilbert()) {
    if (opts.iterative_least_squares) {
      const Eigen::VectorXd u = Eigen::VectorXd::Ones(A.cols());
      Eigen::MatrixXd start = res.z;
      res = chambolle_pock(A, f, u, 0.0, space.norm_kind(), opts, &start);
      res.report.rank_deficient = cod.rank() < A.cols();
    } else {
      res.report.channelwise = true;
    }
  }
  res.report.final_objective = residual_norm(A, f, res.z, space);
  return res;
}

SolverOptions reference_options(const SolverOptions& opts) {
  SolverOptions ref = opts;
  ref.max_iters = opts.max_iters * 10;
  ref.rel_tol = opts.rel_tol / 10.0;
  ref.record_history = false;
  return ref;
}

double eopt_certify(const Eigen::MatrixXd& A, const Eigen::MatrixXd& f, const Eigen::MatrixXd& z,
                    double lambda, const Eigen::VectorXd& u, const DiscreteSpace& space,
                    const SolverOptions& reference_opts) {
  const double g = objective_srlasso(A, f, z, lambda, u, space);
  double g_ref = g;
  if (lambda > 0.0) {
    g_ref = solve_srlasso(A, f, u, lambda, space, reference_opts, &z).report.final_objective;
  } else {
    SolverOptions o = reference_opts;
    o.iterative_least_squares = true;
    g_ref = solve_leastsquares(A, f, space, o).report.final_objective;
  }
  return std::max(0.0, g - std::min(g, g_ref));
}

}  // namespace holo
