#pragma once

#include <vector>

#include <Eigen/Core>

#include "holobench/banachspace.hpp"

namespace holo {

struct SolverOptions {
  int max_iters = 50000;
  double rel_tol = 1e-9;
  double tau = 0.0;    // primal step, 0 = 0.99 / ||A||_2
  double sigma = 0.0;  // dual step, 0 = 0.99 / ||A||_2
  bool record_history = false;
  /// Least squares with a non-Hilbert block norm: minimise the l2-of-V-norms
  /// residual iteratively instead of returning the channelwise solution.
  bool iterative_least_squares = false;

  bool operator==(const SolverOptions&) const = default;
};

struct SolveReport {
  double final_objective = 0.0;
  int iterations = 0;
  bool converged = false;
  double eopt_proxy = 0.0;
  double residual = 0.0;        // final relative primal-dual residual
  double operator_norm = 0.0;   // ||A||_2 used for the steps
  bool rank_deficient = false;  // least squares returned the minimum-norm solution
  bool channelwise = false;     // non-Hilbert least squares solved channel by channel
  std::vector<double> history;  // best objective so far, per iteration
};

struct SolveResult {
  Eigen::MatrixXd z;  // N x K, row j is the block of nu_j
  SolveReport report;
};

/// ||A z - f||_{2;V} = sqrt(sum_i ||(A z - f)_i||_V^2).
double residual_norm(const Eigen::MatrixXd& A, const Eigen::MatrixXd& f, const Eigen::MatrixXd& z,
                     const DiscreteSpace& space);

/// lambda ||z||_{1,u;V} + ||A z - f||_{2;V}.
double objective_srlasso(const Eigen::MatrixXd& A, const Eigen::MatrixXd& f,
                         const Eigen::MatrixXd& z, double lambda, const Eigen::VectorXd& u,
                         const DiscreteSpace& space);

/// Weighted square-root group LASSO by Chambolle-Pock primal-dual splitting.
/// The returned iterate is the best (lowest objective) primal iterate seen,
/// so the reported objective sequence is nonincreasing. A Gram inner product
/// is handled by the change of variables z -> z L with G = L L^T. lambda must
/// be positive; warm_start, when given, is the initial primal iterate.
SolveResult solve_srlasso(const Eigen::MatrixXd& A, const Eigen::MatrixXd& f,
                          const Eigen::VectorXd& u, double lambda, const DiscreteSpace& space,
                          const SolverOptions& opts = {},
                          const Eigen::MatrixXd* warm_start = nullptr);

/// min ||A z - f||_{2;V}. Hilbert norms (with or without Gram): K independent
/// least-squares problems by complete orthogonal decomposition, minimum-norm
/// when A is rank deficient. Other block norms: the same channelwise solution,
/// flagged, unless opts.iterative_least_squares asks for the primal-dual path.
SolveResult solve_leastsquares(const Eigen::MatrixXd& A, const Eigen::MatrixXd& f,
                               const DiscreteSpace& space, const SolverOptions& opts = {});

/// max(0, G(z) - G(z_ref)) where z_ref is a reference solve with
/// `reference_opts` started from z (lambda = 0 certifies least squares).
double eopt_certify(const Eigen::MatrixXd& A, const Eigen::MatrixXd& f, const Eigen::MatrixXd& z,
                    double lambda, const Eigen::VectorXd& u, const DiscreteSpace& space,
                    const SolverOptions& reference_opts);

/// Reference options for certifying a run made with `opts`: ten times the
/// iteration budget and a ten times tighter tolerance.
SolverOptions reference_options(const SolverOptions& opts);

/// Euclidean projection of Q (rows are blocks) onto
/// { Y : sum_i ||y_i||_*^2 <= 1 }, ||.||_* the dual of the block norm.
Eigen::MatrixXd project_dual_ball(const Eigen::MatrixXd& Q, BlockNorm norm);

/// prox of t * sum_i c_i ||x_i|| (block norm `norm`) at V, row by row.
Eigen::MatrixXd prox_weighted_group(const Eigen::MatrixXd& V, const Eigen::VectorXd& c,
                                    BlockNorm norm);

}  // namespace holo
