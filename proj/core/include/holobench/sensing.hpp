#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "holobench/banachspace.hpp"
#include "holobench/multiindex.hpp"
#include "holobench/network.hpp"
#include "holobench/polybasis.hpp"

namespace holo {

enum class MatrixProvenance { ExactPolynomial, NetworkEmulated };

/// A = (Psi_{nu_j}(y_i) / sqrt(m)) or its network-emulated counterpart A'.
struct MeasurementMatrix {
  Eigen::MatrixXd entries;  // m x N
  MatrixProvenance provenance = MatrixProvenance::ExactPolynomial;
  Family family = Family::Legendre;
  IndexSet index_set;
  double delta = 0.0;          // emulation accuracy, 0 for exact matrices
  double emulation_gap = 0.0;  // ||A - A'||_2 measured at assembly
  double gap_bound = 0.0;      // sqrt(N) delta

  Eigen::Index rows() const noexcept { return entries.rows(); }
  Eigen::Index cols() const noexcept { return entries.cols(); }
};

MeasurementMatrix assemble_exact(const PointSet& points, const IndexSet& index_set, Family family);

/// A' from a stacked network whose output j emulates Psi_{nu_j}. The gap to
/// the exact matrix on the same points is measured and must satisfy
/// ||A - A'||_2 <= sqrt(N) delta (plus 1e-9 ||A||_F rounding slack); otherwise
/// BuildRejected is thrown.
MeasurementMatrix assemble_emulated(const Network& stacked, const PointSet& points,
                                    const IndexSet& index_set, Family family, double delta);

/// Blockwise action (A x)_i = sum_j a_ij x_j, i.e. A * X for X (N x K).
Eigen::MatrixXd apply_block(const Eigen::MatrixXd& A, const Eigen::MatrixXd& X);

/// Largest singular value by power iteration on A^T A (200 iterations max,
/// relative tolerance 1e-10). Deterministic start vector.
double spectral_norm(const Eigen::MatrixXd& A, int max_iters = 200, double tol = 1e-10);

using VectorFunction = std::function<Eigen::VectorXd(std::span<const double>)>;

struct DataVector {
  Eigen::MatrixXd values;  // m x K, row i = (f(y_i) + n_i) / sqrt(m)
  Eigen::MatrixXd noise;   // m x K, row i = n_i (unscaled)
  double e_samp = 0.0;     // sqrt(1/m sum ||n_i||_V^2)
};

/// Samples f at every point and adds noise rescaled to ||n_i||_V = eta.
DataVector synthesize_data(const VectorFunction& f, const PointSet& points,
                           const DiscreteSpace& space, double eta, std::uint64_t seed);

struct RipEstimate {
  double delta_hat = 0.0;
  bool empty_sparsity = false;  // no nonempty support has |S|_w <= k
  std::size_t supports_tried = 0;
  std::size_t max_support = 0;
};

/// Empirical lower bound on the weighted RIP constant delta_{k,w}: for each
/// trial a random column order is drawn and the longest prefix S with
/// |S|_w <= k is kept; delta_hat is the largest deviation of the extreme
/// squared singular values of A_S from 1. Supports are nested in k for a
/// fixed seed, so delta_hat is nondecreasing in k.
RipEstimate estimate_rip_constant(const Eigen::MatrixXd& A, double k,
                                  const Eigen::VectorXd& weights, std::size_t trials,
                                  std::uint64_t seed);

/// Exact delta_{k,w} by enumerating every support (at most 12 columns).
double exact_rip_constant(const Eigen::MatrixXd& A, double k, const Eigen::VectorXd& weights);

struct FullCaseStability {
  double sigma_min = 0.0;
  double gamma_bound = 0.0;  // 1 / sigma_min
};

/// Smallest singular value of A (m >= N). Throws Underdetermined when m < N.
FullCaseStability full_case_stability(const Eigen::MatrixXd& A);

}  // namespace holo
