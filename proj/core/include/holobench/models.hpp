#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "holobench/banachspace.hpp"
#include "holobench/multiindex.hpp"
#include "holobench/polybasis.hpp"
#include "holobench/sensing.hpp"

namespace holo {

/// -(a(x,y) u')' = F(x) on (0,1), u(0) = u(1) = 0, with
/// a(x,y) = a0 + sum_j y_j b_j sin(j pi x).
struct DiffusionConfig {
  std::size_t grid_size = 63;  // K_fine interior nodes, h = 1 / (K_fine + 1)
  double a0 = 1.0;
  std::vector<double> b;  // amplitudes, one per active parameter
  std::function<double(double)> forcing = [](double) { return 1.0; };

  std::size_t active_dims() const noexcept { return b.size(); }
};

/// r = a0 - sum_j b_j (sup_x |psi_j| = b_j). ModelError unless r > 0.
double ellipticity_margin(const DiffusionConfig& cfg);

/// Interior nodal values of the second-order finite-difference solution
/// (midpoint coefficients, tridiagonal solve). Coordinates of y beyond
/// b.size() are ignored; missing ones count as 0.
Eigen::VectorXd diffusion_solution(std::span<const double> y, const DiffusionConfig& cfg);

/// b_j = (j + 1)^{-beta}, j = 1..d.
std::vector<double> algebraic_amplitudes(std::size_t d, double beta, double scale = 1.0);
/// b_j = theta^j, j = 1..d.
std::vector<double> geometric_amplitudes(std::size_t d, double theta, double scale = 1.0);

enum class SyntheticKind { Rational, Exponential };

struct HolomorphicParams {
  SyntheticKind kind = SyntheticKind::Rational;
  std::vector<double> b;
  double c0 = 2.0;  // rational: 1 / (c0 - sum b_j y_j)
  double eps = 0.5;
  double p = 0.5;
};

/// Rational: 1 / (c0 - sum b_j y_j), requires c0 - ||b||_1 > 0.
/// Exponential: exp(sum b_j y_j) / exp(||b||_1), so sup |f| <= 1.
double synthetic_holomorphic(std::span<const double> y, const HolomorphicParams& params);

/// sum_j ((rho_j + 1/rho_j)/2 - 1) b_j <= eps. Throws when some rho_j < 1.
bool check_polyellipse(const std::vector<double>& rho, const std::vector<double>& b, double eps);

/// Decimation to a nested coarse grid and piecewise-linear re-embedding.
/// Grids are nested when (K_fine + 1) is a multiple of (K_coarse + 1).
struct CoarseProjection {
  Eigen::Index fine = 0;
  Eigen::Index coarse = 0;
  Eigen::MatrixXd decimate;  // coarse x fine
  Eigen::MatrixXd embed;     // fine x coarse
  double pi_estimate = 1.0;  // max(||P_K||, 1), estimated

  Eigen::VectorXd project(const Eigen::VectorXd& v_fine) const { return decimate * v_fine; }
  Eigen::VectorXd prolong(const Eigen::VectorXd& v_coarse) const { return embed * v_coarse; }
};

/// Builds P_K = embed * decimate and estimates pi_K in the fine-space norm:
/// power iteration for Hilbert norms, 200 random probes otherwise.
CoarseProjection make_coarse_projection(Eigen::Index K_fine, Eigen::Index K_coarse,
                                        const DiscreteSpace& fine_space, std::uint64_t seed = 7);

/// Coarse coefficients of v_fine together with the pi_K estimate.
std::pair<Eigen::VectorXd, double> project_coarse(const Eigen::VectorXd& v_fine, Eigen::Index K_coarse,
                                                  const DiscreteSpace& fine_space);

/// Gram matrix h_fine E^T E of the coarse space, so that ||z||_G is the
/// discrete L2 norm of the re-embedded function.
Eigen::MatrixXd coarse_gram(const CoarseProjection& proj);

/// c_nu = integral of f Psi_nu by tensor Gauss quadrature in d_active
/// coordinates with q nodes each. Returns N x K. CostGuard when d_active > 6
/// or q > 20.
Eigen::MatrixXd reference_coefficients(const VectorFunction& f, const IndexSet& index_set,
                                       Family family, std::size_t d_active, std::uint32_t q,
                                       Eigen::Index K);

}  // namespace holo
