#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "holobench/multiindex.hpp"

namespace holo {

/// Legendre pairs with the uniform measure on [-1,1], Chebyshev with the
/// arcsine measure. Both are normalised to probability measures, so the
/// univariate basis is orthonormal: Psi_0 = 1.
enum class Family { Legendre, Chebyshev };

std::string_view to_string(Family f);
Family parse_family(std::string_view name);

/// Sample points as rows: point i is row i, coordinate j (1-based dim j+1) is column j.
using PointSet = Eigen::MatrixXd;

/// Orthonormal polynomial of degree `degree` at y, by three-term recurrence.
/// Throws DomainError when |y| > 1.
double eval_univariate(Family family, std::uint32_t degree, double y);

/// Psi_0(y), ..., Psi_max_degree(y) in one recurrence sweep.
void eval_univariate_all(Family family, std::uint32_t max_degree, double y, std::span<double> out);

/// Tensor product over supp(nu); y holds coordinates 1..len(y).
double eval_tensor(Family family, const MultiIndex& nu, std::span<const double> y);

/// u_nu = ||Psi_nu||_inf: prod sqrt(2 nu_j + 1) (Legendre) or 2^{||nu||_0 / 2}.
double intrinsic_weight(Family family, const MultiIndex& nu);
Eigen::VectorXd intrinsic_weights(Family family, const IndexSet& set);

/// m i.i.d. points with n coordinates each. Uniform: 2U - 1. Chebyshev:
/// cos(pi U) with U on (0,1). Deterministic in the seed.
PointSet sample_points(Family family, std::size_t m, std::size_t n, std::uint64_t seed);

struct RootFactorization {
  std::vector<double> roots;  // ascending
  double scale = 1.0;         // Psi_nu(y) = prod_j scale * (y - roots[j])
};

/// Roots and per-factor scale of the degree-`degree` orthonormal polynomial.
/// Chebyshev roots are closed form; Legendre roots are the eigenvalues of the
/// symmetric tridiagonal Jacobi matrix.
RootFactorization roots_and_scale(Family family, std::uint32_t degree);

/// Leading coefficient of the classical (non-normalised) polynomial:
/// 2^{-nu} (2nu)! / (nu!)^2 for Legendre, 2^{nu-1} for Chebyshev (nu >= 1).
double leading_coefficient(Family family, std::uint32_t degree);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;  // sum to 1 (probability measure)
};

/// q-point Gauss rule for the family's probability measure: Gauss-Legendre
/// via Golub-Welsch, Gauss-Chebyshev in closed form. Exact for degree 2q - 1.
QuadratureRule gauss_rule(Family family, std::uint32_t q);

}  // namespace holo
