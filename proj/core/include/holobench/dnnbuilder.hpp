#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "holobench/multiindex.hpp"
#include "holobench/network.hpp"
#include "holobench/polybasis.hpp"

namespace holo {

/// Outcome of validating an emulator against the polynomial it replaces.
struct EmulationCertificate {
  double delta = 0.0;       // target sup-norm accuracy (0 for exact RePU builds)
  double grid_error = 0.0;  // measured sup error
  std::vector<std::uint32_t> active_dims;
  std::size_t points_per_dim = 0;  // tensor grid resolution, 0 when sampled
  std::size_t evaluations = 0;
  bool sampled = false;  // random points instead of a tensor grid
  bool certified = false;
  int retries = 0;
  int relu_levels = 0;         // squaring depth per multiply (ReLU)
  double tanh_scale = 0.0;     // finite-difference scale tau (tanh)
  double product_bound = 0.0;  // M = prod of factor bounds
};

struct PolyNetwork {
  Network net;
  EmulationCertificate certificate;
};

/// Identity map on `dim` inputs realised with `depth` hidden layers.
/// ReLU: sigma(x) - sigma(-x). RePU: exact power combination. tanh:
/// tanh(alpha x) / alpha with alpha = kTanhIdentityScale.
Network identity_network(const Activation& act, Eigen::Index dim, std::size_t depth);

inline constexpr double kTanhIdentityScale = 1e-5;

/// Exact product of n numbers with RePU of power ell: binary tree of
/// two-number multiplies, inputs padded with ones to a power of two.
Network build_product_repu(int ell, std::size_t n_factors);

/// Product of n numbers with |x_i| <= bounds[i] to sup accuracy delta (ReLU or
/// tanh). Inputs are rescaled to [-1,1], multiplied in a binary tree with a
/// per-node budget delta / (M n_pad), and the output is rescaled by M.
Network build_product_approx(const Activation& act, const std::vector<double>& bounds,
                             double delta);

/// Phi_{nu,delta} on the coordinates theta: the affine factor map
/// y -> scale (y_j - r) over the roots of each univariate factor, followed by
/// a product network; validated on a grid over supp(nu). Throws
/// InvalidArgument when supp(nu) is not inside theta and BuildRejected when
/// the certificate fails after retries.
PolyNetwork build_poly_network(Family family, const MultiIndex& nu, double delta,
                               const std::vector<std::uint32_t>& theta, const Activation& act);

/// Certificate for an already built emulator of Psi_nu.
EmulationCertificate certify_emulation(const Network& net, Family family, const MultiIndex& nu,
                                       double delta);

/// One network whose output j is network j's output. Shallower networks are
/// padded with identity layers on the input side. All inputs must share
/// activation and theta. CostGuard when the dense result would exceed 5e7
/// weights.
Network stack_networks(const std::vector<Network>& nets);

/// Sets the head Z (N x K): forward(y) = Z^T Phi(y).
Network attach_head(Network net, const Eigen::MatrixXd& Z);

/// Composition outer(inner(x)); the last affine map of inner and the first of
/// outer are merged.
Network compose(const Network& outer, const Network& inner);

}  // namespace holo
