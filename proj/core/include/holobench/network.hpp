#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace holo {

enum class ActivationKind { ReLU, RePU, Tanh };

struct Activation {
  ActivationKind kind = ActivationKind::ReLU;
  int power = 2;  // RePU exponent; ignored otherwise

  static Activation relu() { return {ActivationKind::ReLU, 1}; }
  static Activation repu(int power = 2);
  static Activation tanh() { return {ActivationKind::Tanh, 1}; }

  double operator()(double x) const noexcept;
  /// "relu", "tanh", "repu" (power 2) or "repuL".
  std::string name() const;
  static Activation parse(std::string_view name);

  bool operator==(const Activation&) const = default;
};

/// Affine map x -> W x + b. W is (out x in).
struct AffineLayer {
  Eigen::MatrixXd weights;
  Eigen::VectorXd bias;

  Eigen::Index in_dim() const noexcept { return weights.cols(); }
  Eigen::Index out_dim() const noexcept { return weights.rows(); }
};

/// A_{D+1}(sigma(A_D(... sigma(A_1 x)))) optionally followed by a linear
/// head Z^T. Inputs are the coordinates listed in `theta` (1-based, in that
/// order); `forward` applies the restriction itself.
class Network {
 public:
  Activation activation;
  std::vector<std::uint32_t> theta;
  std::vector<AffineLayer> layers;
  std::optional<Eigen::MatrixXd> head;  // N x K

  Network() = default;
  Network(Activation act, std::vector<std::uint32_t> theta, std::vector<AffineLayer> layers);

  Eigen::Index input_dim() const;
  /// Output size of the last affine layer (N), ignoring the head.
  Eigen::Index body_output_dim() const;
  /// K with a head, N without.
  Eigen::Index output_dim() const;
  std::size_t depth() const noexcept { return layers.empty() ? 0 : layers.size() - 1; }

  /// Body only, on an already restricted input.
  Eigen::VectorXd forward_body(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  /// Restriction, body and head.
  Eigen::VectorXd forward(std::span<const double> y) const;
  /// Row i of the result is forward(points.row(i)).
  Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& points) const;
  /// Body outputs for every row (no head).
  Eigen::MatrixXd forward_body_batch(const Eigen::MatrixXd& points) const;

  /// Throws unless consecutive layer dimensions chain and the head fits.
  void validate() const;
};

/// (y_j)_{j in theta}. Throws DimensionMismatch when a coordinate is missing.
Eigen::VectorXd restrict(std::span<const std::uint32_t> theta, std::span<const double> y);

struct ArchitectureStats {
  std::size_t width = 0;  // max over N_1, ..., N_{D+1}
  std::size_t depth = 0;  // number of hidden layers
  std::size_t size = 0;   // nonzero weights and biases, head included
};

ArchitectureStats architecture_stats(const Network& net);

}  // namespace holo
