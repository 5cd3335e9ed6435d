#include "holobench/network.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SparseCore>

#include "holobench/error.hpp"

namespace holo {

Activation Activation::repu(int power) {
  require(power >= 2, ErrorKind::InvalidArgument, "RePU needs power >= 2");
  return {ActivationKind::RePU, power};
}

double Activation::operator()(double x) const noexcept {
  switch (kind) {
    case ActivationKind::ReLU: return x > 0.0 ? x : 0.0;
    case ActivationKind::Tanh: return std::tanh(x);
    case ActivationKind::RePU: {
      if (x <= 0.0) return 0.0;
      double r = x;
      for (int i = 1; i < power; ++i) r *= x;
      return r;
    }
  }
  return 0.0;
}

std::string Activation::name() const {
  switch (kind) {
    case ActivationKind::ReLU: return "relu";
    case ActivationKind::Tanh: return "tanh";
    case ActivationKind::RePU: return power == 2 ? "repu" : "repu" + std::to_string(power);
  }
  return "relu";
}

Activation Activation::parse(std::string_view name) {
  if (name == "relu") return relu();
  if (name == "tanh") return tanh();
  if (name.starts_with("repu")) {
    auto rest = name.substr(4);
    if (rest.empty()) return repu(2);
    int p = 0;
    for (char c : rest) {
      require(c >= '0' && c <= '9', ErrorKind::InvalidArgument,
              "bad activation '" + std::string(name) + "'");
      p = p * 10 + (c - '0');
    }
    return repu(p);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown activation '" + std::string(name) + "'");
}

Network::Network(Activation act, std::vector<std::uint32_t> th, std::vector<AffineLayer> ls)
    : activation(act), theta(std::move(th)), layers(std::move(ls)) {
  validate();
}

Eigen::Index Network::input_dim() const { return static_cast<Eigen::Index>(theta.size()); }

Eigen::Index Network::body_output_dim() const {
  require(!layers.empty(), ErrorKind::InvalidArgument, "network has no layers");
  return layers.back().out_dim();
}

Eigen::Index Network::output_dim() const {
  return head ? head->cols() : body_output_dim();
}

void Network::validate() const {
  require(!layers.empty(), ErrorKind::InvalidArgument, "network has no layers");
  require(layers.front().in_dim() == input_dim(), ErrorKind::DimensionMismatch,
          "first layer input size differs from |theta|");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    require(layers[i].bias.size() == layers[i].out_dim(), ErrorKind::DimensionMismatch,
            "bias size differs from layer output size");
    if (i > 0)
      require(layers[i].in_dim() == layers[i - 1].out_dim(), ErrorKind::DimensionMismatch,
              "layer dimensions do not chain");
  }
  if (head)
    require(head->rows() == body_output_dim(), ErrorKind::DimensionMismatch,
            "head rows differ from network outputs");
}

Eigen::VectorXd Network::forward_body(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  require(x.size() == input_dim(), ErrorKind::DimensionMismatch, "input size differs from |theta|");
  Eigen::VectorXd h = x;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    Eigen::VectorXd next = layers[i].bias;
    next.noalias() += layers[i].weights * h;
    if (i + 1 < layers.size())
      for (Eigen::Index j = 0; j < next.size(); ++j) next[j] = activation(next[j]);
    h = std::move(next);
  }
  return h;
}

Eigen::VectorXd Network::forward(std::span<const double> y) const {
  Eigen::VectorXd out = forward_body(restrict(theta, y));
  if (head) return head->transpose() * out;
  return out;
}

Eigen::MatrixXd Network::forward_body_batch(const Eigen::MatrixXd& points) const {
  // Batched: hidden states as columns.
  const Eigen::Index m = points.rows();
  Eigen::MatrixXd h(input_dim(), m);
  for (Eigen::Index i = 0; i < input_dim(); ++i) {
    const auto dim = static_cast<Eigen::Index>(theta[static_cast<std::size_t>(i)]);
    require(dim >= 1 && dim <= points.cols(), ErrorKind::DimensionMismatch,
            "point lacks coordinate " + std::to_string(dim));
    h.row(i) = points.col(dim - 1).transpose();
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const Eigen::MatrixXd& W = layers[l].weights;
    Eigen::MatrixXd next;
    // Stacked emulators are block diagonal; skip the zeros when it pays.
    if (m > 8 && (W.array() != 0.0).count() * 8 < W.size()) {
      const Eigen::SparseMatrix<double> S = W.sparseView();
      next = S * h;
    } else {
      next = W * h;
    }
    next.colwise() += layers[l].bias;
    if (l + 1 < layers.size()) next = next.unaryExpr([this](double v) { return activation(v); });
    h = std::move(next);
  }
  return h.transpose();
}

Eigen::MatrixXd Network::forward_batch(const Eigen::MatrixXd& points) const {
  Eigen::MatrixXd body = forward_body_batch(points);
  if (head) return body * *head;
  return body;
}

Eigen::VectorXd restrict(std::span<const std::uint32_t> theta, std::span<const double> y) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(theta.size()));
  for (std::size_t i = 0; i < theta.size(); ++i) {
    require(theta[i] >= 1 && theta[i] <= y.size(), ErrorKind::DimensionMismatch,
            "point lacks coordinate " + std::to_string(theta[i]));
    out[static_cast<Eigen::Index>(i)] = y[theta[i] - 1];
  }
  return out;
}

ArchitectureStats architecture_stats(const Network& net) {
  ArchitectureStats s;
  s.depth = net.depth();
  for (const auto& layer : net.layers) {
    s.width = std::max(s.width, static_cast<std::size_t>(layer.out_dim()));
    s.size += static_cast<std::size_t>((layer.weights.array() != 0.0).count());
    s.size += static_cast<std::size_t>((layer.bias.array() != 0.0).count());
  }
  if (net.head) s.size += static_cast<std::size_t>((net.head->array() != 0.0).count());
  return s;
}

}  // namespace holo
