#include "holobench/dnnbuilder.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include <Eigen/LU>

#include "holobench/error.hpp"
#include "holobench/rng.hpp"

namespace holo {

namespace {

constexpr double kMaxStackedEntries = 5e7;  // 400 MB of weights

using Layers = std::vector<AffineLayer>;

AffineLayer affine(Eigen::MatrixXd W, Eigen::VectorXd b) { return {std::move(W), std::move(b)}; }

Layers compose_layers(const Layers& outer, const Layers& inner) {
  require(outer.front().in_dim() == inner.back().out_dim(), ErrorKind::DimensionMismatch,
          "cannot compose: inner outputs differ from outer inputs");
  Layers out(inner.begin(), inner.end() - 1);
  const auto& li = inner.back();
  const auto& lo = outer.front();
  out.push_back(affine(lo.weights * li.weights, lo.weights * li.bias + lo.bias));
  out.insert(out.end(), outer.begin() + 1, outer.end());
  return out;
}

// Parallel networks on disjoint input slices (equal depth).
Layers blockdiag(const std::vector<Layers>& parts) {
  const std::size_t L = parts.front().size();
  Layers out(L);
  for (std::size_t l = 0; l < L; ++l) {
    Eigen::Index rows = 0, cols = 0;
    for (const auto& p : parts) {
      require(p.size() == L, ErrorKind::InvalidArgument, "block-diagonal parts differ in depth");
      rows += p[l].out_dim();
      cols += p[l].in_dim();
    }
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(rows, cols);
    Eigen::VectorXd b(rows);
    Eigen::Index r = 0, c = 0;
    for (const auto& p : parts) {
      W.block(r, c, p[l].out_dim(), p[l].in_dim()) = p[l].weights;
      b.segment(r, p[l].out_dim()) = p[l].bias;
      r += p[l].out_dim();
      c += p[l].in_dim();
    }
    out[l] = affine(std::move(W), std::move(b));
  }
  return out;
}

// Parallel networks reading the same input (equal depth).
Layers vstack(const std::vector<Layers>& parts) {
  std::vector<Layers> tails;
  Eigen::Index rows = 0;
  const Eigen::Index in = parts.front().front().in_dim();
  for (const auto& p : parts) {
    require(p.front().in_dim() == in, ErrorKind::DimensionMismatch, "stacked inputs differ");
    rows += p.front().out_dim();
  }
  Eigen::MatrixXd W(rows, in);
  Eigen::VectorXd b(rows);
  Eigen::Index r = 0;
  for (const auto& p : parts) {
    W.middleRows(r, p.front().out_dim()) = p.front().weights;
    b.segment(r, p.front().out_dim()) = p.front().bias;
    r += p.front().out_dim();
    tails.emplace_back(p.begin() + 1, p.end());
  }
  Layers out{affine(std::move(W), std::move(b))};
  if (parts.front().size() > 1) {
    Layers rest = blockdiag(tails);
    out.insert(out.end(), rest.begin(), rest.end());
  }
  return out;
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

struct PowerCombo {
  std::vector<double> shifts;
  std::vector<double> coeffs;
};

// z^target = sum_j a_j (z + c_j)^ell, exact for polynomials.
PowerCombo power_combination(int ell, int target) {
  if (ell == 2 && target == 2) return {{0.0}, {1.0}};
  if (ell == 2 && target == 1) return {{1.0, -1.0}, {0.25, -0.25}};
  const int n = ell + 1;
  PowerCombo pc;
  for (int j = 0; j < n; ++j) pc.shifts.push_back(j - ell / 2.0);
  Eigen::MatrixXd M(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (int i = 0; i <= ell; ++i) {
    for (int j = 0; j < n; ++j) M(i, j) = binom(ell, i) * std::pow(pc.shifts[static_cast<std::size_t>(j)], ell - i);
    if (i == target) rhs[i] = 1.0;
  }
  const Eigen::VectorXd a = M.fullPivLu().solve(rhs);
  pc.coeffs.assign(a.data(), a.data() + n);
  return pc;
}

// Hidden rows computing sigma(+-(w.x + c_j)) for one linear form w, and the
// output row recombining them into (w.x)^target.
void add_power_form(int ell, int target, const Eigen::RowVectorXd& w, double out_scale,
                    std::vector<Eigen::RowVectorXd>& rows, std::vector<double>& bias,
                    std::vector<double>& out) {
  const PowerCombo pc = power_combination(ell, target);
  const double sign = (ell % 2 == 0) ? 1.0 : -1.0;
  for (std::size_t j = 0; j < pc.shifts.size(); ++j) {
    rows.push_back(w);
    bias.push_back(pc.shifts[j]);
    out.push_back(out_scale * pc.coeffs[j]);
    rows.push_back(-w);
    bias.push_back(-pc.shifts[j]);
    out.push_back(out_scale * sign * pc.coeffs[j]);
  }
}

Layers from_rows(const std::vector<Eigen::RowVectorXd>& rows, const std::vector<double>& bias,
                 const std::vector<double>& out, Eigen::Index in) {
  const auto h = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd W(h, in);
  Eigen::VectorXd b(h);
  Eigen::MatrixXd O(1, h);
  for (Eigen::Index i = 0; i < h; ++i) {
    W.row(i) = rows[static_cast<std::size_t>(i)];
    b[i] = bias[static_cast<std::size_t>(i)];
    O(0, i) = out[static_cast<std::size_t>(i)];
  }
  return {affine(std::move(W), std::move(b)), affine(std::move(O), Eigen::VectorXd::Zero(1))};
}

// xy = ((x+y)^2 - (x-y)^2) / 4, each square an exact RePU combination.
Layers repu_pair(int ell) {
  std::vector<Eigen::RowVectorXd> rows;
  std::vector<double> bias, out;
  Eigen::RowVectorXd plus(2), minus(2);
  plus << 1.0, 1.0;
  minus << 1.0, -1.0;
  add_power_form(ell, 2, plus, 0.25, rows, bias, out);
  add_power_form(ell, 2, minus, -0.25, rows, bias, out);
  return from_rows(rows, bias, out, 2);
}

// ReLU multiply on [-1,1]^2: xy = u^2 - v^2 with u, v = (x +- y)/2, each
// square replaced by the sawtooth approximation f_s(|w|) = |w| - sum_t g_t / 4^t
// (error at most 2^{-2s-2} per square).
Layers relu_pair(int s) {
  Layers out;
  // First hidden layer: per argument sigma(w), sigma(-w), sigma(w-1/2), sigma(-w-1/2).
  Eigen::MatrixXd W1(8, 2);
  Eigen::VectorXd b1(8);
  const double h = 0.5;
  W1 << h, h, -h, -h, h, h, -h, -h,  //
      h, -h, -h, h, h, -h, -h, h;
  b1 << 0, 0, -0.5, -0.5, 0, 0, -0.5, -0.5;
  out.push_back(affine(W1, b1));
  // Affine readout of (g_1, S_1) per argument from the first layer:
  // a = n1 + n2, q = n3 + n4, g_1 = 2a - 4q, S_1 = a - g_1/4 = a/2 + q.
  // prev_g, prev_S are 2 x width maps giving g and S for one argument.
  auto first_g = [](Eigen::Index off) {
    Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(8);
    r[off] = 2;
    r[off + 1] = 2;
    r[off + 2] = -4;
    r[off + 3] = -4;
    return r;
  };
  auto first_S = [](Eigen::Index off) {
    Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(8);
    r[off] = 0.5;
    r[off + 1] = 0.5;
    r[off + 2] = 1;
    r[off + 3] = 1;
    return r;
  };
  Eigen::RowVectorXd gU = first_g(0), sU = first_S(0), gV = first_g(4), sV = first_S(4);
  for (int t = 2; t <= s; ++t) {
    // Neurons per argument: sigma(g), sigma(g - 1/2), sigma(S).
    const Eigen::Index width = gU.size();
    Eigen::MatrixXd W(6, width);
    W.row(0) = gU;
    W.row(1) = gU;
    W.row(2) = sU;
    W.row(3) = gV;
    W.row(4) = gV;
    W.row(5) = sV;
    Eigen::VectorXd b(6);
    b << 0, -0.5, 0, 0, -0.5, 0;
    out.push_back(affine(W, b));
    const double w = std::ldexp(1.0, -2 * t);
    auto next = [&](Eigen::Index off, Eigen::RowVectorXd& g, Eigen::RowVectorXd& S) {
      g = Eigen::RowVectorXd::Zero(6);
      g[off] = 2;
      g[off + 1] = -4;
      S = Eigen::RowVectorXd::Zero(6);
      S[off + 2] = 1;
      S[off] = -2 * w;
      S[off + 1] = 4 * w;
    };
    next(0, gU, sU);
    next(3, gV, sV);
  }
  // Output S_s(u) - S_s(v). For s = 1 the readout is S_1 from the first layer.
  Eigen::MatrixXd O(1, sU.size());
  O.row(0) = sU - sV;
  out.push_back(affine(O, Eigen::VectorXd::Zero(1)));
  return out;
}

// tanh'' at c is maximal in modulus at c = artanh(1/sqrt 3).
const double kTanhCenter = std::atanh(1.0 / std::sqrt(3.0));

double tanh_second(double c) {
  const double t = std::tanh(c);
  return -2.0 * t * (1.0 - t * t);
}

// Central-difference multiply: u^2 ~ (T(c+tau u) + T(c-tau u) - 2T(c)) / (T''(c) tau^2);
// the 2T(c) terms cancel in u^2 - v^2.
Layers tanh_pair(double tau) {
  const double c = kTanhCenter;
  const double h = 0.5 * tau;
  Eigen::MatrixXd W(4, 2);
  W << h, h, -h, -h, h, -h, -h, h;
  Eigen::VectorXd b = Eigen::VectorXd::Constant(4, c);
  const double k = 1.0 / (tanh_second(c) * tau * tau);
  Eigen::MatrixXd O(1, 4);
  O << k, k, -k, -k;
  return {affine(W, b), affine(O, Eigen::VectorXd::Zero(1))};
}

// Sup over |u| <= 1.02 of the tanh square error range (max e - min e).
double tanh_square_error(double tau) {
  const double c = kTanhCenter;
  const double k = 1.0 / (tanh_second(c) * tau * tau);
  double lo = 0.0, hi = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double u = -1.02 + 2.04 * i / 400.0;
    const double e = (std::tanh(c + tau * u) + std::tanh(c - tau * u) - 2.0 * std::tanh(c)) * k - u * u;
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  return hi - lo;
}

double choose_tanh_scale(double eps) {
  double tau = std::sqrt(eps / 0.34);
  for (int i = 0; i < 200 && tau > 1e-9; ++i) {
    if (tanh_square_error(tau) <= eps) return tau;
    tau *= 0.8;
  }
  throw Error(ErrorKind::BuildRejected,
              "tanh multiply cannot reach per-node accuracy " + std::to_string(eps));
}

int choose_relu_levels(double eps) {
  // 2^{-2s-1} <= eps.
  int s = std::max(1, static_cast<int>(std::ceil((std::log2(1.0 / eps) - 1.0) / 2.0)));
  require(s <= 60, ErrorKind::BuildRejected, "ReLU multiply needs more than 60 squaring levels");
  return s;
}

// Binary product tree on n_pad = 2^k inputs from a two-input multiplier.
Layers product_tree(const Layers& pair, std::size_t n_pad) {
  Layers net;
  bool first = true;
  for (std::size_t width = n_pad; width > 1; width /= 2) {
    Layers level = blockdiag(std::vector<Layers>(width / 2, pair));
    net = first ? level : compose_layers(level, net);
    first = false;
  }
  return net;
}

std::size_t next_pow2(std::size_t n) { return std::bit_ceil(std::max<std::size_t>(n, 1)); }

struct ProductPlan {
  Layers layers;
  int relu_levels = 0;
  double tanh_scale = 0.0;
};

// Product of the n entries of (W x + b), each bounded by bounds[i] in
// modulus. Exact for RePU (bounds ignored).
ProductPlan product_of_affine(const Activation& act, const Eigen::MatrixXd& W,
                              const Eigen::VectorXd& b, const std::vector<double>& bounds,
                              double delta) {
  const auto n = static_cast<std::size_t>(W.rows());
  ProductPlan plan;
  if (n == 0) {
    plan.layers = {affine(Eigen::MatrixXd::Zero(1, W.cols()), Eigen::VectorXd::Ones(1))};
    return plan;
  }
  if (n == 1) {
    plan.layers = {affine(W, b)};
    return plan;
  }
  const std::size_t n_pad = next_pow2(n);
  const bool exact = act.kind == ActivationKind::RePU;
  double M = 1.0;
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_pad), W.cols());
  Eigen::VectorXd q = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n_pad));
  for (std::size_t i = 0; i < n; ++i) {
    const double s = exact ? 1.0 : 1.0 / bounds[i];
    if (!exact) M *= bounds[i];
    P.row(static_cast<Eigen::Index>(i)) = W.row(static_cast<Eigen::Index>(i)) * s;
    q[static_cast<Eigen::Index>(i)] = b[static_cast<Eigen::Index>(i)] * s;
  }
  Layers pair;
  if (exact) {
    pair = repu_pair(act.power);
  } else {
    const double eps = delta / (M * static_cast<double>(n_pad));
    if (act.kind == ActivationKind::ReLU) {
      plan.relu_levels = choose_relu_levels(eps);
      pair = relu_pair(plan.relu_levels);
    } else {
      plan.tanh_scale = choose_tanh_scale(eps);
      pair = tanh_pair(plan.tanh_scale);
    }
  }
  Layers tree = product_tree(pair, n_pad);
  plan.layers = compose_layers(tree, Layers{affine(P, q)});
  if (!exact) {
    plan.layers.back().weights *= M;
    plan.layers.back().bias *= M;
  }
  return plan;
}

std::vector<std::uint32_t> iota_theta(std::size_t n) {
  std::vector<std::uint32_t> t(n);
  std::iota(t.begin(), t.end(), 1u);
  return t;
}

}  // namespace

Network identity_network(const Activation& act, Eigen::Index dim, std::size_t depth) {
  const auto I = Eigen::MatrixXd::Identity(dim, dim);
  auto theta = iota_theta(static_cast<std::size_t>(dim));
  if (depth == 0) return Network(act, theta, {affine(I, Eigen::VectorXd::Zero(dim))});
  Layers layers;
  if (act.kind == ActivationKind::ReLU) {
    Eigen::MatrixXd first(2 * dim, dim);
    first << I, -I;
    Eigen::MatrixXd mid(2 * dim, 2 * dim);
    mid << I, -I, -I, I;
    Eigen::MatrixXd last(dim, 2 * dim);
    last << I, -I;
    layers.push_back(affine(first, Eigen::VectorXd::Zero(2 * dim)));
    for (std::size_t l = 1; l < depth; ++l) layers.push_back(affine(mid, Eigen::VectorXd::Zero(2 * dim)));
    layers.push_back(affine(last, Eigen::VectorXd::Zero(dim)));
    return Network(act, theta, layers);
  }
  Layers block;
  if (act.kind == ActivationKind::Tanh) {
    block = {affine(kTanhIdentityScale * I, Eigen::VectorXd::Zero(dim)),
             affine(I / kTanhIdentityScale, Eigen::VectorXd::Zero(dim))};
  } else {
    std::vector<Layers> parts;
    for (Eigen::Index i = 0; i < dim; ++i) {
      std::vector<Eigen::RowVectorXd> rows;
      std::vector<double> bias, out;
      Eigen::RowVectorXd w(1);
      w << 1.0;
      add_power_form(act.power, 1, w, 1.0, rows, bias, out);
      parts.push_back(from_rows(rows, bias, out, 1));
    }
    block = blockdiag(parts);
  }
  layers = block;
  for (std::size_t l = 1; l < depth; ++l) layers = compose_layers(block, layers);
  return Network(act, theta, layers);
}

Network build_product_repu(int ell, std::size_t n_factors) {
  require(ell >= 2, ErrorKind::InvalidArgument, "RePU product needs ell >= 2");
  require(n_factors >= 1, ErrorKind::InvalidArgument, "product needs at least one factor");
  const auto n = static_cast<Eigen::Index>(n_factors);
  ProductPlan plan = product_of_affine(Activation::repu(ell), Eigen::MatrixXd::Identity(n, n),
                                       Eigen::VectorXd::Zero(n), {}, 0.0);
  return Network(Activation::repu(ell), iota_theta(n_factors), plan.layers);
}

Network build_product_approx(const Activation& act, const std::vector<double>& bounds,
                             double delta) {
  require(act.kind != ActivationKind::RePU, ErrorKind::InvalidArgument,
          "approximate products are for ReLU and tanh");
  require(delta > 0.0 && delta < 1.0, ErrorKind::InvalidArgument, "delta must lie in (0,1)");
  require(!bounds.empty(), ErrorKind::InvalidArgument, "product needs at least one factor");
  for (double b : bounds) require(b > 0.0, ErrorKind::InvalidArgument, "bounds must be positive");
  const auto n = static_cast<Eigen::Index>(bounds.size());
  ProductPlan plan = product_of_affine(act, Eigen::MatrixXd::Identity(n, n),
                                       Eigen::VectorXd::Zero(n), bounds, delta);
  return Network(act, iota_theta(bounds.size()), plan.layers);
}

EmulationCertificate certify_emulation(const Network& net, Family family, const MultiIndex& nu,
                                       double delta) {
  EmulationCertificate cert;
  cert.delta = delta;
  cert.active_dims = nu.support();
  const std::size_t a = cert.active_dims.size();
  const std::uint32_t width = std::max<std::uint32_t>(
      nu.max_dim(), net.theta.empty() ? 0u : *std::max_element(net.theta.begin(), net.theta.end()));
  Eigen::MatrixXd pts;
  if (a <= 4) {
    const std::size_t P = a == 0 ? 1 : a <= 2 ? 201 : a == 3 ? 41 : 21;
    cert.points_per_dim = P;
    std::size_t total = 1;
    for (std::size_t i = 0; i < a; ++i) total *= P;
    pts = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(total), width);
    for (std::size_t r = 0; r < total; ++r) {
      std::size_t idx = r;
      for (std::size_t i = 0; i < a; ++i) {
        const double y = P == 1 ? 0.0 : -1.0 + 2.0 * static_cast<double>(idx % P) / static_cast<double>(P - 1);
        pts(static_cast<Eigen::Index>(r), cert.active_dims[i] - 1) = y;
        idx /= P;
      }
    }
  } else {
    cert.sampled = true;
    const std::size_t total = 100000;
    pts = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(total), width);
    CounterRng rng(0x5eed0000u + std::hash<std::string>{}(nu.to_string()));
    for (std::size_t r = 0; r < total; ++r)
      for (auto d : cert.active_dims) pts(static_cast<Eigen::Index>(r), d - 1) = rng.uniform(-1.0, 1.0);
  }
  cert.evaluations = static_cast<std::size_t>(pts.rows());
  const Eigen::MatrixXd out = net.forward_body_batch(pts);
  std::vector<double> y(width);
  for (Eigen::Index r = 0; r < pts.rows(); ++r) {
    for (std::uint32_t j = 0; j < width; ++j) y[j] = pts(r, j);
    const double exact = eval_tensor(family, nu, y);
    cert.grid_error = std::max(cert.grid_error, std::abs(out(r, 0) - exact));
  }
  if (net.activation.kind == ActivationKind::RePU)
    cert.certified = cert.grid_error <= 1e-9 * intrinsic_weight(family, nu);
  else
    cert.certified = cert.grid_error <= delta;
  return cert;
}

PolyNetwork build_poly_network(Family family, const MultiIndex& nu, double delta,
                               const std::vector<std::uint32_t>& theta, const Activation& act) {
  const bool exact = act.kind == ActivationKind::RePU;
  if (!exact)
    require(delta > 0.0 && delta < 1.0, ErrorKind::InvalidArgument, "delta must lie in (0,1)");
  std::vector<Eigen::Index> col(nu.max_dim() + 1, -1);
  for (std::size_t i = 0; i < theta.size(); ++i)
    if (theta[i] <= nu.max_dim()) col[theta[i]] = static_cast<Eigen::Index>(i);
  for (auto d : nu.support())
    require(col[d] >= 0, ErrorKind::InvalidArgument,
            "supp(nu) is not contained in theta for nu = " + nu.to_string());

  // Factor map rows: scale (y_j - r) for every root, outer roots interleaved
  // with inner ones to keep partial products moderate.
  const auto nf = static_cast<Eigen::Index>(nu.l1());
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(nf, static_cast<Eigen::Index>(theta.size()));
  Eigen::VectorXd b(nf);
  std::vector<double> bounds;
  double M = 1.0;
  Eigen::Index row = 0;
  for (const auto& [dim, val] : nu.entries()) {
    const RootFactorization rf = roots_and_scale(family, val);
    std::vector<double> order;
    for (std::size_t lo = 0, hi = rf.roots.size(); lo < hi;) {
      order.push_back(rf.roots[lo++]);
      if (lo < hi) order.push_back(rf.roots[--hi]);
    }
    for (double r : order) {
      W(row, col[dim]) = rf.scale;
      b[row] = -rf.scale * r;
      bounds.push_back(2.0 * rf.scale);
      M *= 2.0 * rf.scale;
      ++row;
    }
  }

  PolyNetwork result;
  double budget = delta;
  for (int attempt = 0; attempt < 4; ++attempt) {
    ProductPlan plan = product_of_affine(act, W, b, bounds, budget);
    result.net = Network(act, theta, plan.layers);
    result.certificate = certify_emulation(result.net, family, nu, exact ? 0.0 : delta);
    result.certificate.retries = attempt;
    result.certificate.relu_levels = plan.relu_levels;
    result.certificate.tanh_scale = plan.tanh_scale;
    result.certificate.product_bound = exact ? 0.0 : M;
    if (result.certificate.certified) return result;
    budget *= 0.25;
  }
  throw Error(ErrorKind::BuildRejected,
              "emulator of " + nu.to_string() + " failed certification: error " +
                  std::to_string(result.certificate.grid_error));
}

Network compose(const Network& outer, const Network& inner) {
  require(outer.activation == inner.activation, ErrorKind::InvalidArgument,
          "cannot compose networks with different activations");
  return Network(inner.activation, inner.theta, compose_layers(outer.layers, inner.layers));
}

Network stack_networks(const std::vector<Network>& nets) {
  require(!nets.empty(), ErrorKind::InvalidArgument, "nothing to stack");
  std::size_t depth = 0;
  for (const auto& n : nets) {
    require(n.activation == nets.front().activation, ErrorKind::InvalidArgument,
            "cannot stack networks with mixed activations");
    require(n.theta == nets.front().theta, ErrorKind::InvalidArgument,
            "cannot stack networks with different theta");
    require(!n.head, ErrorKind::InvalidArgument, "cannot stack networks with heads");
    depth = std::max(depth, n.depth());
  }
  std::vector<Layers> parts;
  for (const auto& n : nets) {
    if (n.depth() == depth) {
      parts.push_back(n.layers);
    } else {
      const Network pad = identity_network(n.activation, n.input_dim(), depth - n.depth());
      parts.push_back(compose_layers(n.layers, pad.layers));
    }
  }
  // Layers are stored dense, so the block-diagonal stack costs
  // sum_l (sum_i out_il)(sum_i in_il) doubles.
  double entries = 0.0;
  for (std::size_t l = 0; l < depth; ++l) {
    double rows = 0.0, cols = 0.0;
    for (const auto& p : parts) {
      rows += static_cast<double>(p[l].out_dim());
      cols += static_cast<double>(p[l].in_dim());
    }
    entries += rows * (l == 0 ? static_cast<double>(parts.front()[0].in_dim()) : cols);
  }
  require(entries <= kMaxStackedEntries, ErrorKind::CostGuard,
          "stacked network would hold " + std::to_string(static_cast<long long>(entries)) +
              " dense weights; lower the index-set budget or use RePU");
  return Network(nets.front().activation, nets.front().theta, vstack(parts));
}

Network attach_head(Network net, const Eigen::MatrixXd& Z) {
  require(Z.rows() == net.body_output_dim(), ErrorKind::DimensionMismatch,
          "head rows differ from network outputs");
  net.head = Z;
  return net;
}

}  // namespace holo
