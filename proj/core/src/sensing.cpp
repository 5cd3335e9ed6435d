#include "holobench/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/SVD>

#include "holobench/error.hpp"
#include "holobench/parallel.hpp"
#include "holobench/rng.hpp"

namespace holo {

MeasurementMatrix assemble_exact(const PointSet& points, const IndexSet& index_set,
                                 Family family) {
  require(points.rows() >= 1, ErrorKind::InvalidArgument, "no sample points");
  require(index_set.max_dim() <= static_cast<std::uint32_t>(points.cols()),
          ErrorKind::DimensionMismatch, "index set uses coordinates the points lack");
  const Eigen::Index m = points.rows();
  const auto N = static_cast<Eigen::Index>(index_set.size());
  const std::uint32_t deg = static_cast<std::uint32_t>(
      std::max<std::uint64_t>(index_set.max_l1(), 0));
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));

  MeasurementMatrix out;
  out.entries.resize(m, N);
  out.family = family;
  out.index_set = index_set;
  const auto d = static_cast<std::size_t>(points.cols());
  parallel_for(static_cast<std::size_t>(m), [&](std::size_t i) {
    // Univariate tables per coordinate, then tensor products.
    std::vector<double> table(d * (deg + 1));
    for (std::size_t j = 0; j < d; ++j)
      eval_univariate_all(family, deg, points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)),
                          std::span<double>(table.data() + j * (deg + 1), deg + 1));
    for (Eigen::Index c = 0; c < N; ++c) {
      double v = 1.0;
      for (const auto& [dim, val] : index_set[static_cast<std::size_t>(c)].entries())
        v *= table[(dim - 1) * (deg + 1) + val];
      out.entries(static_cast<Eigen::Index>(i), c) = v * scale;
    }
  });
  return out;
}

MeasurementMatrix assemble_emulated(const Network& stacked, const PointSet& points,
                                    const IndexSet& index_set, Family family, double delta) {
  require(stacked.body_output_dim() == static_cast<Eigen::Index>(index_set.size()),
          ErrorKind::DimensionMismatch, "network outputs differ from |Lambda|");
  require(delta >= 0.0, ErrorKind::InvalidArgument, "delta must be nonnegative");
  MeasurementMatrix exact = assemble_exact(points, index_set, family);
  const double scale = 1.0 / std::sqrt(static_cast<double>(points.rows()));

  MeasurementMatrix out;
  out.entries = stacked.forward_body_batch(points) * scale;
  out.provenance = MatrixProvenance::NetworkEmulated;
  out.family = family;
  out.index_set = index_set;
  out.delta = delta;
  out.emulation_gap = spectral_norm(exact.entries - out.entries);
  out.gap_bound = std::sqrt(static_cast<double>(index_set.size())) * delta;
  const double slack = 1e-9 * std::max(1.0, exact.entries.norm());
  require(out.emulation_gap <= out.gap_bound + slack, ErrorKind::BuildRejected,
          "emulated matrix violates ||A - A'||_2 <= sqrt(N) delta: gap " +
              std::to_string(out.emulation_gap) + " > " + std::to_string(out.gap_bound));
  return out;
}

Eigen::MatrixXd apply_block(const Eigen::MatrixXd& A, const Eigen::MatrixXd& X) {
  require(A.cols() == X.rows(), ErrorKind::DimensionMismatch,
          "matrix columns differ from block count");
  return A * X;
}

double spectral_norm(const Eigen::MatrixXd& A, int max_iters, double tol) {
  if (A.size() == 0) return 0.0;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(A.cols()) / std::sqrt(static_cast<double>(A.cols()));
  // Nudge away from special directions deterministically.
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] *= 1.0 + 0.01 * std::sin(1.0 + static_cast<double>(i));
  v.normalize();
  double sigma = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Eigen::VectorXd w = A.transpose() * (A * v);
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    const double next = std::sqrt(nw);
    v = w / nw;
    if (std::abs(next - sigma) <= tol * next) {
      sigma = next;
      break;
    }
    sigma = next;
  }
  return sigma;
}

DataVector synthesize_data(const VectorFunction& f, const PointSet& points,
                           const DiscreteSpace& space, double eta, std::uint64_t seed) {
  require(eta >= 0.0, ErrorKind::InvalidArgument, "noise level must be nonnegative");
  const Eigen::Index m = points.rows();
  const Eigen::Index K = space.dim();
  DataVector out;
  Eigen::MatrixXd clean(m, K);
  parallel_for(static_cast<std::size_t>(m), [&](std::size_t i) {
    const auto row = static_cast<Eigen::Index>(i);
    std::vector<double> y(points.cols());
    for (Eigen::Index j = 0; j < points.cols(); ++j) y[static_cast<std::size_t>(j)] = points(row, j);
    Eigen::VectorXd v = f(y);
    require(v.size() == K, ErrorKind::DimensionMismatch, "f returns a block of the wrong length");
    clean.row(row) = v.transpose();
  });
  out.noise = Eigen::MatrixXd::Zero(m, K);
  if (eta > 0.0) {
    CounterRng rng(seed);
    for (Eigen::Index i = 0; i < m; ++i) {
      Eigen::VectorXd n(K);
      double nn = 0.0;
      while (nn == 0.0) {
        for (Eigen::Index k = 0; k < K; ++k) n[k] = rng.normal();
        nn = space.norm(n);
      }
      out.noise.row(i) = (n * (eta / nn)).transpose();
    }
    double s = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double ni = space.norm(out.noise.row(i).transpose());
      s += ni * ni;
    }
    out.e_samp = std::sqrt(s / static_cast<double>(m));
  }
  out.values = (clean + out.noise) / std::sqrt(static_cast<double>(m));
  return out;
}

namespace {

// Weighted cardinality budget test, tolerant of summation order.
bool exceeds(double cost, double k) { return cost > k * (1.0 + 1e-12); }

double support_deviation(const Eigen::MatrixXd& A, const std::vector<Eigen::Index>& cols) {
  Eigen::MatrixXd sub(A.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = A.col(cols[c]);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub);
  const auto& s = svd.singularValues();
  const double smax = s[0];
  // When the support is wider than A is tall, the smallest singular value is 0.
  const double smin = sub.cols() > sub.rows() ? 0.0 : s[s.size() - 1];
  return std::max(smax * smax - 1.0, 1.0 - smin * smin);
}

}  // namespace

RipEstimate estimate_rip_constant(const Eigen::MatrixXd& A, double k,
                                  const Eigen::VectorXd& weights, std::size_t trials,
                                  std::uint64_t seed) {
  require(trials >= 1, ErrorKind::InvalidArgument, "need at least one trial");
  require(weights.size() == A.cols(), ErrorKind::DimensionMismatch,
          "weights and columns are not aligned");
  RipEstimate out;
  if (A.cols() == 0 || k < weights.array().square().minCoeff()) {
    out.empty_sparsity = true;
    return out;
  }
  CounterRng base(seed);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(A.cols()));
  for (std::size_t t = 0; t < trials; ++t) {
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    CounterRng rng = base.split(t);
    rng.shuffle(std::span<Eigen::Index>(order));
    std::vector<Eigen::Index> support;
    double cost = 0.0;
    for (auto c : order) {
      const double wc = weights[c] * weights[c];
      if (exceeds(cost + wc, k)) break;
      cost += wc;
      support.push_back(c);
    }
    if (support.empty()) continue;
    ++out.supports_tried;
    out.max_support = std::max(out.max_support, support.size());
    out.delta_hat = std::max(out.delta_hat, support_deviation(A, support));
  }
  return out;
}

double exact_rip_constant(const Eigen::MatrixXd& A, double k, const Eigen::VectorXd& weights) {
  require(A.cols() <= 12, ErrorKind::OracleScaleExceeded, "exact RIP limited to 12 columns");
  require(weights.size() == A.cols(), ErrorKind::DimensionMismatch,
          "weights and columns are not aligned");
  double best = 0.0;
  const auto N = static_cast<std::uint32_t>(A.cols());
  for (std::uint32_t mask = 1; mask < (1u << N); ++mask) {
    std::vector<Eigen::Index> cols;
    double cost = 0.0;
    for (std::uint32_t j = 0; j < N; ++j)
      if (mask & (1u << j)) {
        cols.push_back(j);
        cost += weights[j] * weights[j];
      }
    if (exceeds(cost, k)) continue;
    best = std::max(best, support_deviation(A, cols));
  }
  return best;
}

FullCaseStability full_case_stability(const Eigen::MatrixXd& A) {
  require(A.rows() >= A.cols(), ErrorKind::Underdetermined,
          "full-case stability needs m >= N");
  require(A.cols() >= 1, ErrorKind::InvalidArgument, "empty matrix");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  FullCaseStability out;
  out.sigma_min = svd.singularValues()[A.cols() - 1];
  out.gamma_bound = out.sigma_min > 0.0 ? 1.0 / out.sigma_min
                                        : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace holo
