#include "holobench/banachspace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "holobench/error.hpp"

namespace holo {

std::string_view to_string(BlockNorm n) {
  switch (n) {
    case BlockNorm::L2: return "l2";
    case BlockNorm::L1: return "l1";
    case BlockNorm::LInf: return "linf";
  }
  return "l2";
}

BlockNorm parse_block_norm(std::string_view name) {
  if (name == "l2") return BlockNorm::L2;
  if (name == "l1") return BlockNorm::L1;
  if (name == "linf") return BlockNorm::LInf;
  throw Error(ErrorKind::InvalidArgument, "unknown block norm '" + std::string(name) + "'");
}

DiscreteSpace::DiscreteSpace(Eigen::Index K, BlockNorm norm) : K_(K), norm_(norm) {
  require(K >= 1, ErrorKind::InvalidArgument, "discrete space needs K >= 1");
}

DiscreteSpace::DiscreteSpace(Eigen::MatrixXd gram) : K_(gram.rows()), norm_(BlockNorm::L2) {
  require(gram.rows() >= 1 && gram.rows() == gram.cols(), ErrorKind::InvalidArgument,
          "Gram matrix must be square and nonempty");
  require((gram - gram.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * gram.cwiseAbs().maxCoeff(),
          ErrorKind::InvalidArgument, "Gram matrix must be symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  require(llt.info() == Eigen::Success, ErrorKind::InvalidArgument,
          "Gram matrix must be positive definite");
  llt_ = std::move(llt);
  gram_ = std::move(gram);
}

Eigen::MatrixXd DiscreteSpace::gram_factor() const {
  if (!llt_) return Eigen::MatrixXd::Identity(K_, K_);
  return llt_->matrixL();
}

double DiscreteSpace::norm(const Eigen::Ref<const Eigen::VectorXd>& block) const {
  require(block.size() == K_, ErrorKind::DimensionMismatch, "block length differs from K");
  switch (norm_) {
    case BlockNorm::L2:
      if (gram_) return std::sqrt(std::max(0.0, block.dot(*gram_ * block)));
      return block.norm();
    case BlockNorm::L1: return block.lpNorm<1>();
    case BlockNorm::LInf: return block.lpNorm<Eigen::Infinity>();
  }
  return 0.0;
}

Eigen::VectorXd DiscreteSpace::row_norms(const Eigen::Ref<const Eigen::MatrixXd>& blocks) const {
  require(blocks.cols() == K_, ErrorKind::DimensionMismatch, "block length differs from K");
  Eigen::VectorXd out(blocks.rows());
  for (Eigen::Index i = 0; i < blocks.rows(); ++i) out[i] = norm(blocks.row(i).transpose());
  return out;
}

BlockVector::BlockVector(IndexSet set, Eigen::MatrixXd b)
    : index_set(std::move(set)), blocks(std::move(b)) {
  require(static_cast<std::size_t>(blocks.rows()) == index_set.size(),
          ErrorKind::DimensionMismatch, "block count differs from index set size");
}

WeightVector::WeightVector(IndexSet set, Eigen::VectorXd w)
    : index_set(std::move(set)), values(std::move(w)) {
  require(static_cast<std::size_t>(values.size()) == index_set.size(),
          ErrorKind::DimensionMismatch, "weight count differs from index set size");
  require((values.array() > 0.0).all(), ErrorKind::InvalidArgument, "weights must be positive");
}

WeightVector WeightVector::ones(const IndexSet& set) {
  return WeightVector(set, Eigen::VectorXd::Ones(static_cast<Eigen::Index>(set.size())));
}

WeightVector WeightVector::intrinsic(Family family, const IndexSet& set) {
  return WeightVector(set, intrinsic_weights(family, set));
}

double WeightVector::at(const MultiIndex& nu) const {
  const auto pos = index_set.position(nu);
  require(pos >= 0, ErrorKind::InvalidArgument, "no weight defined for multi-index " + nu.to_string());
  return values[pos];
}

double block_norm(const DiscreteSpace& space, const Eigen::Ref<const Eigen::VectorXd>& block) {
  return space.norm(block);
}

double weighted_lpw_norm(const Eigen::Ref<const Eigen::VectorXd>& block_norms,
                         const Eigen::Ref<const Eigen::VectorXd>& w, double p) {
  require(p > 0.0 && p <= 2.0, ErrorKind::InvalidArgument, "p must lie in (0, 2]");
  require(block_norms.size() == w.size(), ErrorKind::DimensionMismatch,
          "weights and blocks are not aligned");
  double s = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i)
    s += std::pow(w[i], 2.0 - p) * std::pow(block_norms[i], p);
  return std::pow(s, 1.0 / p);
}

double weighted_lpw_norm(const BlockVector& v, const DiscreteSpace& space, double p,
                         const WeightVector& w) {
  require(v.index_set == w.index_set, ErrorKind::DimensionMismatch,
          "weights and blocks use different index sets");
  return weighted_lpw_norm(space.row_norms(v.blocks), w.values, p);
}

double weighted_cardinality(const IndexSet& S, const WeightVector& w) {
  double s = 0.0;
  for (const auto& nu : S) {
    const double wn = w.at(nu);
    s += wn * wn;
  }
  return s;
}

double weighted_cardinality(const IndexSet& S, Family family) {
  double s = 0.0;
  for (const auto& nu : S) {
    const double wn = intrinsic_weight(family, nu);
    s += wn * wn;
  }
  return s;
}

namespace {

constexpr std::size_t kExactLimit = 20;

struct Item {
  std::size_t pos;
  double gain;  // w^{2-p} ||v||^p
  double cost;  // w^2
};

}  // namespace

BestTermResult best_kterm(const Eigen::Ref<const Eigen::VectorXd>& block_norms,
                          const Eigen::Ref<const Eigen::VectorXd>& w, double k, double p) {
  require(p > 0.0 && p <= 2.0, ErrorKind::InvalidArgument, "p must lie in (0, 2]");
  require(k >= 0.0, ErrorKind::InvalidArgument, "k must be nonnegative");
  require(block_norms.size() == w.size(), ErrorKind::DimensionMismatch,
          "weights and blocks are not aligned");

  std::vector<Item> items;
  double total = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const double gain = std::pow(w[i], 2.0 - p) * std::pow(block_norms[i], p);
    total += gain;
    if (gain > 0.0) items.push_back({static_cast<std::size_t>(i), gain, w[i] * w[i]});
  }

  BestTermResult result;
  double best_gain = 0.0;
  if (items.size() <= kExactLimit) {
    // Include-first depth-first search in canonical order; only strict
    // improvements replace the incumbent, so ties keep earlier indices.
    std::vector<double> suffix(items.size() + 1, 0.0);
    for (std::size_t i = items.size(); i-- > 0;) suffix[i] = suffix[i + 1] + items[i].gain;
    std::vector<std::size_t> current;
    auto dfs = [&](auto&& self, std::size_t i, double gain, double cost) -> void {
      if (gain > best_gain) {
        best_gain = gain;
        result.support = current;
      }
      if (i == items.size() || gain + suffix[i] <= best_gain) return;
      if (cost + items[i].cost <= k) {
        current.push_back(items[i].pos);
        self(self, i + 1, gain + items[i].gain, cost + items[i].cost);
        current.pop_back();
      }
      self(self, i + 1, gain, cost);
    };
    dfs(dfs, 0, 0.0, 0.0);
  } else {
    result.greedy = true;
    std::vector<std::size_t> order(items.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return items[a].gain / items[a].cost > items[b].gain / items[b].cost;
    });
    double cost = 0.0;
    for (auto idx : order) {
      if (cost + items[idx].cost > k) continue;
      cost += items[idx].cost;
      best_gain += items[idx].gain;
      result.support.push_back(items[idx].pos);
    }
    std::sort(result.support.begin(), result.support.end());
  }
  // Sum the complement directly rather than total - best_gain to avoid
  // cancellation.
  std::vector<bool> in(static_cast<std::size_t>(w.size()), false);
  for (auto s : result.support) in[s] = true;
  double rest = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (!in[static_cast<std::size_t>(i)])
      rest += std::pow(w[i], 2.0 - p) * std::pow(block_norms[i], p);
  (void)total;
  result.residual = std::pow(rest, 1.0 / p);
  return result;
}

BestTermResult best_kterm(const BlockVector& v, const DiscreteSpace& space, double k,
                          const WeightVector& w, double p) {
  require(v.index_set == w.index_set, ErrorKind::DimensionMismatch,
          "weights and blocks use different index sets");
  return best_kterm(space.row_norms(v.blocks), w.values, k, p);
}

std::vector<double> monotone_majorant(const std::vector<double>& b) {
  require(!b.empty(), ErrorKind::InvalidArgument, "majorant of an empty sequence");
  std::vector<double> out(b.size());
  double run = 0.0;
  for (std::size_t i = b.size(); i-- > 0;) {
    run = std::max(run, std::abs(b[i]));
    out[i] = run;
  }
  return out;
}

}  // namespace holo
