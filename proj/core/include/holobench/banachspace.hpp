#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Cholesky>

#include "holobench/multiindex.hpp"
#include "holobench/polybasis.hpp"

namespace holo {

enum class BlockNorm { L2, L1, LInf };

std::string_view to_string(BlockNorm n);
BlockNorm parse_block_norm(std::string_view name);

/// The discretised codomain V_K: K coefficients per block and the norm
/// ||.||_V on them. With a Gram matrix G the l2 norm is sqrt(v^T G v).
class DiscreteSpace {
 public:
  explicit DiscreteSpace(Eigen::Index K = 1, BlockNorm norm = BlockNorm::L2);
  /// l2 norm in the Gram inner product. Throws unless G is SPD.
  DiscreteSpace(Eigen::MatrixXd gram);

  Eigen::Index dim() const noexcept { return K_; }
  BlockNorm norm_kind() const noexcept { return norm_; }
  bool is_hilbert() const noexcept { return norm_ == BlockNorm::L2; }
  const std::optional<Eigen::MatrixXd>& gram() const noexcept { return gram_; }
  /// Lower Cholesky factor L (G = L L^T); identity when there is no Gram matrix.
  Eigen::MatrixXd gram_factor() const;

  double norm(const Eigen::Ref<const Eigen::VectorXd>& block) const;
  /// Row-wise norms of an (n x K) matrix of blocks.
  Eigen::VectorXd row_norms(const Eigen::Ref<const Eigen::MatrixXd>& blocks) const;

 private:
  Eigen::Index K_;
  BlockNorm norm_;
  std::optional<Eigen::MatrixXd> gram_;
  std::optional<Eigen::LLT<Eigen::MatrixXd>> llt_;
};

/// V-valued vector: one K-coefficient block per member of the index set
/// (row j of `blocks` belongs to index_set[j]).
struct BlockVector {
  IndexSet index_set;
  Eigen::MatrixXd blocks;  // N x K

  BlockVector() = default;
  BlockVector(IndexSet set, Eigen::MatrixXd b);

  std::size_t size() const noexcept { return index_set.size(); }
};

/// Positive per-index weights aligned with an index set.
struct WeightVector {
  IndexSet index_set;
  Eigen::VectorXd values;

  WeightVector() = default;
  WeightVector(IndexSet set, Eigen::VectorXd w);
  static WeightVector ones(const IndexSet& set);
  static WeightVector intrinsic(Family family, const IndexSet& set);

  /// Weight of nu; throws InvalidArgument when nu is not in the index set.
  double at(const MultiIndex& nu) const;
};

double block_norm(const DiscreteSpace& space, const Eigen::Ref<const Eigen::VectorXd>& block);

/// (sum_nu w_nu^{2-p} ||v_nu||_V^p)^{1/p} for p in (0, 2].
double weighted_lpw_norm(const Eigen::Ref<const Eigen::VectorXd>& block_norms,
                         const Eigen::Ref<const Eigen::VectorXd>& w, double p);
double weighted_lpw_norm(const BlockVector& v, const DiscreteSpace& space, double p,
                         const WeightVector& w);

/// |S|_w = sum_{nu in S} w_nu^2.
double weighted_cardinality(const IndexSet& S, const WeightVector& w);
double weighted_cardinality(const IndexSet& S, Family family);

struct BestTermResult {
  std::vector<std::size_t> support;  // positions into the index set, ascending
  double residual = 0.0;             // sigma_k(v)_{p,w;V}
  bool greedy = false;
};

/// Weighted best (k,w)-term approximation: S with |S|_w <= k minimising
/// ||v - v_S||_{p,w;V}. Exact subset search up to 20 nonzero blocks,
/// ratio-greedy beyond (flagged).
BestTermResult best_kterm(const Eigen::Ref<const Eigen::VectorXd>& block_norms,
                          const Eigen::Ref<const Eigen::VectorXd>& w, double k, double p);
BestTermResult best_kterm(const BlockVector& v, const DiscreteSpace& space, double k,
                          const WeightVector& w, double p);

/// Right-to-left running max of |b|.
std::vector<double> monotone_majorant(const std::vector<double>& b);

}  // namespace holo
