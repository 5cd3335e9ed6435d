#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace holo {

/// A finitely supported multi-index. Dimensions are 1-based; only nonzero
/// entries are stored, sorted by dimension.
class MultiIndex {
 public:
  using Entry = std::pair<std::uint32_t, std::uint32_t>;  // (dimension, value)

  MultiIndex() = default;
  /// From (dimension, value) pairs. Zero values are dropped; duplicate
  /// dimensions are rejected.
  explicit MultiIndex(std::vector<Entry> entries);
  /// From a dense vector: dense[0] is dimension 1.
  static MultiIndex from_dense(const std::vector<std::uint32_t>& dense);
  /// e_j.
  static MultiIndex unit(std::uint32_t j, std::uint32_t value = 1);

  std::uint32_t operator[](std::uint32_t dim) const;
  const std::vector<Entry>& entries() const noexcept { return entries_; }

  bool is_zero() const noexcept { return entries_.empty(); }
  /// ||nu||_0 = |supp(nu)|.
  std::size_t l0() const noexcept { return entries_.size(); }
  /// ||nu||_1.
  std::uint64_t l1() const noexcept;
  /// Largest dimension in the support, 0 for the zero index.
  std::uint32_t max_dim() const noexcept;
  std::vector<std::uint32_t> support() const;
  std::vector<std::uint32_t> dense(std::uint32_t n) const;

  /// Componentwise mu <= nu.
  bool leq(const MultiIndex& other) const noexcept;

  MultiIndex with(std::uint32_t dim, std::uint32_t value) const;

  bool operator==(const MultiIndex&) const = default;
  /// Graded order: by ||nu||_1, then by coordinates 1, 2, ... where the
  /// larger value at the first differing coordinate comes first (so e_1
  /// precedes e_2).
  std::strong_ordering operator<=>(const MultiIndex& other) const noexcept;

  /// `j1:v1 j2:v2 ...`, empty for the zero index.
  std::string to_string() const;
  static MultiIndex parse(const std::string& line);

 private:
  std::vector<Entry> entries_;
};

std::ostream& operator<<(std::ostream& os, const MultiIndex& nu);

/// Ordered set of distinct multi-indices in graded order.
class IndexSet {
 public:
  IndexSet() = default;
  /// Sorts and removes duplicates.
  explicit IndexSet(std::vector<MultiIndex> members);
  IndexSet(std::initializer_list<MultiIndex> members);

  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  const MultiIndex& operator[](std::size_t i) const { return members_[i]; }
  const std::vector<MultiIndex>& members() const noexcept { return members_; }
  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }

  bool contains(const MultiIndex& nu) const;
  /// Position in canonical order, or -1.
  std::ptrdiff_t position(const MultiIndex& nu) const;

  /// Largest dimension appearing in any member.
  std::uint32_t max_dim() const noexcept;
  /// m(Lambda) = max ||nu||_1.
  std::uint64_t max_l1() const noexcept;

  bool operator==(const IndexSet& other) const { return members_ == other.members_; }

  /// One member per line, `j1:v1 j2:v2 ...`; the zero index is an empty line.
  std::string serialize() const;
  static IndexSet deserialize(const std::string& text);

 private:
  void build_lookup();

  std::vector<MultiIndex> members_;
  std::map<MultiIndex, std::size_t> lookup_;
};

/// Hyperbolic cross { nu : prod_{nu_k != 0} (nu_k + 1) <= budget, nu_k = 0 for k > dims }.
/// dims defaults to budget; dims != budget is the decoupled (experimental) form.
IndexSet hci_index_set(std::uint32_t budget, std::uint32_t dims = 0);

/// Upper bound e * n^{2 + log(n)/log(2)} on |hci_index_set(n)|.
double hci_cardinality_bound(std::uint32_t n);

bool is_lower(const IndexSet& set);
bool is_anchored(const IndexSet& set);

/// Smallest lower set containing `set`.
IndexSet lower_closure(const IndexSet& set);
/// Smallest anchored set containing `set`.
IndexSet anchored_closure(const IndexSet& set);

/// Every nonempty anchored set of cardinality <= size_limit supported in
/// [dim_limit]. Oracle scale only: size_limit <= 8, dim_limit <= 6.
std::vector<IndexSet> enumerate_anchored_sets(std::uint32_t size_limit, std::uint32_t dim_limit);

/// Total-degree set { nu : ||nu||_1 <= degree } in `dims` dimensions.
IndexSet total_degree_set(std::uint32_t degree, std::uint32_t dims);

}  // namespace holo
