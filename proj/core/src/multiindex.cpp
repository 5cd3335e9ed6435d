#include "holobench/multiindex.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include "holobench/error.hpp"

namespace holo {

MultiIndex::MultiIndex(std::vector<Entry> entries) {
  std::erase_if(entries, [](const Entry& e) { return e.second == 0; });
  std::sort(entries.begin(), entries.end());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    require(entries[i].first >= 1, ErrorKind::InvalidArgument,
            "multi-index dimensions are 1-based");
    require(i == 0 || entries[i].first != entries[i - 1].first, ErrorKind::InvalidArgument,
            "duplicate dimension in multi-index");
  }
  entries_ = std::move(entries);
}

MultiIndex MultiIndex::from_dense(const std::vector<std::uint32_t>& dense) {
  std::vector<Entry> entries;
  for (std::size_t j = 0; j < dense.size(); ++j)
    if (dense[j] != 0) entries.emplace_back(static_cast<std::uint32_t>(j + 1), dense[j]);
  return MultiIndex(std::move(entries));
}

MultiIndex MultiIndex::unit(std::uint32_t j, std::uint32_t value) {
  return MultiIndex({{j, value}});
}

std::uint32_t MultiIndex::operator[](std::uint32_t dim) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), dim,
                             [](const Entry& e, std::uint32_t d) { return e.first < d; });
  return (it != entries_.end() && it->first == dim) ? it->second : 0;
}

std::uint64_t MultiIndex::l1() const noexcept {
  std::uint64_t s = 0;
  for (const auto& [d, v] : entries_) s += v;
  return s;
}

std::uint32_t MultiIndex::max_dim() const noexcept {
  return entries_.empty() ? 0 : entries_.back().first;
}

std::vector<std::uint32_t> MultiIndex::support() const {
  std::vector<std::uint32_t> s;
  s.reserve(entries_.size());
  for (const auto& [d, v] : entries_) s.push_back(d);
  return s;
}

std::vector<std::uint32_t> MultiIndex::dense(std::uint32_t n) const {
  require(max_dim() <= n, ErrorKind::DimensionMismatch, "support exceeds requested length");
  std::vector<std::uint32_t> out(n, 0);
  for (const auto& [d, v] : entries_) out[d - 1] = v;
  return out;
}

bool MultiIndex::leq(const MultiIndex& other) const noexcept {
  for (const auto& [d, v] : entries_)
    if (v > other[d]) return false;
  return true;
}

MultiIndex MultiIndex::with(std::uint32_t dim, std::uint32_t value) const {
  std::vector<Entry> e;
  e.reserve(entries_.size() + 1);
  for (const auto& entry : entries_)
    if (entry.first != dim) e.push_back(entry);
  e.emplace_back(dim, value);
  return MultiIndex(std::move(e));
}

std::strong_ordering MultiIndex::operator<=>(const MultiIndex& other) const noexcept {
  if (auto c = l1() <=> other.l1(); c != 0) return c;
  // Walk the union of supports in increasing dimension.
  std::size_t i = 0, j = 0;
  while (i < entries_.size() || j < other.entries_.size()) {
    const std::uint32_t di = i < entries_.size() ? entries_[i].first : UINT32_MAX;
    const std::uint32_t dj = j < other.entries_.size() ? other.entries_[j].first : UINT32_MAX;
    const std::uint32_t d = std::min(di, dj);
    const std::uint32_t a = di == d ? entries_[i].second : 0;
    const std::uint32_t b = dj == d ? other.entries_[j].second : 0;
    if (a != b) return b <=> a;  // larger value first
    if (di == d) ++i;
    if (dj == d) ++j;
  }
  return std::strong_ordering::equal;
}

std::string MultiIndex::to_string() const {
  std::string s;
  for (const auto& [d, v] : entries_) {
    if (!s.empty()) s += ' ';
    s += std::to_string(d) + ':' + std::to_string(v);
  }
  return s;
}

MultiIndex MultiIndex::parse(const std::string& line) {
  std::istringstream in(line);
  std::string tok;
  std::vector<Entry> entries;
  while (in >> tok) {
    const auto colon = tok.find(':');
    require(colon != std::string::npos, ErrorKind::InvalidArgument,
            "malformed multi-index token '" + tok + "'");
    try {
      const auto d = std::stoul(tok.substr(0, colon));
      const auto v = std::stoul(tok.substr(colon + 1));
      require(v > 0, ErrorKind::InvalidArgument, "stored entries must be positive");
      entries.emplace_back(static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(v));
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::InvalidArgument, "malformed multi-index token '" + tok + "'");
    }
  }
  return MultiIndex(std::move(entries));
}

std::ostream& operator<<(std::ostream& os, const MultiIndex& nu) {
  return os << '(' << nu.to_string() << ')';
}

// ---------------------------------------------------------------------------

IndexSet::IndexSet(std::vector<MultiIndex> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  build_lookup();
}

IndexSet::IndexSet(std::initializer_list<MultiIndex> members)
    : IndexSet(std::vector<MultiIndex>(members)) {}

void IndexSet::build_lookup() {
  lookup_.clear();
  for (std::size_t i = 0; i < members_.size(); ++i) lookup_.emplace(members_[i], i);
}

bool IndexSet::contains(const MultiIndex& nu) const { return lookup_.contains(nu); }

std::ptrdiff_t IndexSet::position(const MultiIndex& nu) const {
  auto it = lookup_.find(nu);
  return it == lookup_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

std::uint32_t IndexSet::max_dim() const noexcept {
  std::uint32_t d = 0;
  for (const auto& nu : members_) d = std::max(d, nu.max_dim());
  return d;
}

std::uint64_t IndexSet::max_l1() const noexcept {
  std::uint64_t m = 0;
  for (const auto& nu : members_) m = std::max(m, nu.l1());
  return m;
}

std::string IndexSet::serialize() const {
  std::string out;
  for (const auto& nu : members_) {
    out += nu.to_string();
    out += '\n';
  }
  return out;
}

IndexSet IndexSet::deserialize(const std::string& text) {
  std::vector<MultiIndex> members;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    require(end != std::string::npos, ErrorKind::InvalidArgument,
            "index set text must end with a newline");
    std::string line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    members.push_back(MultiIndex::parse(line));
    start = end + 1;
  }
  const auto n = members.size();
  IndexSet set(std::move(members));
  require(set.size() == n, ErrorKind::InvalidArgument, "duplicate multi-index in index set text");
  return set;
}

// ---------------------------------------------------------------------------

namespace {

// Descend over the next nonzero coordinate k > last with the remaining
// product budget; every node of the recursion is one member.
void hci_descend(std::uint32_t first_dim, std::uint32_t dims, std::uint64_t budget,
                 std::vector<MultiIndex::Entry>& current, std::vector<MultiIndex>& out) {
  out.emplace_back(current);
  if (budget < 2) return;
  for (std::uint32_t k = first_dim; k <= dims; ++k) {
    for (std::uint32_t v = 1; static_cast<std::uint64_t>(v + 1) <= budget; ++v) {
      current.emplace_back(k, v);
      hci_descend(k + 1, dims, budget / (v + 1), current, out);
      current.pop_back();
    }
  }
}

}  // namespace

IndexSet hci_index_set(std::uint32_t budget, std::uint32_t dims) {
  require(budget >= 1, ErrorKind::InvalidArgument, "hyperbolic cross needs n >= 1");
  if (dims == 0) dims = budget;
  std::vector<MultiIndex> out;
  std::vector<MultiIndex::Entry> current;
  // prod (v_k + 1) <= budget  <=>  (v + 1) <= floor(budget / prod so far).
  hci_descend(1, dims, budget, current, out);
  return IndexSet(std::move(out));
}

double hci_cardinality_bound(std::uint32_t n) {
  const double nn = static_cast<double>(n);
  return std::numbers::e * std::pow(nn, 2.0 + std::log(nn) / std::log(2.0));
}

namespace {

template <class F>
void for_each_below(const MultiIndex& nu, F&& f) {
  const auto& e = nu.entries();
  std::vector<std::uint32_t> counter(e.size(), 0);
  while (true) {
    std::vector<MultiIndex::Entry> mu;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (counter[i] != 0) mu.emplace_back(e[i].first, counter[i]);
    if (!f(MultiIndex(std::move(mu)))) return;
    std::size_t i = 0;
    while (i < e.size() && counter[i] == e[i].second) counter[i++] = 0;
    if (i == e.size()) return;
    ++counter[i];
  }
}

}  // namespace

bool is_lower(const IndexSet& set) {
  for (const auto& nu : set) {
    bool ok = true;
    for_each_below(nu, [&](const MultiIndex& mu) {
      ok = set.contains(mu);
      return ok;
    });
    if (!ok) return false;
  }
  return true;
}

bool is_anchored(const IndexSet& set) {
  if (!is_lower(set)) return false;
  for (const auto& nu : set) {
    if (nu.l1() != 1) continue;
    const auto j = nu.max_dim();
    for (std::uint32_t i = 1; i < j; ++i)
      if (!set.contains(MultiIndex::unit(i))) return false;
  }
  return true;
}

IndexSet lower_closure(const IndexSet& set) {
  std::vector<MultiIndex> out;
  std::set<MultiIndex> seen;
  for (const auto& nu : set) {
    for_each_below(nu, [&](const MultiIndex& mu) {
      if (seen.insert(mu).second) out.push_back(mu);
      return true;
    });
  }
  return IndexSet(std::move(out));
}

IndexSet anchored_closure(const IndexSet& set) {
  IndexSet lower = lower_closure(set);
  std::vector<MultiIndex> out(lower.begin(), lower.end());
  std::uint32_t top = 0;
  for (const auto& nu : lower)
    if (nu.l1() == 1) top = std::max(top, nu.max_dim());
  for (std::uint32_t j = 1; j <= top; ++j) out.push_back(MultiIndex::unit(j));
  return IndexSet(std::move(out));
}

std::vector<IndexSet> enumerate_anchored_sets(std::uint32_t size_limit, std::uint32_t dim_limit) {
  if (size_limit > 8 || dim_limit > 6)
    throw Error(ErrorKind::OracleScaleExceeded,
                "enumerate_anchored_sets limited to size <= 8 and dims <= 6");
  std::vector<IndexSet> result;
  if (size_limit == 0 || dim_limit == 0) {
    if (size_limit >= 1) result.push_back(IndexSet{MultiIndex{}});
    return result;
  }
  // Grow lower sets one addable element at a time; every lower set of size s
  // arises from one of size s - 1 by removing a maximal element.
  std::set<std::vector<MultiIndex>> frontier{{MultiIndex{}}};
  for (std::uint32_t size = 1; size <= size_limit; ++size) {
    std::set<std::vector<MultiIndex>> next;
    for (const auto& members : frontier) {
      IndexSet s(members);
      if (is_anchored(s)) result.push_back(s);
      if (size == size_limit) continue;
      for (const auto& nu : s) {
        for (std::uint32_t j = 1; j <= dim_limit; ++j) {
          auto cand = nu.with(j, nu[j] + 1);
          if (s.contains(cand)) continue;
          bool addable = true;
          for (const auto& [d, v] : cand.entries())
            if (!s.contains(cand.with(d, v - 1))) { addable = false; break; }
          if (!addable) continue;
          auto grown = members;
          grown.push_back(cand);
          std::sort(grown.begin(), grown.end());
          next.insert(std::move(grown));
        }
      }
    }
    frontier = std::move(next);
  }
  return result;
}

IndexSet total_degree_set(std::uint32_t degree, std::uint32_t dims) {
  std::vector<MultiIndex> out;
  std::vector<std::uint32_t> dense(dims, 0);
  auto rec = [&](auto&& self, std::uint32_t dim, std::uint32_t left) -> void {
    if (dim == dims) {
      out.push_back(MultiIndex::from_dense(dense));
      return;
    }
    for (std::uint32_t v = 0; v <= left; ++v) {
      dense[dim] = v;
      self(self, dim + 1, left - v);
    }
    dense[dim] = 0;
  };
  rec(rec, 0, degree);
  return IndexSet(std::move(out));
}

}  // namespace holo
