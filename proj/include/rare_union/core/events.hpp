#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rare_union {

inline constexpr std::size_t kMaxEvents = 64;

//==============================================================================
// Exact binomial coefficients
//==============================================================================

namespace detail {

struct PascalTable {
  std::array<std::array<std::uint64_t, kMaxEvents + 1>, kMaxEvents + 1> c{};
  constexpr PascalTable() {
    for (std::size_t n = 0; n <= kMaxEvents; ++n) {
      c[n][0] = 1;
      for (std::size_t k = 1; k <= n; ++k)
        c[n][k] = c[n - 1][k - 1] + (k < n ? c[n - 1][k] : 0);
    }
  }
};

inline constexpr PascalTable kPascal{};

} // namespace detail

/// C(n, k) by Pascal recurrence; zero when k > n. Exact for n <= 64.
constexpr std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (n > kMaxEvents) throw std::out_of_range("binomial: n > 64");
  if (k > n) return 0;
  return detail::kPascal.c[n][k];
}

/// C(E, i)·1{E >= i}: the number of size-i index sets whose events all occur
/// when exactly E events occur.
constexpr std::uint64_t binomial_term(std::size_t exceedances, std::size_t i) {
  return exceedances >= i ? binomial(exceedances, i) : 0;
}

/// Alternating partial sum Σ_{i=0}^{m} (−1)^i C(E, i), without indicator.
constexpr std::int64_t alternating_binomial_sum(std::size_t exceedances,
                                                std::size_t m) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i <= m && i <= exceedances; ++i) {
    const auto c = static_cast<std::int64_t>(binomial(exceedances, i));
    s += (i % 2 == 0) ? c : -c;
  }
  return s;
}

/// Random part of the n-th order estimator:
/// [Σ_{i=0}^{n} (−1)^i C(E, i)]·1{E >= n+1}.
constexpr std::int64_t residual_term(std::size_t exceedances, std::size_t n) {
  if (exceedances < n + 1) return 0;
  return alternating_binomial_sum(exceedances, n);
}

//==============================================================================
// ExceedancePattern
//==============================================================================

/// Occurrence indicators of the events A_1..A_d for one realization.
/// Bit i (0-based) holds 1{A_{i+1}}.
class ExceedancePattern {
public:
  ExceedancePattern() = default;

  ExceedancePattern(std::size_t d, std::uint64_t mask) : d_(d), mask_(mask) {
    check_dim(d);
    if (d < 64 && (mask >> d) != 0)
      throw std::invalid_argument("ExceedancePattern: mask has bits beyond d");
  }

  ExceedancePattern(std::initializer_list<bool> bits)
      : ExceedancePattern(std::vector<bool>(bits)) {}

  explicit ExceedancePattern(const std::vector<bool>& bits) : d_(bits.size()) {
    check_dim(d_);
    for (std::size_t i = 0; i < bits.size(); ++i)
      if (bits[i]) mask_ |= std::uint64_t{1} << i;
  }

  std::size_t dim() const noexcept { return d_; }
  std::uint64_t mask() const noexcept { return mask_; }
  bool operator[](std::size_t i) const noexcept { return (mask_ >> i) & 1U; }
  std::size_t count() const noexcept {
    return static_cast<std::size_t>(std::popcount(mask_));
  }

  void set(std::size_t i, bool value = true) noexcept {
    const std::uint64_t bit = std::uint64_t{1} << i;
    mask_ = value ? (mask_ | bit) : (mask_ & ~bit);
  }

  std::string to_string() const {
    std::string s(d_, 'F');
    for (std::size_t i = 0; i < d_; ++i)
      if ((*this)[i]) s[i] = 'T';
    return s;
  }

  friend bool operator==(const ExceedancePattern&,
                         const ExceedancePattern&) = default;

private:
  static void check_dim(std::size_t d) {
    if (d == 0 || d > kMaxEvents)
      throw std::invalid_argument("ExceedancePattern: need 1 <= d <= 64");
  }

  std::size_t d_ = 0;
  std::uint64_t mask_ = 0;
};

/// E = Σ 1{A_i}.
inline std::size_t count_exceedances(const ExceedancePattern& pattern) {
  return pattern.count();
}

//==============================================================================
// IndexSet
//==============================================================================

/// Subset I of the event indices {0..d-1} (strictly increasing when listed).
class IndexSet {
public:
  IndexSet() = default;

  IndexSet(std::size_t d, std::uint64_t mask) : d_(d), mask_(mask) {
    if (d == 0 || d > kMaxEvents)
      throw std::invalid_argument("IndexSet: need 1 <= d <= 64");
    if (d < 64 && (mask >> d) != 0)
      throw std::invalid_argument("IndexSet: index beyond dimension");
  }

  IndexSet(std::size_t d, std::initializer_list<std::size_t> indices)
      : IndexSet(d, std::vector<std::size_t>(indices)) {}

  IndexSet(std::size_t d, const std::vector<std::size_t>& indices)
      : IndexSet(d, std::uint64_t{0}) {
    for (auto i : indices) {
      if (i >= d) throw std::invalid_argument("IndexSet: index beyond dimension");
      mask_ |= std::uint64_t{1} << i;
    }
  }

  std::size_t dim() const noexcept { return d_; }
  std::uint64_t mask() const noexcept { return mask_; }
  std::size_t size() const noexcept {
    return static_cast<std::size_t>(std::popcount(mask_));
  }
  bool empty() const noexcept { return mask_ == 0; }
  bool contains(std::size_t i) const noexcept { return (mask_ >> i) & 1U; }

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    for (std::uint64_t m = mask_; m != 0; m &= m - 1)
      out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
    return out;
  }

  /// Largest index (0-based); undefined for the empty set.
  std::size_t max_index() const {
    if (empty()) throw std::logic_error("IndexSet::max_index on empty set");
    return 63 - static_cast<std::size_t>(std::countl_zero(mask_));
  }

  /// True when every event in the set occurs in the pattern.
  bool all_occur(const ExceedancePattern& p) const noexcept {
    return (p.mask() & mask_) == mask_;
  }
  /// True when no event in the set occurs in the pattern.
  bool none_occur(const ExceedancePattern& p) const noexcept {
    return (p.mask() & mask_) == 0;
  }

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

private:
  std::size_t d_ = 0;
  std::uint64_t mask_ = 0;
};

/// All size-m subsets of {0..d-1} in colexicographic mask order.
inline std::vector<IndexSet> subsets_of_size(std::size_t d, std::size_t m) {
  std::vector<IndexSet> out;
  if (m > d) return out;
  if (m == 0) {
    out.emplace_back(d, std::uint64_t{0});
    return out;
  }
  // Gosper's hack over d-bit masks.
  std::uint64_t mask = (m == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << m) - 1);
  while (true) {
    out.emplace_back(d, mask);
    const std::uint64_t c = mask & (~mask + 1);
    const std::uint64_t r = mask + c;
    if (r == 0) break;
    const std::uint64_t next = (((r ^ mask) >> 2) / c) | r;
    if (d < 64 && next >= (std::uint64_t{1} << d)) break;
    mask = next;
  }
  return out;
}

//==============================================================================
// Disjoint partition of {E >= m}
//==============================================================================

/// One cell B_I C_I: all events in I occur and no event outside I that comes
/// before the last member of I (in the chosen event order) occurs.
struct PartitionCell {
  IndexSet occurring;  // I
  IndexSet excluded;   // {k not in I : pos(k) < max pos(I)}

  bool contains(const ExceedancePattern& p) const noexcept {
    return occurring.all_occur(p) && excluded.none_occur(p);
  }
};

/// Event order used by the partition; order[k] is the event in position k.
/// Identity when empty.
using EventOrder = std::vector<std::size_t>;

namespace detail {

inline std::vector<std::size_t> positions_of(std::size_t d, const EventOrder& order) {
  std::vector<std::size_t> pos(d);
  if (order.empty()) {
    std::iota(pos.begin(), pos.end(), std::size_t{0});
    return pos;
  }
  if (order.size() != d)
    throw std::invalid_argument("event order must be a permutation of 0..d-1");
  std::vector<bool> seen(d, false);
  for (std::size_t k = 0; k < d; ++k) {
    if (order[k] >= d || seen[order[k]])
      throw std::invalid_argument("event order must be a permutation of 0..d-1");
    seen[order[k]] = true;
    pos[order[k]] = k;
  }
  return pos;
}

} // namespace detail

/// The cell {B_I C_I} for a given I under an event order.
inline PartitionCell make_cell(const IndexSet& occurring, const EventOrder& order = {}) {
  const std::size_t d = occurring.dim();
  const auto pos = detail::positions_of(d, order);
  std::size_t last = 0;
  for (auto i : occurring.indices()) last = std::max(last, pos[i]);
  std::uint64_t excl = 0;
  for (std::size_t k = 0; k < d; ++k)
    if (!occurring.contains(k) && pos[k] < last) excl |= std::uint64_t{1} << k;
  return {occurring, IndexSet(d, excl)};
}

/// All C(d, m) cells partitioning {E >= m}.
inline std::vector<PartitionCell> partition_cells(std::size_t d, std::size_t m,
                                                  const EventOrder& order = {}) {
  if (m < 1 || m > d) throw std::invalid_argument("partition_cells: need 1 <= m <= d");
  std::vector<PartitionCell> cells;
  for (const auto& I : subsets_of_size(d, m)) cells.push_back(make_cell(I, order));
  return cells;
}

/// The unique cell containing the pattern: the first m occurring events in
/// order. Empty when E < m.
inline std::optional<IndexSet> cell_of(const ExceedancePattern& p, std::size_t m,
                                       const EventOrder& order = {}) {
  if (p.count() < m) return std::nullopt;
  const std::size_t d = p.dim();
  std::uint64_t mask = 0;
  std::size_t taken = 0;
  for (std::size_t k = 0; k < d && taken < m; ++k) {
    const std::size_t ev = order.empty() ? k : order.at(k);
    if (p[ev]) {
      mask |= std::uint64_t{1} << ev;
      ++taken;
    }
  }
  return IndexSet(d, mask);
}

} // namespace rare_union
