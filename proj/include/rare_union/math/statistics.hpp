#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace rare_union {

/// Pairwise (cascade) summation in a fixed order.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 16) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

/// Count, mean, centred second moment and range of a sample.
struct Moments {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();

  /// All observations identical (or fewer than two).
  bool constant() const noexcept { return count == 0 || min == max; }

  /// Unbiased sample variance; exactly 0 for a constant sample.
  double sample_variance() const noexcept {
    if (count < 2 || constant()) return 0.0;
    return m2 / static_cast<double>(count - 1);
  }
  /// Population variance (used for exact expectations).
  double population_variance() const noexcept {
    if (count == 0 || constant()) return 0.0;
    return m2 / static_cast<double>(count);
  }

  static Moments of(std::span<const double> v) {
    Moments m;
    m.count = v.size();
    if (v.empty()) return m;
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    m.min = *lo;
    m.max = *hi;
    if (m.min == m.max) {
      m.mean = m.min;
      return m;
    }
    m.mean = pairwise_sum(v) / static_cast<double>(v.size());
    std::vector<double> dev(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double e = v[i] - m.mean;
      dev[i] = e * e;
    }
    m.m2 = pairwise_sum(dev);
    return m;
  }

  /// Chan et al. combination of two disjoint samples.
  static Moments merge(const Moments& a, const Moments& b) {
    if (a.count == 0) return b;
    if (b.count == 0) return a;
    Moments m;
    m.count = a.count + b.count;
    m.min = std::min(a.min, b.min);
    m.max = std::max(a.max, b.max);
    if (m.min == m.max) {
      m.mean = m.min;
      return m;
    }
    const double na = static_cast<double>(a.count), nb = static_cast<double>(b.count);
    const double n = na + nb;
    const double delta = b.mean - a.mean;
    m.mean = a.mean + delta * (nb / n);
    m.m2 = a.m2 + b.m2 + delta * delta * (na * nb / n);
    return m;
  }

  /// Tree merge of per-chunk moments in index order.
  static Moments merge_tree(std::span<const Moments> parts) {
    if (parts.empty()) return {};
    if (parts.size() == 1) return parts[0];
    const std::size_t h = parts.size() / 2;
    return merge(merge_tree(parts.first(h)), merge_tree(parts.subspan(h)));
  }
};

/// Worker count: RARE_UNION_THREADS if set and positive, else hardware
/// parallelism.
inline unsigned worker_count() {
  if (const char* env = std::getenv("RARE_UNION_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Runs body(k) for k in [0, n) across `threads` workers. Work items are
/// claimed in order; callers store results by index so the outcome does not
/// depend on the schedule.
inline void parallel_for(std::size_t n, unsigned threads,
                         const std::function<void(std::size_t)>& body) {
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads <= 1) {
    for (std::size_t k = 0; k < n; ++k) body(k);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::atomic_size_t next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t k = next++; k < n; k = next++) body(k);
      } catch (...) {
        errors[t] = std::current_exception();
        next = n;
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

} // namespace rare_union
