#pragma once

// Two ways of averaging a kernel k(X, pattern) under a mixture of conditional
// laws Σ_c w_c P(· | B_c): by simulation, or exactly over a finite pattern
// law. Every estimator is written once against this interface, so the exact
// route checks the very code that the simulation route runs.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "rare_union/core/events.hpp"
#include "rare_union/core/finite_pattern_model.hpp"
#include "rare_union/math/random.hpp"
#include "rare_union/math/statistics.hpp"
#include "rare_union/models/dependence_model.hpp"

namespace rare_union {

using Kernel = std::function<double(std::span<const double>, const ExceedancePattern&)>;

/// Mixture component: condition on B_given, chosen with probability weight
/// (weights need not be normalized).
struct Component {
  IndexSet given;
  double weight = 1.0;
};

/// Mean and per-draw variance of a kernel. `constant` means every draw gave
/// the same value, in which case variance is exactly 0.
struct Average {
  double mean = 0.0;
  double variance = 0.0;
  bool constant = true;
  std::uint64_t count = 0;
};

/// Replicates per chunk; each chunk owns a derived stream.
inline constexpr std::uint64_t kChunkSize = 4096;

class MonteCarloAverager {
public:
  MonteCarloAverager(const DependenceModel& model, double gamma, std::uint64_t seed,
                     unsigned threads = worker_count())
      : model_(model), gamma_(gamma), seed_(seed), threads_(threads) {}

  const DependenceModel& model() const noexcept { return model_; }
  double gamma() const noexcept { return gamma_; }
  static constexpr bool exact = false;

  /// n draws from the mixture; the stream of chunk c is derive(seed, tag, c).
  Average average(std::span<const Component> components, std::uint64_t n, const Kernel& kernel,
                  std::uint64_t tag) const {
    if (n == 0) throw std::invalid_argument("average: need at least one replicate");
    std::vector<Sampler> samplers;
    std::vector<double> cdf;
    double total = 0.0;
    for (const auto& c : components) {
      if (!(c.weight > 0.0)) continue;
      samplers.push_back(model_.conditional_given_all(c.given, gamma_));
      cdf.push_back(total += c.weight);
    }
    if (samplers.empty()) throw std::domain_error("average: mixture has no positive weight");

    const std::uint64_t chunks = (n + kChunkSize - 1) / kChunkSize;
    std::vector<Moments> parts(chunks);
    const std::size_t d = model_.dim();
    parallel_for(chunks, threads_, [&](std::size_t c) {
      Rng rng = Rng::derive(seed_, tag, c);
      const std::uint64_t begin = c * kChunkSize;
      const std::uint64_t len = std::min(kChunkSize, n - begin);
      std::vector<double> x(d), values(len);
      for (std::uint64_t r = 0; r < len; ++r) {
        std::size_t k = 0;
        if (samplers.size() > 1) {
          const double u = rng.uniform() * total;
          k = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
          k = std::min(k, samplers.size() - 1);
        }
        samplers[k](rng, x);
        values[r] = kernel(x, model_.pattern(x, gamma_));
      }
      parts[c] = Moments::of(values);
    });
    const Moments m = Moments::merge_tree(parts);
    return {m.mean, m.sample_variance(), m.constant(), m.count};
  }

private:
  const DependenceModel& model_;
  double gamma_;
  std::uint64_t seed_;
  unsigned threads_;
};

/// Exhaustive expectation over a FinitePatternModel. `count` echoes the
/// requested n; variance is the exact per-draw variance.
class ExactAverager {
public:
  explicit ExactAverager(const FinitePatternModel& model) : model_(model) {}

  const DependenceModel& model() const noexcept { return model_; }
  double gamma() const noexcept { return 0.5; }
  static constexpr bool exact = true;

  Average average(std::span<const Component> components, std::uint64_t n, const Kernel& kernel,
                  std::uint64_t /*tag*/) const {
    const auto& pmf = model_.pmf();
    std::vector<double> q(pmf.size(), 0.0);
    double total = 0.0;
    for (const auto& c : components)
      if (c.weight > 0.0) total += c.weight;
    if (!(total > 0.0)) throw std::domain_error("average: mixture has no positive weight");
    for (const auto& c : components) {
      if (!(c.weight > 0.0)) continue;
      const double pb = model_.intersection_survival(c.given, 0.5);
      if (!(pb > 0.0)) throw std::domain_error("average: component of probability zero");
      const std::uint64_t need = c.given.mask();
      for (std::size_t m = 0; m < pmf.size(); ++m)
        if ((m & need) == need) q[m] += (c.weight / total) * pmf[m] / pb;
    }
    std::vector<double> x(model_.dim());
    std::vector<double> values(pmf.size(), 0.0);
    Average a;
    a.count = n;
    bool first = true;
    double ref = 0.0;
    for (std::size_t m = 0; m < pmf.size(); ++m) {
      if (q[m] == 0.0) continue;
      model_.write_pattern(m, x);
      values[m] = kernel(x, model_.pattern(x, 0.5));
      if (first) {
        ref = values[m];
        first = false;
      } else if (values[m] != ref) {
        a.constant = false;
      }
      a.mean += q[m] * values[m];
    }
    if (a.constant) {
      a.mean = ref;
      return a;
    }
    for (std::size_t m = 0; m < pmf.size(); ++m)
      if (q[m] != 0.0) a.variance += q[m] * (values[m] - a.mean) * (values[m] - a.mean);
    return a;
  }

private:
  const FinitePatternModel& model_;
};

} // namespace rare_union
