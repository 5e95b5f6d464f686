#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rare_union/core/events.hpp"
#include "rare_union/models/dependence_model.hpp"

namespace rare_union {

/// A law on the 2^d exceedance patterns themselves. A draw is the 0/1 vector
/// of the pattern and the events are x_i > 1/2 whatever the threshold, so
/// every probability is a finite sum. Used to check estimators exactly.
///
/// Internally pmf()[mask] uses bit i for event i. The JSON form lists the
/// probabilities in lexicographic order of (b_1, ..., b_d), b_1 most
/// significant.
class FinitePatternModel : public DependenceModel {
public:
  static constexpr std::size_t kMaxDim = 20;
  static constexpr double kTolerance = 1e-12;

  FinitePatternModel(std::size_t d, std::vector<double> pmf) : d_(d), pmf_(std::move(pmf)) {
    if (d < 1 || d > kMaxDim) throw ModelError("finite: need 1 <= d <= 20");
    if (pmf_.size() != (std::size_t{1} << d)) throw ModelError("finite: pmf needs 2^d entries");
    double total = 0.0;
    for (double p : pmf_) {
      if (!(p >= 0.0) || !std::isfinite(p)) throw ModelError("finite: negative probability");
      total += p;
    }
    if (std::abs(total - 1.0) > kTolerance) throw ModelError("finite: pmf not normalized");
    cdf_.resize(pmf_.size());
    double c = 0.0;
    for (std::size_t m = 0; m < pmf_.size(); ++m) cdf_[m] = (c += pmf_[m]);
  }

  /// Independent events with P(A_i) = p[i].
  static FinitePatternModel independent(std::span<const double> p) {
    const std::size_t d = p.size();
    std::vector<double> pmf(std::size_t{1} << d);
    for (std::size_t m = 0; m < pmf.size(); ++m) {
      double q = 1.0;
      for (std::size_t i = 0; i < d; ++i) q *= ((m >> i) & 1U) ? p[i] : 1.0 - p[i];
      pmf[m] = q;
    }
    return FinitePatternModel(d, std::move(pmf));
  }

  /// Builds from the lexicographic (b_1 most significant) listing.
  static FinitePatternModel from_lexicographic(std::size_t d, const std::vector<double>& lex) {
    if (d < 1 || d > kMaxDim) throw ModelError("finite: need 1 <= d <= 20");
    if (lex.size() != (std::size_t{1} << d)) throw ModelError("finite: pmf needs 2^d entries");
    std::vector<double> pmf(lex.size());
    for (std::size_t k = 0; k < lex.size(); ++k) pmf[reverse_bits(k, d)] = lex[k];
    return FinitePatternModel(d, std::move(pmf));
  }

  std::vector<double> lexicographic_pmf() const {
    std::vector<double> lex(pmf_.size());
    for (std::size_t m = 0; m < pmf_.size(); ++m) lex[reverse_bits(m, d_)] = pmf_[m];
    return lex;
  }

  const std::vector<double>& pmf() const noexcept { return pmf_; }
  double probability(const ExceedancePattern& p) const { return pmf_.at(p.mask()); }

  std::size_t dim() const override { return d_; }
  Capabilities capabilities() const override {
    return {.marginal_prob = true,
            .pair_prob = true,
            .conditional_single = true,
            .conditional_pair = true,
            .arbitrary_sets = true};
  }
  std::string type_name() const override { return "finite"; }
  nlohmann::json to_json() const override {
    return {{"type", "finite"}, {"d", d_}, {"pmf", lexicographic_pmf()}};
  }

  ExceedancePattern pattern(std::span<const double> x, double /*gamma*/) const override {
    ExceedancePattern p(x.size(), 0);
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] > 0.5) p.set(i);
    return p;
  }

  /// The 0/1 vector of a pattern mask.
  void write_pattern(std::uint64_t mask, std::span<double> out) const {
    for (std::size_t i = 0; i < d_; ++i) out[i] = ((mask >> i) & 1U) ? 1.0 : 0.0;
  }

  void sample(Rng& rng, std::span<double> out) const override {
    write_pattern(draw(cdf_, rng), out);
  }

  double marginal_survival(std::size_t i, double gamma) const override {
    check_index(i);
    return intersection_survival(IndexSet(d_, std::uint64_t{1} << i), gamma);
  }

  double pair_survival(std::size_t i, std::size_t j, double gamma) const override {
    check_pair(i, j);
    return intersection_survival(IndexSet(d_, (std::uint64_t{1} << i) | (std::uint64_t{1} << j)),
                                 gamma);
  }

  double intersection_survival(const IndexSet& set, double /*gamma*/) const override {
    check_set(set);
    double s = 0.0;
    for (std::size_t m = 0; m < pmf_.size(); ++m)
      if ((m & set.mask()) == set.mask()) s += pmf_[m];
    return s;
  }

  Sampler conditional_given_exceedance(std::size_t i, double gamma) const override {
    check_index(i);
    return conditional_given_all(IndexSet(d_, std::uint64_t{1} << i), gamma);
  }

  Sampler conditional_given_pair_exceedance(std::size_t i, std::size_t j,
                                            double gamma) const override {
    check_pair(i, j);
    return conditional_given_all(IndexSet(d_, (std::uint64_t{1} << i) | (std::uint64_t{1} << j)),
                                 gamma);
  }

  Sampler conditional_given_all(const IndexSet& set, double /*gamma*/) const override {
    check_set(set);
    std::vector<std::uint64_t> masks;
    std::vector<double> cdf;
    double c = 0.0;
    for (std::size_t m = 0; m < pmf_.size(); ++m) {
      if ((m & set.mask()) != set.mask() || pmf_[m] == 0.0) continue;
      masks.push_back(m);
      cdf.push_back(c += pmf_[m]);
    }
    if (masks.empty())
      throw std::domain_error("finite: conditioning on an event of probability zero");
    for (auto& v : cdf) v /= c;
    return [this, masks = std::move(masks), cdf = std::move(cdf)](Rng& rng,
                                                                  std::span<double> out) {
      write_pattern(masks[draw(cdf, rng)], out);
    };
  }

private:
  static std::size_t reverse_bits(std::size_t k, std::size_t d) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < d; ++b)
      if ((k >> b) & 1U) r |= std::size_t{1} << (d - 1 - b);
    return r;
  }

  /// Index of the first cdf entry exceeding u·total.
  static std::size_t draw(const std::vector<double>& cdf, Rng& rng) {
    const double u = rng.uniform() * cdf.back();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
  }

  std::size_t d_;
  std::vector<double> pmf_;
  std::vector<double> cdf_;
};

/// P(E >= 1), summed over the patterns.
inline double brute_force_union(const FinitePatternModel& model) {
  double s = 0.0;
  const auto& pmf = model.pmf();
  for (std::size_t m = 1; m < pmf.size(); ++m) s += pmf[m];
  return s;
}

/// Payoff as a function of the pattern alone.
using PatternPayoff = std::function<double(const ExceedancePattern&)>;

/// β_n = Σ_{E >= n} y(pattern)·pmf(pattern).
inline double brute_force_beta(const FinitePatternModel& model, std::size_t n,
                               const PatternPayoff& y) {
  double s = 0.0;
  const auto& pmf = model.pmf();
  for (std::size_t m = 0; m < pmf.size(); ++m) {
    const ExceedancePattern p(model.dim(), m);
    if (p.count() >= n && pmf[m] != 0.0) s += y(p) * pmf[m];
  }
  return s;
}

} // namespace rare_union
