#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rare_union/core/events.hpp"
#include "rare_union/core/finite_pattern_model.hpp"
#include "rare_union/estimators/averagers.hpp"
#include "rare_union/estimators/result.hpp"
#include "rare_union/models/dependence_model.hpp"

namespace rare_union {

/// ᾱ and the second Bonferroni truncation ᾱ − q.
struct BonferroniBounds {
  double upper = 0.0;
  double second = 0.0;
};

namespace detail {

inline void require(bool ok, const DependenceModel& m, const char* what) {
  if (!ok) throw UnsupportedCapability(m.type_name() + ": estimator needs " + what);
}

inline bool can_condition_on(const DependenceModel& m, std::size_t size) {
  const auto c = m.capabilities();
  if (c.arbitrary_sets) return true;
  return size == 1 ? c.conditional_single : size == 2 ? c.conditional_pair : false;
}

inline bool can_intersect(const DependenceModel& m, std::size_t size) {
  const auto c = m.capabilities();
  if (c.arbitrary_sets) return true;
  return size <= 1 ? c.marginal_prob : size == 2 ? c.pair_prob : false;
}

inline std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

/// Estimate of det + mean of a kernel under a mixture, R draws.
template <class Avg>
EstimateResult mixture_result(const Avg& avg, std::span<const Component> comps, std::uint64_t R,
                              const Kernel& kernel, double det) {
  const Average a = avg.average(comps, R, kernel, 0);
  EstimateResult r;
  r.gamma = avg.gamma();
  r.replicates = R;
  r.degenerate = a.constant;
  r.estimate = a.constant && a.mean == 0.0 ? det : det + a.mean;
  r.sample_std = a.constant ? 0.0 : std::sqrt(a.variance);
  r.std_error = a.constant ? 0.0 : std::sqrt(a.variance / static_cast<double>(R));
  return r;
}

struct Stratum {
  IndexSet given;
  double weight;
  Kernel kernel;
};

/// det + Σ_s weight_s · mean_s with n draws per stratum.
template <class Avg>
EstimateResult stratified_result(const Avg& avg, const std::vector<Stratum>& strata,
                                 std::uint64_t per_stratum, std::uint64_t R, double det) {
  double est = 0.0, var1 = 0.0, var_n = 0.0;
  bool constant = true;
  for (std::size_t s = 0; s < strata.size(); ++s) {
    const auto& st = strata[s];
    if (st.weight == 0.0) continue;
    const Component c{st.given, 1.0};
    const Average a = avg.average(std::span<const Component>(&c, 1), per_stratum, st.kernel, s + 1);
    est += st.weight * a.mean;
    if (!a.constant) {
      constant = false;
      var1 += st.weight * st.weight * a.variance;
      var_n += st.weight * st.weight * a.variance / static_cast<double>(per_stratum);
    }
  }
  EstimateResult r;
  r.gamma = avg.gamma();
  r.replicates = R;
  r.degenerate = constant;
  r.estimate = est == 0.0 ? det : det + est;
  r.sample_std = constant ? 0.0 : std::sqrt(var1);
  r.std_error = constant ? 0.0 : std::sqrt(var_n);
  return r;
}

inline double sum_intersections(const DependenceModel& m, std::size_t size, double gamma) {
  if (size == 1) return m.sum_marginals(gamma);
  if (size == 2 && !m.capabilities().arbitrary_sets) return m.sum_pairs(gamma);
  double s = 0.0;
  for (const auto& I : subsets_of_size(m.dim(), size)) s += m.intersection_survival(I, gamma);
  return s;
}

//------------------------------------------------------------------------------
// Estimator bodies, generic over the averager
//------------------------------------------------------------------------------

template <class Avg>
EstimateResult cmc(const Avg& avg, std::uint64_t R) {
  const Component all{IndexSet(avg.model().dim(), std::uint64_t{0}), 1.0};
  return mixture_result(avg, std::span<const Component>(&all, 1), R,
                        [](std::span<const double>, const ExceedancePattern& p) {
                          return p.count() >= 1 ? 1.0 : 0.0;
                        },
                        0.0);
}

template <class Avg>
EstimateResult alpha_n(const Avg& avg, std::size_t n, std::uint64_t R) {
  const auto& m = avg.model();
  if (n < 1 || n > 2) throw std::invalid_argument("alpha_n: n must be 1 or 2");
  require(can_intersect(m, n), m, n == 1 ? "marginal probabilities" : "pair probabilities");
  double det = m.sum_marginals(avg.gamma());
  if (n == 2) det -= m.sum_pairs(avg.gamma());
  const Component all{IndexSet(m.dim(), std::uint64_t{0}), 1.0};
  return mixture_result(avg, std::span<const Component>(&all, 1), R,
                        [n](std::span<const double>, const ExceedancePattern& p) {
                          return static_cast<double>(residual_term(p.count(), n));
                        },
                        det);
}

template <class Avg>
EstimateResult alpha_1_is(const Avg& avg, std::uint64_t R) {
  const auto& m = avg.model();
  const std::size_t d = m.dim();
  require(can_intersect(m, 1), m, "marginal probabilities");
  require(can_condition_on(m, 1), m, "sampling given A_i");
  std::vector<Component> comps;
  double abar = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double p = m.marginal_survival(i, avg.gamma());
    comps.push_back({IndexSet(d, std::uint64_t{1} << i), p});
    abar += p;
  }
  if (!(abar > 0.0)) throw std::domain_error("alpha_1_is: all marginal probabilities are zero");
  return mixture_result(avg, comps, R,
                        [abar](std::span<const double>, const ExceedancePattern& p) {
                          return abar / static_cast<double>(p.count());
                        },
                        0.0);
}

template <class Avg>
EstimateResult alpha_2_is(const Avg& avg, std::uint64_t R) {
  const auto& m = avg.model();
  const std::size_t d = m.dim();
  require(can_intersect(m, 2), m, "pair probabilities");
  const double abar = m.sum_marginals(avg.gamma());
  std::vector<Component> comps;
  double q = 0.0;
  for (const auto& I : subsets_of_size(d, 2)) {
    const double p = m.intersection_survival(I, avg.gamma());
    comps.push_back({I, p});
    q += p;
  }
  if (!(q > 0.0)) {
    // No pair can occur: the estimator is ᾱ exactly.
    EstimateResult r;
    r.gamma = avg.gamma();
    r.replicates = R;
    r.estimate = abar;
    r.degenerate = true;
    return r;
  }
  require(can_condition_on(m, 2), m, "sampling given A_i A_j");
  return mixture_result(avg, comps, R,
                        [abar, q](std::span<const double>, const ExceedancePattern& p) {
                          return abar - 2.0 * q / static_cast<double>(p.count());
                        },
                        0.0);
}

template <class Avg>
EstimateResult beta_n(const Avg& avg, std::size_t n, const PayoffSpec& y, std::uint64_t R,
                      const EventOrder& order = {}) {
  const auto& m = avg.model();
  const std::size_t d = m.dim();
  if (n < 1 || n > d) throw std::invalid_argument("beta_n: need 1 <= n <= d");
  require(can_intersect(m, n) && can_condition_on(m, n), m, "probabilities and sampling given B_I");
  std::vector<Stratum> strata;
  for (const auto& cell : partition_cells(d, n, order)) {
    strata.push_back({cell.occurring, m.intersection_survival(cell.occurring, avg.gamma()),
                      [cell, y](std::span<const double> x, const ExceedancePattern& p) {
                        return cell.excluded.none_occur(p) ? y(x, p) : 0.0;
                      }});
  }
  return stratified_result(avg, strata, ceil_div(R, binomial(d, n)), R, 0.0);
}

/// The crude comparison estimator: the same strata, but drawing from the
/// unconditional law and averaging Y·1{B_I C_I}.
template <class Avg>
EstimateResult beta_n_crude(const Avg& avg, std::size_t n, const PayoffSpec& y, std::uint64_t R,
                            const EventOrder& order = {}) {
  const auto& m = avg.model();
  const std::size_t d = m.dim();
  if (n < 1 || n > d) throw std::invalid_argument("beta_n_crude: need 1 <= n <= d");
  std::vector<Stratum> strata;
  for (const auto& cell : partition_cells(d, n, order)) {
    strata.push_back({IndexSet(d, std::uint64_t{0}), 1.0,
                      [cell, y](std::span<const double> x, const ExceedancePattern& p) {
                        return cell.contains(p) ? y(x, p) : 0.0;
                      }});
  }
  return stratified_result(avg, strata, ceil_div(R, binomial(d, n)), R, 0.0);
}

/// α through β_n: the first n−1 inclusion–exclusion terms exactly, the rest as
/// β_n with Y = Σ_{i<n} (−1)^i C(E, i). For n = 1 the stratum of the first
/// event is exact (its cell has no exclusions), leaving ⌈R/(d−1)⌉ draws for
/// each other event.
template <class Avg>
EstimateResult beta_dagger_alpha(const Avg& avg, std::size_t n, std::uint64_t R,
                                 const EventOrder& order = {}) {
  const auto& m = avg.model();
  const std::size_t d = m.dim();
  if (n < 1 || n > d) throw std::invalid_argument("beta_dagger_alpha: need 1 <= n <= d");
  require(can_intersect(m, n) && can_condition_on(m, n), m, "probabilities and sampling given B_I");
  double det = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double s = sum_intersections(m, i, avg.gamma());
    det += (i % 2 == 1) ? s : -s;
  }
  const PayoffSpec y = PayoffSpec::residual_alternating(n - 1);
  std::vector<Stratum> strata;
  for (const auto& cell : partition_cells(d, n, order)) {
    const double w = m.intersection_survival(cell.occurring, avg.gamma());
    if (n == 1 && cell.excluded.empty()) {
      det += w;
      continue;
    }
    strata.push_back({cell.occurring, w,
                      [cell, y](std::span<const double> x, const ExceedancePattern& p) {
                        return cell.excluded.none_occur(p) ? y(x, p) : 0.0;
                      }});
  }
  if (strata.empty()) {
    EstimateResult r;
    r.gamma = avg.gamma();
    r.replicates = R;
    r.estimate = det;
    r.degenerate = true;
    return r;
  }
  const std::uint64_t per = n == 1 ? ceil_div(R, d - 1) : ceil_div(R, binomial(d, n));
  return stratified_result(avg, strata, per, R, det);
}

template <class F>
EstimateResult timed(const char* name, std::uint64_t seed, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  EstimateResult r = body();
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  r.estimator = name;
  r.seed = seed;
  return r;
}

} // namespace detail

//==============================================================================
// Simulation estimators
//==============================================================================

/// α̂₀: mean of 1{E >= 1}.
inline EstimateResult estimate_cmc(const DependenceModel& model, double gamma, std::uint64_t R,
                                   std::uint64_t seed) {
  return detail::timed("cmc", seed, [&] { return detail::cmc(MonteCarloAverager(model, gamma, seed), R); });
}

/// α̂_n, n in {1, 2}: Bonferroni truncation plus the mean residual term.
inline EstimateResult estimate_alpha_n(const DependenceModel& model, double gamma, std::size_t n,
                                       std::uint64_t R, std::uint64_t seed) {
  return detail::timed(n == 1 ? "alpha1" : "alpha2", seed, [&] {
    return detail::alpha_n(MonteCarloAverager(model, gamma, seed), n, R);
  });
}

/// α̂₁^[1]: mean of ᾱ/E with A_i picked with probability P(A_i)/ᾱ.
inline EstimateResult estimate_alpha_1_is(const DependenceModel& model, double gamma,
                                          std::uint64_t R, std::uint64_t seed) {
  return detail::timed("alpha1_is", seed, [&] {
    return detail::alpha_1_is(MonteCarloAverager(model, gamma, seed), R);
  });
}

/// α̂₂^[2]: mean of ᾱ − 2q/E with A_iA_j picked with probability P(A_iA_j)/q.
inline EstimateResult estimate_alpha_2_is(const DependenceModel& model, double gamma,
                                          std::uint64_t R, std::uint64_t seed) {
  return detail::timed("alpha2_is", seed, [&] {
    return detail::alpha_2_is(MonteCarloAverager(model, gamma, seed), R);
  });
}

/// β̂_n: Σ_{|I|=n} P(B_I) · mean of Y·1{C_I} given B_I.
inline EstimateResult estimate_beta_n(const DependenceModel& model, double gamma, std::size_t n,
                                      const PayoffSpec& payoff, std::uint64_t R,
                                      std::uint64_t seed, const EventOrder& order = {}) {
  return detail::timed("beta_n", seed, [&] {
    return detail::beta_n(MonteCarloAverager(model, gamma, seed), n, payoff, R, order);
  });
}

inline EstimateResult estimate_beta_n_crude(const DependenceModel& model, double gamma,
                                            std::size_t n, const PayoffSpec& payoff,
                                            std::uint64_t R, std::uint64_t seed,
                                            const EventOrder& order = {}) {
  return detail::timed("beta_n_crude", seed, [&] {
    return detail::beta_n_crude(MonteCarloAverager(model, gamma, seed), n, payoff, R, order);
  });
}

inline EstimateResult estimate_beta_dagger_alpha(const DependenceModel& model, double gamma,
                                                 std::size_t n, std::uint64_t R,
                                                 std::uint64_t seed, const EventOrder& order = {}) {
  return detail::timed(n == 1 ? "beta1_alpha" : n == 2 ? "beta2_alpha" : "betan_alpha", seed, [&] {
    return detail::beta_dagger_alpha(MonteCarloAverager(model, gamma, seed), n, R, order);
  });
}

inline BonferroniBounds bonferroni_bounds(const DependenceModel& model, double gamma) {
  detail::require(detail::can_intersect(model, 1), model, "marginal probabilities");
  BonferroniBounds b;
  b.upper = model.sum_marginals(gamma);
  b.second = detail::can_intersect(model, 2) ? b.upper - model.sum_pairs(gamma)
                                             : std::numeric_limits<double>::quiet_NaN();
  return b;
}

//==============================================================================
// Exhaustive expectations on a finite pattern law
//==============================================================================

/// The same estimators evaluated exactly: `estimate` is the expectation and
/// `sample_std` the exact per-replicate standard deviation.
namespace exact {

inline EstimateResult cmc(const FinitePatternModel& m) {
  return detail::cmc(ExactAverager(m), 1);
}
inline EstimateResult alpha_n(const FinitePatternModel& m, std::size_t n) {
  return detail::alpha_n(ExactAverager(m), n, 1);
}
inline EstimateResult alpha_1_is(const FinitePatternModel& m) {
  return detail::alpha_1_is(ExactAverager(m), 1);
}
inline EstimateResult alpha_2_is(const FinitePatternModel& m) {
  return detail::alpha_2_is(ExactAverager(m), 1);
}
inline EstimateResult beta_n(const FinitePatternModel& m, std::size_t n, const PayoffSpec& y,
                             const EventOrder& order = {}) {
  return detail::beta_n(ExactAverager(m), n, y, 1, order);
}
inline EstimateResult beta_n_crude(const FinitePatternModel& m, std::size_t n, const PayoffSpec& y,
                                   const EventOrder& order = {}) {
  return detail::beta_n_crude(ExactAverager(m), n, y, 1, order);
}
inline EstimateResult beta_dagger_alpha(const FinitePatternModel& m, std::size_t n,
                                        const EventOrder& order = {}) {
  return detail::beta_dagger_alpha(ExactAverager(m), n, 1, order);
}

/// E[R_n²] for the residual term of α̂_n.
inline double residual_second_moment(const FinitePatternModel& m, std::size_t n) {
  const Component all{IndexSet(m.dim(), std::uint64_t{0}), 1.0};
  const Average a = ExactAverager(m).average(
      std::span<const Component>(&all, 1), 1,
      [n](std::span<const double>, const ExceedancePattern& p) {
        const double r = static_cast<double>(residual_term(p.count(), n));
        return r * r;
      },
      0);
  return a.mean;
}

} // namespace exact

} // namespace rare_union
