#pragma once

// Deterministic reference values for α(γ) = P(max_i X_i > γ).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "rare_union/core/finite_pattern_model.hpp"
#include "rare_union/math/quadrature.hpp"
#include "rare_union/math/random.hpp"
#include "rare_union/math/sobol.hpp"
#include "rare_union/math/statistics.hpp"
#include "rare_union/math/special_functions.hpp"
#include "rare_union/models/archimedean.hpp"
#include "rare_union/models/laplace.hpp"
#include "rare_union/models/normal.hpp"

namespace rare_union {

/// Equicorrelated standard normals, ρ in [0, 1), by the one-factor identity
/// X_i = √ρ Z + √(1−ρ) W_i:
///   α = ∫ φ(z) [1 − Φ((γ − √ρ z)/√(1−ρ))^d] dz.
inline double oracle_union_normal_equicorr(std::size_t d, double rho, double gamma) {
  if (d < 1) throw std::invalid_argument("oracle_union_normal_equicorr: d >= 1");
  if (!(rho >= 0.0 && rho < 1.0))
    throw std::domain_error("oracle_union_normal_equicorr: needs 0 <= rho < 1 (use the QMC oracle)");
  const double dd = static_cast<double>(d);
  if (d == 1) return math::normal_sf(gamma);
  if (rho == 0.0) return math::one_minus_cdf_power(gamma, dd);
  const double a = std::sqrt(rho), b = std::sqrt(1.0 - rho);
  auto f = [=](double z) {
    return math::normal_pdf(z) * math::one_minus_cdf_power((gamma - a * z) / b, dd);
  };
  math::QuadratureOptions opt;
  opt.initial_pieces = 64;
  opt.rel_tol = 1e-13;
  // φ vanishes in double precision beyond |z| = 38.5.
  return math::integrate(f, -38.5, 38.5, opt).value;
}

/// Multivariate Laplace: α = ∫₀^∞ e^{−r} [1 − Φ(γ/√r)^d] dr, γ > 0.
inline double oracle_union_laplace(std::size_t d, double gamma) {
  if (d < 1) throw std::invalid_argument("oracle_union_laplace: d >= 1");
  if (!(gamma > 0.0)) throw std::domain_error("oracle_union_laplace: gamma must be positive");
  if (d == 1) return LaplaceModel::survival(gamma);
  const double dd = static_cast<double>(d);
  auto f = [=](double r) {
    if (r <= 0.0) return 0.0;
    return std::exp(-r) * math::one_minus_cdf_power(gamma / std::sqrt(r), dd);
  };
  math::QuadratureOptions opt;
  opt.initial_pieces = 32;
  opt.rel_tol = 1e-12;
  return math::integrate_to_infinity(f, 0.0, opt).value;
}

/// 1 − C(u, ..., u) for the Archimedean model.
inline double oracle_union_archimedean(const ArchimedeanModel& model, double u) {
  if (u <= 0.0) return 1.0;
  if (u >= 1.0) return 0.0;
  return 1.0 - model.generator().diagonal(u, model.dim());
}

struct QmcResult {
  double value = 0.0;
  /// Standard error across the randomized shifts.
  double error = 0.0;
};

inline constexpr std::uint64_t kDefaultQmcPoints = std::uint64_t{1} << 20;
inline constexpr std::size_t kQmcShifts = 8;

/// P(∪{X_i > γ}) for any normal model with d <= 8, written as the sum of
/// the first-exceedance terms P(X_i > γ, X_j <= γ for j < i). Each term is
/// integrated by Genz's separation of variables on digitally shifted Sobol'
/// points; every term is non-negative, so relative accuracy survives deep
/// thresholds. `points` is the total per term over the 8 fixed shifts.
inline QmcResult oracle_union_normal_qmc(const NormalModel& model, double gamma,
                                         std::uint64_t points = kDefaultQmcPoints) {
  using Eigen::Index;
  const std::size_t d = model.dim();
  if (d > 8) throw std::invalid_argument("oracle_union_normal_qmc: d <= 8");
  const std::uint64_t per_shift = std::max<std::uint64_t>(1, points / kQmcShifts);

  // Term 0 is a plain marginal; terms 1..d−1 need i-dimensional integrals.
  const double first = model.marginal_survival(0, gamma);
  std::vector<double> means(kQmcShifts, first);
  Rng shift_rng(0x5EEDC0DEULL);
  std::vector<std::array<std::uint32_t, 8>> shifts(kQmcShifts);
  for (auto& sh : shifts)
    for (auto& w : sh) w = static_cast<std::uint32_t>(shift_rng() >> 32);

  for (std::size_t i = 1; i < d; ++i) {
    // Variable order (i, 0, 1, ..., i−1): X_i above γ, the rest below.
    std::vector<std::size_t> order{i};
    for (std::size_t k = 0; k < i; ++k) order.push_back(k);
    const std::size_t m = order.size();
    Eigen::MatrixXd sub(static_cast<Index>(m), static_cast<Index>(m));
    std::vector<double> b(m);
    for (std::size_t r = 0; r < m; ++r) {
      b[r] = gamma - model.mean()(static_cast<Index>(order[r]));
      for (std::size_t c = 0; c < m; ++c)
        sub(static_cast<Index>(r), static_cast<Index>(c)) =
            model.covariance()(static_cast<Index>(order[r]), static_cast<Index>(order[c]));
    }
    const Eigen::MatrixXd L = sub.llt().matrixL();
    const double c0 = b[0] / L(0, 0);
    const double upper0 = math::normal_sf(c0);
    if (upper0 == 0.0) continue;

    for (std::size_t s = 0; s < kQmcShifts; ++s) {
      math::SobolSequence seq(m - 1, std::vector<std::uint32_t>(shifts[s].begin(), shifts[s].begin() + (m - 1)));
      std::vector<double> w(m - 1), y(m);
      std::vector<double> values(per_shift);
      for (std::uint64_t n = 0; n < per_shift; ++n) {
        seq.next(w.data());
        // y_0 ~ N(0,1) truncated to (c0, ∞).
        y[0] = -math::normal_quantile(w[0] * upper0);
        double log_prod = 0.0;
        for (std::size_t k = 1; k < m; ++k) {
          double c = b[k];
          for (std::size_t j = 0; j < k; ++j) c -= L(static_cast<Index>(k), static_cast<Index>(j)) * y[j];
          const double t = c / L(static_cast<Index>(k), static_cast<Index>(k));
          log_prod += math::log_normal_cdf(t);
          if (k + 1 < m) {
            // y_k ~ N(0,1) truncated to (−∞, t], by inversion in the lower
            // tail or, when Φ(t) is close to 1, through the upper tail.
            const double e = math::normal_cdf(t);
            const double p = w[k] * e;
            y[k] = p < 0.5 ? math::normal_quantile(p)
                           : -math::normal_quantile(math::normal_sf(t) + (1.0 - w[k]) * e);
          }
        }
        values[n] = std::exp(log_prod);
      }
      means[s] += upper0 * pairwise_sum(values) / static_cast<double>(per_shift);
    }
  }
  const Moments mo = Moments::of(means);
  return {mo.mean, std::sqrt(mo.sample_variance() / static_cast<double>(kQmcShifts))};
}

/// Reference α for any model that has one; empty otherwise.
inline std::optional<double> union_oracle(const DependenceModel& model, double gamma,
                                          std::uint64_t qmc_points = kDefaultQmcPoints) {
  if (const auto* n = dynamic_cast<const NormalModel*>(&model)) {
    if (const auto rho = n->equicorrelation(); rho && *rho >= 0.0)
      return oracle_union_normal_equicorr(n->dim(), *rho, gamma);
    if (n->dim() <= 8) return oracle_union_normal_qmc(*n, gamma, qmc_points).value;
    return std::nullopt;
  }
  if (const auto* l = dynamic_cast<const LaplaceModel*>(&model)) {
    if (gamma > 0.0) return oracle_union_laplace(l->dim(), gamma);
    return std::nullopt;
  }
  if (const auto* a = dynamic_cast<const ArchimedeanModel*>(&model))
    return oracle_union_archimedean(*a, gamma);
  if (const auto* f = dynamic_cast<const FinitePatternModel*>(&model)) return brute_force_union(*f);
  return std::nullopt;
}

} // namespace rare_union
