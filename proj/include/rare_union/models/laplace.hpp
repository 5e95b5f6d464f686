#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>

#include "rare_union/math/quadrature.hpp"
#include "rare_union/math/special_functions.hpp"
#include "rare_union/models/dependence_model.hpp"
#include "rare_union/samplers/laplace.hpp"

namespace rare_union {

/// Symmetric multivariate Laplace law X = √R·Y, R ~ Exp(1), Y ~ N(0, I_d).
/// Each X_i is univariate Laplace with variance 1.
class LaplaceModel : public DependenceModel {
public:
  explicit LaplaceModel(std::size_t d) : d_(d) {
    if (d < 1 || d > kMaxEvents) throw ModelError("laplace: need 1 <= d <= 64");
  }

  std::size_t dim() const override { return d_; }
  Capabilities capabilities() const override {
    return {.marginal_prob = true,
            .pair_prob = true,
            .conditional_single = true,
            .conditional_pair = false,
            .arbitrary_sets = false};
  }
  std::string type_name() const override { return "laplace"; }
  nlohmann::json to_json() const override { return {{"type", "laplace"}, {"d", d_}}; }

  void sample(Rng& rng, std::span<double> out) const override {
    const double s = std::sqrt(rng.exponential());
    for (auto& x : out) x = s * rng.normal();
  }

  /// ½e^{−√2γ} above zero, by symmetry below.
  static double survival(double gamma) {
    const double t = 0.5 * std::exp(-std::numbers::sqrt2 * std::abs(gamma));
    return gamma > 0.0 ? t : 1.0 - t;
  }

  double marginal_survival(std::size_t i, double gamma) const override {
    check_index(i);
    return survival(gamma);
  }

  /// ∫₀^∞ e^{−r} Φ̄(γ/√r)² dr.
  double pair_survival(std::size_t i, std::size_t j, double gamma) const override {
    check_pair(i, j);
    return joint_survival(2, gamma);
  }

  /// P(X_1 > γ, ..., X_m > γ) = ∫₀^∞ e^{−r} Φ̄(γ/√r)^m dr.
  static double joint_survival(std::size_t m, double gamma) {
    if (m == 0) return 1.0;
    const double p = static_cast<double>(m);
    auto f = [gamma, p](double r) {
      if (r <= 0.0) return gamma < 0.0 ? 1.0 : (gamma == 0.0 ? std::pow(0.5, p) : 0.0);
      return std::exp(-r + p * std::log(math::normal_sf(gamma / std::sqrt(r))));
    };
    math::QuadratureOptions opt;
    opt.initial_pieces = 32;
    return math::integrate_to_infinity(f, 0.0, opt).value;
  }

  Sampler conditional_given_exceedance(std::size_t i, double gamma) const override {
    check_index(i);
    if (gamma > 0.0) {
      return [i, gamma](Rng& rng, std::span<double> out) {
        laplace_conditional_exceedance(i, gamma, rng, out);
      };
    }
    // P(A_i) >= 1/2 here, so plain rejection is cheap.
    return [this, i, gamma](Rng& rng, std::span<double> out) {
      do sample(rng, out);
      while (!(out[i] > gamma));
    };
  }

private:
  std::size_t d_;
};

} // namespace rare_union
