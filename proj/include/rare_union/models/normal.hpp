#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "rare_union/math/bivariate_normal.hpp"
#include "rare_union/math/special_functions.hpp"
#include "rare_union/models/dependence_model.hpp"
#include "rare_union/samplers/gaussian.hpp"
#include "rare_union/samplers/univariate.hpp"

namespace rare_union {

/// X ~ N(mu, Sigma), events X_i > γ.
class NormalModel : public DependenceModel {
public:
  NormalModel(Eigen::VectorXd mu, Eigen::MatrixXd sigma)
      : mu_(std::move(mu)), sigma_(std::move(sigma)) {
    const auto d = mu_.size();
    if (d < 1 || static_cast<std::size_t>(d) > kMaxEvents)
      throw ModelError("normal: need 1 <= d <= 64");
    if (sigma_.rows() != d || sigma_.cols() != d)
      throw ModelError("normal: covariance must be d x d");
    for (Eigen::Index i = 0; i < d; ++i) {
      if (!(sigma_(i, i) > 0.0)) throw ModelError("normal: variances must be positive");
      for (Eigen::Index j = 0; j < i; ++j)
        if (std::abs(sigma_(i, j) - sigma_(j, i)) > 1e-12 * std::sqrt(sigma_(i, i) * sigma_(j, j)))
          throw ModelError("normal: covariance must be symmetric");
    }
    sigma_ = 0.5 * (sigma_ + sigma_.transpose()).eval();
    Eigen::LLT<Eigen::MatrixXd> llt(sigma_);
    if (llt.info() != Eigen::Success) throw ModelError("normal: covariance not positive-definite");
    chol_ = llt.matrixL();
    sd_ = sigma_.diagonal().cwiseSqrt();
  }

  /// Unit variances, zero means, common correlation rho in (−1/(d−1), 1).
  static NormalModel equicorrelated(std::size_t d, double rho) {
    if (d < 1) throw ModelError("normal: need d >= 1");
    const double lower = d > 1 ? -1.0 / static_cast<double>(d - 1) : -1.0;
    if (!(rho > lower && rho < 1.0))
      throw ModelError("normal: equicorrelation rho must lie in (-1/(d-1), 1)");
    const auto n = static_cast<Eigen::Index>(d);
    Eigen::MatrixXd s = Eigen::MatrixXd::Constant(n, n, rho);
    s.diagonal().setOnes();
    NormalModel m(Eigen::VectorXd::Zero(n), s);
    m.equicorrelation_ = rho;
    return m;
  }

  std::size_t dim() const override { return static_cast<std::size_t>(mu_.size()); }

  Capabilities capabilities() const override {
    return {.marginal_prob = true,
            .pair_prob = true,
            .conditional_single = true,
            .conditional_pair = true,
            .arbitrary_sets = false};
  }

  std::string type_name() const override { return "normal"; }

  nlohmann::json to_json() const override {
    if (equicorrelation_)
      return {{"type", "normal"}, {"d", dim()}, {"rho", *equicorrelation_}};
    nlohmann::json j{{"type", "normal"}};
    j["mu"] = std::vector<double>(mu_.data(), mu_.data() + mu_.size());
    auto rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < sigma_.rows(); ++i) {
      std::vector<double> r(static_cast<std::size_t>(sigma_.cols()));
      for (Eigen::Index k = 0; k < sigma_.cols(); ++k) r[static_cast<std::size_t>(k)] = sigma_(i, k);
      rows.push_back(r);
    }
    j["sigma"] = rows;
    return j;
  }

  const Eigen::VectorXd& mean() const noexcept { return mu_; }
  const Eigen::MatrixXd& covariance() const noexcept { return sigma_; }
  double sd(std::size_t i) const { return sd_(static_cast<Eigen::Index>(i)); }
  double correlation(std::size_t i, std::size_t j) const {
    const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(j);
    return sigma_(a, b) / (sd_(a) * sd_(b));
  }
  /// Common correlation when built by equicorrelated(); kept for the one-factor
  /// oracle, which needs rho >= 0.
  std::optional<double> equicorrelation() const noexcept { return equicorrelation_; }

  void sample(Rng& rng, std::span<double> out) const override {
    const auto d = mu_.size();
    Eigen::VectorXd z(d);
    for (Eigen::Index k = 0; k < d; ++k) z(k) = rng.normal();
    const Eigen::VectorXd x = mu_ + chol_.triangularView<Eigen::Lower>() * z;
    for (Eigen::Index k = 0; k < d; ++k) out[static_cast<std::size_t>(k)] = x(k);
  }

  double marginal_survival(std::size_t i, double gamma) const override {
    check_index(i);
    return math::normal_sf(standardized(i, gamma));
  }

  double pair_survival(std::size_t i, std::size_t j, double gamma) const override {
    check_pair(i, j);
    return math::bivariate_normal_upper(standardized(i, gamma), standardized(j, gamma),
                                        correlation(i, j));
  }

  BivariateNormal pair_law(std::size_t i, std::size_t j) const {
    check_pair(i, j);
    return {mu_(static_cast<Eigen::Index>(i)), mu_(static_cast<Eigen::Index>(j)), sd(i), sd(j),
            correlation(i, j)};
  }

  /// Law of the other coordinates given X_i (one index) or (X_i, X_j).
  ConditionalGaussian conditional_law(std::vector<std::size_t> given) const {
    return ConditionalGaussian(mu_, sigma_, std::move(given));
  }

  Sampler conditional_given_exceedance(std::size_t i, double gamma) const override {
    check_index(i);
    auto law = conditional_law({i});
    const double m = mu_(static_cast<Eigen::Index>(i)), s = sd(i);
    return [law = std::move(law), m, s, gamma](Rng& rng, std::span<double> out) {
      const double xi = sample_truncated_normal(m, s, gamma, rng);
      law.complete(std::span<const double>(&xi, 1), rng, out);
    };
  }

  Sampler conditional_given_pair_exceedance(std::size_t i, std::size_t j,
                                            double gamma) const override {
    return conditional_given_pair_exceedance(i, j, gamma, kDefaultGibbsBurnin);
  }

  Sampler conditional_given_pair_exceedance(std::size_t i, std::size_t j, double gamma,
                                            int burnin) const {
    check_pair(i, j);
    auto law = conditional_law({i, j});
    const BivariateNormal p = pair_law(i, j);
    return [law = std::move(law), p, gamma, burnin](Rng& rng, std::span<double> out) {
      const auto [xi, xj] = gibbs_bivariate_truncated(p, gamma, burnin, rng);
      const double given[2] = {xi, xj};
      law.complete(given, rng, out);
    };
  }

protected:
  double standardized(std::size_t i, double gamma) const {
    const auto k = static_cast<Eigen::Index>(i);
    return (gamma - mu_(k)) / sd_(k);
  }

private:
  Eigen::VectorXd mu_;
  Eigen::MatrixXd sigma_;
  Eigen::MatrixXd chol_;
  Eigen::VectorXd sd_;
  std::optional<double> equicorrelation_;
};

/// Draw of X_{-i} | X_i = x_i (length d−1, increasing index order).
inline std::vector<double> sample_conditional_mvn(const NormalModel& model, std::size_t i,
                                                  double x_i, Rng& rng) {
  const auto law = model.conditional_law({i});
  std::vector<double> out(law.rest().size());
  law.sample(std::span<const double>(&x_i, 1), rng, out);
  return out;
}

/// Draw of X_{-i,-j} | (X_i, X_j) = (x_i, x_j) (length d−2).
inline std::vector<double> sample_conditional_mvn(const NormalModel& model, std::size_t i,
                                                  std::size_t j, double x_i, double x_j,
                                                  Rng& rng) {
  const auto law = model.conditional_law({i, j});
  std::vector<double> out(law.rest().size());
  const double given[2] = {x_i, x_j};
  law.sample(given, rng, out);
  return out;
}

inline std::pair<double, double> gibbs_bivariate_truncated(const NormalModel& model, std::size_t i,
                                                           std::size_t j, double gamma, int burnin,
                                                           Rng& rng) {
  return gibbs_bivariate_truncated(model.pair_law(i, j), gamma, burnin, rng);
}

/// Stationary Gaussian AR(1) path X_t = φX_{t−1} + ε_t of length d. Shares the
/// normal machinery; sampling runs the recursion directly.
class AR1Model : public NormalModel {
public:
  AR1Model(double phi, double sigma_eps, std::size_t d)
      : NormalModel(Eigen::VectorXd::Zero(checked_dim(d)), covariance_of(phi, sigma_eps, d)),
        phi_(phi), sigma_eps_(sigma_eps) {}

  std::string type_name() const override { return "ar1"; }
  nlohmann::json to_json() const override {
    return {{"type", "ar1"}, {"phi", phi_}, {"sigma_eps", sigma_eps_}, {"d", dim()}};
  }

  double phi() const noexcept { return phi_; }
  double sigma_eps() const noexcept { return sigma_eps_; }
  double stationary_sd() const { return sigma_eps_ / std::sqrt((1.0 - phi_) * (1.0 + phi_)); }

  void sample(Rng& rng, std::span<double> out) const override {
    double x = stationary_sd() * rng.normal();
    out[0] = x;
    for (std::size_t t = 1; t < out.size(); ++t) {
      x = phi_ * x + sigma_eps_ * rng.normal();
      out[t] = x;
    }
  }

private:
  static Eigen::Index checked_dim(std::size_t d) {
    if (d < 1 || d > kMaxEvents) throw ModelError("ar1: need 1 <= d <= 64");
    return static_cast<Eigen::Index>(d);
  }

  static Eigen::MatrixXd covariance_of(double phi, double sigma_eps, std::size_t d) {
    if (!(phi > -1.0 && phi < 1.0)) throw ModelError("ar1: need |phi| < 1");
    if (!(sigma_eps > 0.0)) throw ModelError("ar1: need sigma_eps > 0");
    const auto n = checked_dim(d);
    const double var = sigma_eps * sigma_eps / ((1.0 - phi) * (1.0 + phi));
    Eigen::MatrixXd s(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        s(i, j) = var * std::pow(phi, static_cast<double>(std::abs(i - j)));
    return s;
  }

  double phi_;
  double sigma_eps_;
};

} // namespace rare_union
