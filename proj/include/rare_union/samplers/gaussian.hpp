#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "rare_union/math/random.hpp"
#include "rare_union/samplers/univariate.hpp"

namespace rare_union {

/// Law of X_rest given X_given = x_given for X ~ N(mu, sigma): normal with mean
/// mu_r + B (x_g − mu_g) and covariance Σ_rr − B Σ_gr (the Schur complement).
/// Everything is precomputed; sampling is a matrix-vector product.
class ConditionalGaussian {
public:
  ConditionalGaussian() = default;

  ConditionalGaussian(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma,
                      std::vector<std::size_t> given)
      : given_(std::move(given)) {
    const auto d = static_cast<std::size_t>(mu.size());
    std::vector<bool> is_given(d, false);
    for (auto g : given_) {
      if (g >= d || is_given[g]) throw std::invalid_argument("ConditionalGaussian: bad index");
      is_given[g] = true;
    }
    for (std::size_t k = 0; k < d; ++k)
      if (!is_given[k]) rest_.push_back(k);

    const auto ng = static_cast<Eigen::Index>(given_.size());
    const auto nr = static_cast<Eigen::Index>(rest_.size());
    Eigen::MatrixXd s_gg(ng, ng), s_rg(nr, ng), s_rr(nr, nr);
    for (Eigen::Index a = 0; a < ng; ++a)
      for (Eigen::Index b = 0; b < ng; ++b) s_gg(a, b) = sigma(idx(given_, a), idx(given_, b));
    for (Eigen::Index a = 0; a < nr; ++a) {
      for (Eigen::Index b = 0; b < ng; ++b) s_rg(a, b) = sigma(idx(rest_, a), idx(given_, b));
      for (Eigen::Index b = 0; b < nr; ++b) s_rr(a, b) = sigma(idx(rest_, a), idx(rest_, b));
    }
    mu_g_.resize(ng);
    mu_r_.resize(nr);
    for (Eigen::Index a = 0; a < ng; ++a) mu_g_(a) = mu(idx(given_, a));
    for (Eigen::Index a = 0; a < nr; ++a) mu_r_(a) = mu(idx(rest_, a));

    if (ng > 0) {
      Eigen::LLT<Eigen::MatrixXd> llt(s_gg);
      if (llt.info() != Eigen::Success)
        throw std::invalid_argument("ConditionalGaussian: conditioning block not positive-definite");
      coef_ = llt.solve(s_rg.transpose()).transpose();
      s_rr -= coef_ * s_rg.transpose();
    } else {
      coef_.resize(nr, 0);
    }
    if (nr > 0) {
      // Symmetrize before factoring; the subtraction above can leave 1-ulp skew.
      const Eigen::MatrixXd sym = 0.5 * (s_rr + s_rr.transpose());
      Eigen::LLT<Eigen::MatrixXd> llt(sym);
      if (llt.info() != Eigen::Success)
        throw std::invalid_argument("ConditionalGaussian: conditional covariance not positive-definite");
      chol_ = llt.matrixL();
      cov_ = sym;
    }
  }

  const std::vector<std::size_t>& given() const noexcept { return given_; }
  const std::vector<std::size_t>& rest() const noexcept { return rest_; }

  /// Conditional mean of the rest, in rest() order.
  Eigen::VectorXd mean(std::span<const double> x_given) const {
    Eigen::VectorXd dev(mu_g_.size());
    for (Eigen::Index a = 0; a < dev.size(); ++a)
      dev(a) = x_given[static_cast<std::size_t>(a)] - mu_g_(a);
    return mu_r_ + coef_ * dev;
  }

  const Eigen::MatrixXd& covariance() const noexcept { return cov_; }

  /// Draws the rest given x_given (both in the orders above).
  void sample(std::span<const double> x_given, Rng& rng, std::span<double> out_rest) const {
    const Eigen::VectorXd m = mean(x_given);
    const auto nr = m.size();
    Eigen::VectorXd z(nr);
    for (Eigen::Index a = 0; a < nr; ++a) z(a) = rng.normal();
    const Eigen::VectorXd v = m + chol_.triangularView<Eigen::Lower>() * z;
    for (Eigen::Index a = 0; a < nr; ++a) out_rest[static_cast<std::size_t>(a)] = v(a);
  }

  /// Draws the rest and writes a full d-vector, with the given coordinates
  /// copied from x_given.
  void complete(std::span<const double> x_given, Rng& rng, std::span<double> full) const {
    for (std::size_t a = 0; a < given_.size(); ++a) full[given_[a]] = x_given[a];
    if (rest_.empty()) return;
    double buf[64];
    sample(x_given, rng, std::span<double>(buf, rest_.size()));
    for (std::size_t a = 0; a < rest_.size(); ++a) full[rest_[a]] = buf[a];
  }

private:
  static Eigen::Index idx(const std::vector<std::size_t>& v, Eigen::Index a) {
    return static_cast<Eigen::Index>(v[static_cast<std::size_t>(a)]);
  }

  std::vector<std::size_t> given_, rest_;
  Eigen::VectorXd mu_g_, mu_r_;
  Eigen::MatrixXd coef_, chol_, cov_;
};

/// Parameters of a bivariate normal pair (X_i, X_j).
struct BivariateNormal {
  double mu1, mu2, sd1, sd2, rho;
};

inline constexpr int kDefaultGibbsBurnin = 100;

/// Approximate draw of (X_1, X_2) | min(X_1, X_2) > gamma by a Gibbs chain of
/// univariate truncated normals. Each call restarts from independent truncated
/// marginals, so successive draws are independent.
inline std::pair<double, double> gibbs_bivariate_truncated(const BivariateNormal& p, double gamma,
                                                           int burnin, Rng& rng) {
  if (burnin < 1) throw std::invalid_argument("gibbs_bivariate_truncated: burnin >= 1");
  const double s = std::sqrt((1.0 - p.rho) * (1.0 + p.rho));
  const double sd1c = p.sd1 * s, sd2c = p.sd2 * s;
  const double b12 = p.rho * p.sd1 / p.sd2, b21 = p.rho * p.sd2 / p.sd1;
  double x1 = sample_truncated_normal(p.mu1, p.sd1, gamma, rng);
  double x2 = sample_truncated_normal(p.mu2, p.sd2, gamma, rng);
  for (int k = 0; k < burnin; ++k) {
    x1 = sample_truncated_normal(p.mu1 + b12 * (x2 - p.mu2), sd1c, gamma, rng);
    x2 = sample_truncated_normal(p.mu2 + b21 * (x1 - p.mu1), sd2c, gamma, rng);
  }
  return {x1, x2};
}

} // namespace rare_union
