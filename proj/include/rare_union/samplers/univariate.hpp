#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "rare_union/math/random.hpp"

namespace rare_union {

/// Rate of the shifted-exponential proposal for N(0,1) | Z > a; maximizes the
/// acceptance probability (Robert 1995).
inline double truncation_proposal_rate(double a) {
  return 0.5 * (a + std::sqrt(a * a + 4.0));
}

/// Z ~ N(0,1) conditioned on Z > a.
///
/// a >= 0: proposal a + Exp(λ), accepted with probability exp(−(z−λ)²/2).
/// a < 0: plain rejection from N(0,1); acceptance P(Z > a) > 1/2.
/// If `proposals` is given, the number of proposals used is added to it.
inline double sample_truncated_std_normal(double a, Rng& rng, std::size_t* proposals = nullptr) {
  if (a < 0.0) {
    for (;;) {
      if (proposals) ++*proposals;
      const double z = rng.normal();
      if (z > a) return z;
    }
  }
  const double lambda = truncation_proposal_rate(a);
  for (;;) {
    if (proposals) ++*proposals;
    const double z = a + rng.exponential() / lambda;
    const double t = z - lambda;
    if (rng.uniform() <= std::exp(-0.5 * t * t)) return z;
  }
}

/// X ~ N(mean, sd²) conditioned on X > lower.
inline double sample_truncated_normal(double mean, double sd, double lower, Rng& rng) {
  return mean + sd * sample_truncated_std_normal((lower - mean) / sd, rng);
}

struct InverseGaussianParams {
  double mu;      // mean
  double lambda;  // shape

  InverseGaussianParams(double mean, double shape) : mu(mean), lambda(shape) {
    if (!(mean > 0.0) || !(shape > 0.0))
      throw std::invalid_argument("inverse Gaussian needs mu > 0 and lambda > 0");
  }
};

/// IG(μ, λ) by the Michael–Schucany–Haas transformation with one rejection
/// step. The smaller root of the quadratic is taken as μ²/x₊ to avoid
/// cancellation when μy/λ is large.
inline double sample_inverse_gaussian(const InverseGaussianParams& p, Rng& rng) {
  const double nu = rng.normal();
  const double y = nu * nu;
  const double mu = p.mu, lambda = p.lambda;
  const double larger = mu + (mu / (2.0 * lambda)) *
                                 (mu * y + std::sqrt(4.0 * mu * lambda * y + mu * mu * y * y));
  const double x = mu * mu / larger;
  if (rng.uniform() <= mu / (mu + x)) return x;
  return larger;
}

} // namespace rare_union
