#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "rare_union/math/random.hpp"
#include "rare_union/samplers/univariate.hpp"

namespace rare_union {

/// Y_{i,x} ~ (Y_i | √R·Y_i = x): the square root of IG(√2|x|, 2x²), with the
/// sign of x.
inline double sample_laplace_mixing_normal(double x, Rng& rng) {
  const double ax = std::abs(x);
  const double w = sample_inverse_gaussian({std::numbers::sqrt2 * ax, 2.0 * ax * ax}, rng);
  return std::copysign(std::sqrt(w), x);
}

/// One draw of X | X_i > gamma for X = √R·Y (R ~ Exp(1), Y ~ N(0, I)):
///   X_i = gamma + Exp(√2), Y_{i,X_i} = √IG(√2 X_i, 2 X_i²),
///   X_{-i} = X_i · Y_{-i} / Y_{i,X_i}.
inline void laplace_conditional_exceedance(std::size_t i, double gamma, Rng& rng,
                                           std::span<double> out) {
  if (!(gamma > 0.0))
    throw std::invalid_argument("laplace_conditional_exceedance: gamma must be positive");
  if (i >= out.size()) throw std::out_of_range("laplace_conditional_exceedance: index");
  const double xi = gamma + rng.exponential() / std::numbers::sqrt2;
  const double scale = xi / sample_laplace_mixing_normal(xi, rng);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = (k == i) ? xi : scale * rng.normal();
}

inline std::vector<double> laplace_conditional_exceedance(std::size_t d, std::size_t i,
                                                          double gamma, Rng& rng) {
  std::vector<double> out(d);
  laplace_conditional_exceedance(i, gamma, rng, out);
  return out;
}

} // namespace rare_union
