#pragma once

// Mixing ("frailty") laws whose Laplace transforms are the inverse generators
// of the supported Archimedean families.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include "rare_union/math/random.hpp"

namespace rare_union {

/// Gamma(shape, 1) by Marsaglia–Tsang; shapes below 1 use the U^{1/a} boost.
inline double sample_gamma(double shape, Rng& rng) {
  if (!(shape > 0.0)) throw std::invalid_argument("sample_gamma: shape must be positive");
  if (shape < 1.0) return sample_gamma(shape + 1.0, rng) * std::pow(rng.uniform(), 1.0 / shape);
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

/// Positive stable law with Laplace transform exp(−s^a), 0 < a <= 1
/// (Kanter's representation).
inline double sample_positive_stable(double a, Rng& rng) {
  if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("sample_positive_stable: 0 < a <= 1");
  if (a == 1.0) return 1.0;
  const double theta = std::numbers::pi * rng.uniform();
  const double w = rng.exponential();
  const double s = std::sin(theta);
  return std::sin(a * theta) / std::pow(s, 1.0 / a) *
         std::pow(std::sin((1.0 - a) * theta) / w, (1.0 - a) / a);
}

/// Logarithmic series law P(V = k) = −p^k / (k log(1−p)), k >= 1, by Kemp's
/// "LK" algorithm. The family parameter enters as log(1−p) to keep precision
/// when p is close to 1.
inline std::uint64_t sample_log_series(double log1m_p, Rng& rng) {
  if (!(log1m_p < 0.0)) throw std::invalid_argument("sample_log_series: need 0 < p < 1");
  const double p = -std::expm1(log1m_p);
  const double v = rng.uniform();
  if (v >= p) return 1;
  const double q = -std::expm1(log1m_p * rng.uniform());
  if (v <= q * q) {
    const double k = std::floor(1.0 + std::log(v) / std::log(q));
    return k < 1.8e19 ? static_cast<std::uint64_t>(k) : UINT64_MAX;
  }
  return v <= q ? 2 : 1;
}

/// Geometric law on {1, 2, ...}: P(V = k) = (1−t) t^{k−1}, 0 <= t < 1.
inline std::uint64_t sample_geometric(double t, Rng& rng) {
  if (!(t >= 0.0 && t < 1.0)) throw std::invalid_argument("sample_geometric: 0 <= t < 1");
  if (t == 0.0) return 1;
  const double k = std::floor(std::log(rng.uniform()) / std::log(t));
  return 1 + (k < 1.8e19 ? static_cast<std::uint64_t>(k) : UINT64_MAX - 1);
}

} // namespace rare_union
