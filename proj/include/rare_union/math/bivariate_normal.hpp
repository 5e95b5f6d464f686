#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rare_union/math/quadrature.hpp"
#include "rare_union/math/special_functions.hpp"

namespace rare_union::math {

/// P(Z1 > h1, Z2 > h2) for standard normals with correlation rho, |rho| < 1.
///
/// Computed as ∫_{h}^{∞} φ(z) Φ̄((k − ρz)/√(1−ρ²)) dz with h = max(h1, h2)
/// as the outer threshold, so the integrand peaks near the lower limit and the
/// result keeps relative accuracy deep in the tail. The function is symmetric
/// in (h1, h2) bit for bit.
inline double bivariate_normal_upper(double h1, double h2, double rho,
                                     const QuadratureOptions& opt = {}) {
  if (!(rho > -1.0 && rho < 1.0))
    throw std::domain_error("bivariate_normal_upper: need |rho| < 1");
  if (rho == 0.0) return normal_sf(h1) * normal_sf(h2);
  const double h = std::max(h1, h2);
  const double k = std::min(h1, h2);
  const double s = std::sqrt((1.0 - rho) * (1.0 + rho));
  auto f = [&](double z) { return normal_pdf(z) * normal_sf((k - rho * z) / s); };
  // φ(z) < 1e-300 beyond |z| = 37.5, so the tail above is numerically empty.
  const double upper = std::max(h, 0.0) + 38.5;
  if (h >= upper) return 0.0;
  QuadratureOptions o = opt;
  o.initial_pieces = std::max<std::size_t>(o.initial_pieces, 16);
  // Resolve the region next to the lower limit where the mass concentrates.
  const double near = std::min(upper, h + 4.0 / std::max(1.0, std::abs(h)));
  double value = integrate(f, h, near, o).value;
  if (near < upper) value += integrate(f, near, upper, o).value;
  return value;
}

} // namespace rare_union::math
