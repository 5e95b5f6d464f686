#pragma once

// Rare-event efficiency of the first-order estimator: empirical ratio
// diagnostics and rule-based classification for the model families treated
// analytically (Ledford–Tawn copulas, Archimedean copulas, type-I elliptical
// laws including the normal, and AR(1)).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "rare_union/models/archimedean.hpp"
#include "rare_union/models/dependence_model.hpp"
#include "rare_union/models/normal.hpp"

namespace rare_union {

enum class EfficiencyLevel { BRE, LE, Inefficient, Unknown };

inline std::string to_string(EfficiencyLevel l) {
  switch (l) {
  case EfficiencyLevel::BRE: return "BRE";
  case EfficiencyLevel::LE: return "LE";
  case EfficiencyLevel::Inefficient: return "Inefficient";
  case EfficiencyLevel::Unknown: return "Unknown";
  }
  return "?";
}

struct EfficiencyVerdict {
  EfficiencyLevel level = EfficiencyLevel::Unknown;
  std::map<std::string, double> diagnostics;
  std::vector<std::string> rules_fired;

  nlohmann::json to_json() const {
    nlohmann::json diag = nlohmann::json::object();
    for (const auto& [k, v] : diagnostics) diag[k] = v;
    return {{"level", to_string(level)}, {"diagnostics", diag}, {"rules_fired", rules_fired}};
  }
};

//==============================================================================
// Empirical ratio diagnostic
//==============================================================================

struct EfficiencyRatioTable {
  std::vector<double> gammas;
  std::vector<double> epsilons;
  /// ratios[e][g] = max_{i<j} P(A_iA_j) / max_k P(A_k)^{2−ε_e} at gammas[g].
  std::vector<std::vector<double>> ratios;
  /// Per ε: "constant", "increasing", "decreasing" or "mixed".
  std::vector<std::string> trend;

  nlohmann::json to_json() const {
    auto rows = nlohmann::json::array();
    for (std::size_t e = 0; e < epsilons.size(); ++e)
      rows.push_back({{"epsilon", epsilons[e]}, {"ratios", ratios[e]}, {"trend", trend[e]}});
    return {{"gammas", gammas}, {"series", rows}};
  }
};

inline std::string classify_trend(const std::vector<double>& v, double tol = 1e-9) {
  if (v.size() < 2) return "constant";
  bool constant = true, inc = true, dec = true;
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (std::abs(v[k] - v[0]) > tol * std::max(1.0, std::abs(v[0]))) constant = false;
    if (!(v[k] > v[k - 1])) inc = false;
    if (!(v[k] < v[k - 1])) dec = false;
  }
  return constant ? "constant" : inc ? "increasing" : dec ? "decreasing" : "mixed";
}

/// Ratio of the largest pair probability to the largest marginal raised to
/// 2 − ε. Bounded at ε = 0 is the BRE condition for the first-order
/// estimator; bounded for every ε > 0 is the LE condition.
inline EfficiencyRatioTable empirical_efficiency_ratio(const DependenceModel& model,
                                                       const std::vector<double>& gamma_grid,
                                                       const std::vector<double>& epsilons = {0.0, 0.1}) {
  if (model.dim() < 2) throw std::invalid_argument("empirical_efficiency_ratio: needs d >= 2");
  EfficiencyRatioTable t;
  t.gammas = gamma_grid;
  t.epsilons = epsilons;
  std::vector<double> max_pair, max_marg;
  for (double g : gamma_grid) {
    double mp = 0.0, mm = 0.0;
    for (std::size_t i = 0; i < model.dim(); ++i) {
      mm = std::max(mm, model.marginal_survival(i, g));
      for (std::size_t j = i + 1; j < model.dim(); ++j) mp = std::max(mp, model.pair_survival(i, j, g));
    }
    max_pair.push_back(mp);
    max_marg.push_back(mm);
  }
  for (double eps : epsilons) {
    std::vector<double> r;
    for (std::size_t g = 0; g < gamma_grid.size(); ++g) {
      const double denom = eps == 0.0 ? max_marg[g] * max_marg[g] : std::pow(max_marg[g], 2.0 - eps);
      r.push_back(max_pair[g] / denom);
    }
    t.trend.push_back(classify_trend(r));
    t.ratios.push_back(std::move(r));
  }
  return t;
}

//==============================================================================
// Ledford–Tawn residual tail index
//==============================================================================

/// Slowly varying factor L in P(both > x) ~ L(x) x^{−1/η} (Fréchet scale).
struct SlowlyVarying {
  enum class Kind { Constant, LogPower, Custom };
  Kind kind = Kind::Constant;
  /// Constant value, or the exponent e of L(x) ∝ (log x)^e.
  double value = 1.0;
  /// For Custom: whether L(x) → ∞.
  bool diverges = false;
  std::string description;

  static SlowlyVarying constant(double c, std::string desc = {}) {
    return {Kind::Constant, c, false, desc.empty() ? "constant" : std::move(desc)};
  }
  static SlowlyVarying log_power(double exponent) {
    return {Kind::LogPower, exponent, exponent > 0.0, "(log x)^e"};
  }
  static SlowlyVarying custom(bool diverges, std::string desc) {
    return {Kind::Custom, 0.0, diverges, std::move(desc)};
  }
  bool tends_to_infinity() const {
    return kind == Kind::LogPower ? value > 0.0 : kind == Kind::Custom ? diverges : false;
  }
};

struct LedfordTawnParams {
  double eta = 0.5;
  SlowlyVarying L = SlowlyVarying::constant(1.0);
};

/// BRE if η < 1/2, or η = 1/2 and L stays bounded; LE if η = 1/2 and L → ∞;
/// inefficient when η > 1/2.
inline EfficiencyVerdict classify_ledford_tawn(const LedfordTawnParams& p) {
  if (!(p.eta > 0.0 && p.eta <= 1.0)) throw std::invalid_argument("classify_ledford_tawn: eta in (0,1]");
  EfficiencyVerdict v;
  v.diagnostics["eta"] = p.eta;
  if (p.L.kind != SlowlyVarying::Kind::Custom) v.diagnostics["L_value"] = p.L.value;
  if (p.eta < 0.5) {
    v.level = EfficiencyLevel::BRE;
    v.rules_fired.push_back("eta < 1/2");
  } else if (p.eta == 0.5) {
    if (p.L.tends_to_infinity()) {
      v.level = EfficiencyLevel::LE;
      v.rules_fired.push_back("eta = 1/2 and L -> infinity");
    } else {
      v.level = EfficiencyLevel::BRE;
      v.rules_fired.push_back("eta = 1/2 and L bounded");
    }
  } else {
    v.level = EfficiencyLevel::Inefficient;
    v.rules_fired.push_back("eta > 1/2");
  }
  return v;
}

/// Gaussian copula: η = (1+ρ)/2, L(x) ∝ (log x)^{−ρ/(1+ρ)}.
inline LedfordTawnParams gaussian_copula_ledford_tawn(double rho) {
  if (!(rho > -1.0 && rho < 1.0)) throw std::invalid_argument("gaussian copula: |rho| < 1");
  return {(1.0 + rho) / 2.0, SlowlyVarying::log_power(-rho / (1.0 + rho))};
}

struct LedfordTawnRow {
  int number;
  const char* name;
  double eta;
  const char* L;
};

/// Residual tail indices of common copulas (Heffernan's directory numbering).
inline const std::array<LedfordTawnRow, 18>& ledford_tawn_table() {
  static const std::array<LedfordTawnRow, 18> rows = {{
      {1, "Ali-Mikhail-Haq", 0.5, "1+tau"},
      {2, "BB10 in Joe", 0.5, "1+theta/tau"},
      {3, "Frank", 0.5, "delta/(1-exp(-delta))"},
      {4, "Morgenstern", 0.5, "1+tau"},
      {5, "Plackett", 0.5, "delta"},
      {6, "Crowder", 0.5, "1+(theta-1)/tau"},
      {7, "BB2 in Joe", 0.5, "theta(delta+1)+1"},
      {8, "Pareto", 0.5, "1+delta"},
      {9, "Raftery", 0.5, "delta/(1-delta)"},
      {11, "Joe", 1.0, "2-2^(1/delta)"},
      {12, "BB8 in Joe", 1.0, "2-2(1-delta)^(theta-1)"},
      {13, "BB6 in Joe", 1.0, "2-2^(1/(delta theta))"},
      {14, "Extreme value", 1.0, "2-V(1,1)"},
      {15, "B11 in Joe", 1.0, "delta"},
      {16, "BB1 in Joe", 1.0, "2-2^(1/delta)"},
      {17, "BB3 in Joe", 1.0, "2-2^(1/theta)"},
      {18, "BB4 in Joe", 1.0, "2^(-1/delta)"},
      {19, "BB7 in Joe", 1.0, "2-2^(1/theta)"},
  }};
  return rows;
}

/// Every row of the directory has a constant L.
inline EfficiencyVerdict classify_ledford_tawn(const LedfordTawnRow& row) {
  auto v = classify_ledford_tawn(LedfordTawnParams{row.eta, SlowlyVarying::constant(1.0, row.L)});
  v.diagnostics["row"] = row.number;
  return v;
}

//==============================================================================
// Archimedean copulas
//==============================================================================

enum class EfficientSet { All, AllExceptZero, OnlyOne, None };

struct ArchimedeanRow {
  int number;
  const char* name;
  const char* generator;
  double lo;
  bool lo_closed;
  double hi;
  bool hi_closed;
  EfficientSet efficient;

  bool valid(double theta) const {
    if (std::isnan(theta)) return false;
    const bool above = lo_closed ? theta >= lo : theta > lo;
    const bool below = hi_closed ? theta <= hi : theta < hi;
    return above && below;
  }
};

/// Archimedean families with their valid θ range and the θ for which the
/// generator's inverse has a bounded second derivative at 0 (so the
/// first-order estimator has BRE). Numbering follows Nelsen's Table 4.1.
inline const std::array<ArchimedeanRow, 22>& archimedean_table() {
  constexpr double inf = std::numeric_limits<double>::infinity();
  using E = EfficientSet;
  static const std::array<ArchimedeanRow, 22> rows = {{
      {1, "Clayton", "(t^-theta - 1)/theta", -1, true, inf, false, E::All},
      {2, "", "(1-t)^theta", 1, true, inf, false, E::OnlyOne},
      {3, "Ali-Mikhail-Haq", "log((1-theta(1-t))/t)", -1, true, 1, false, E::All},
      {4, "Gumbel-Hougaard", "(-log t)^theta", 1, true, inf, false, E::OnlyOne},
      {5, "Frank", "-log((exp(-theta t)-1)/(exp(-theta)-1))", -inf, false, inf, false, E::AllExceptZero},
      {6, "", "-log(1-(1-t)^theta)", 1, true, inf, false, E::OnlyOne},
      {7, "", "-log(theta t + 1 - theta)", 0, false, 1, true, E::All},
      {8, "", "(1-t)/(1+(theta-1)t)", 1, true, inf, false, E::All},
      {9, "", "log(1 - theta log t)", 0, false, 1, true, E::All},
      {10, "", "log(2 t^-theta - 1)", 0, false, 1, true, E::All},
      {11, "", "log(2 - t^theta)", 0, false, 0.5, true, E::All},
      {12, "", "(1/t - 1)^theta", 1, true, inf, false, E::OnlyOne},
      {13, "", "(1 - log t)^theta - 1", 0, false, inf, false, E::All},
      {14, "", "(t^(-1/theta) - 1)^theta", 1, true, inf, false, E::OnlyOne},
      {15, "", "(1 - t^(1/theta))^theta", 1, true, inf, false, E::OnlyOne},
      {16, "", "(theta/t + 1)(1 - t)", 0, true, inf, false, E::All},
      {17, "", "-log(((1+t)^-theta - 1)/(2^-theta - 1))", -inf, false, inf, false, E::AllExceptZero},
      {18, "", "exp(theta/(t-1))", 2, true, inf, false, E::None},
      {19, "", "exp(theta/t) - exp(theta)", 0, false, inf, false, E::All},
      {20, "", "exp(t^-theta) - e", 0, false, inf, false, E::All},
      {21, "", "1 - (1 - (1-t)^theta)^(1/theta)", 1, true, inf, false, E::OnlyOne},
      {22, "", "arcsin(1 - t^theta)", 0, false, 1, true, E::All},
  }};
  return rows;
}

/// BRE when θ lies in the row's efficient set. Outside it the sufficient
/// condition fails and the verdict is Unknown.
inline EfficiencyVerdict classify_archimedean(int row_number, double theta) {
  const auto& rows = archimedean_table();
  const auto it = std::find_if(rows.begin(), rows.end(),
                               [&](const ArchimedeanRow& r) { return r.number == row_number; });
  if (it == rows.end()) throw std::invalid_argument("classify_archimedean: unknown row");
  if (!it->valid(theta)) throw std::invalid_argument("classify_archimedean: theta outside valid range");
  EfficiencyVerdict v;
  v.diagnostics["row"] = row_number;
  v.diagnostics["theta"] = theta;
  bool efficient = false;
  switch (it->efficient) {
  case EfficientSet::All: efficient = true; break;
  case EfficientSet::AllExceptZero: efficient = theta != 0.0; break;
  case EfficientSet::OnlyOne: efficient = theta == 1.0; break;
  case EfficientSet::None: efficient = false; break;
  }
  if (efficient) {
    v.level = EfficiencyLevel::BRE;
    v.rules_fired.push_back("inverse generator has bounded second derivative at 0");
  } else {
    v.level = EfficiencyLevel::Unknown;
    v.rules_fired.push_back("theta outside the efficient set; sufficient condition not met");
  }
  return v;
}

inline EfficiencyVerdict classify_archimedean(ArchimedeanFamily family, double theta) {
  switch (family) {
  case ArchimedeanFamily::Clayton: return classify_archimedean(1, theta);
  case ArchimedeanFamily::AliMikhailHaq: return classify_archimedean(3, theta);
  case ArchimedeanFamily::GumbelHougaard: return classify_archimedean(4, theta);
  case ArchimedeanFamily::Frank: return classify_archimedean(5, theta);
  }
  throw std::invalid_argument("classify_archimedean: unknown family");
}

//==============================================================================
// Type-I elliptical laws
//==============================================================================

/// Radial tail F̄ and scaling function w of a Gumbel-domain radial law.
struct RadialLaw {
  std::string name;
  std::function<double(double)> survival;
  std::function<double(double)> w;
  /// Exponent δ of the Weibull-like tail exp(−r x^δ), when known.
  double delta = 2.0;

  /// Radial law of a bivariate normal: F̄(x) = e^{−x²/2}, w(x) = x.
  static RadialLaw normal() {
    return {"normal", [](double x) { return std::exp(-0.5 * x * x); }, [](double x) { return x; }, 2.0};
  }

  /// Kotz type III: F̄(x) = K x^N exp(−r x^δ), w(x) = rδx^{δ−1}.
  static RadialLaw kotz3(double K, double N, double r, double delta) {
    if (!(K > 0.0 && r > 0.0 && delta > 0.0 && N >= 0.0))
      throw std::invalid_argument("kotz3: need K, r, delta > 0 and N >= 0");
    return {"kotz3",
            [=](double x) { return K * std::pow(x, N) * std::exp(-r * std::pow(x, delta)); },
            [=](double x) { return r * delta * std::pow(x, delta - 1.0); }, delta};
  }
};

struct EllipticalClassifierInput {
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;
  RadialLaw radial = RadialLaw::normal();
};

/// Pair quantities with the pair ordered so that σ_i >= σ_j.
struct PairTail {
  std::size_t i = 0, j = 0;
  double a = 1.0;     // σ_j / σ_i
  double rho = 0.0;
  double kappa = 0.0;
  double mu = 0.0;
  bool rho_at_least_a = false;
};

inline PairTail pair_tail(double mu_i, double mu_j, double sd_i, double sd_j, double rho) {
  PairTail p;
  if (sd_j > sd_i) {
    std::swap(mu_i, mu_j);
    std::swap(sd_i, sd_j);
  }
  p.a = sd_j / sd_i;
  p.rho = rho;
  p.rho_at_least_a = rho >= p.a;
  if (p.rho_at_least_a) {
    p.kappa = sd_j;
    p.mu = mu_j;
  } else {
    const double denom = sd_i * sd_i - 2.0 * rho * sd_i * sd_j + sd_j * sd_j;
    p.kappa = std::sqrt(sd_i * sd_i * sd_j * sd_j * (1.0 - rho * rho) / denom);
    // Non-zero means: index-repaired literal formula, experimental.
    p.mu = (mu_i - p.a * rho * (mu_i + mu_j) + p.a * p.a * mu_j) / (p.a * (1.0 - rho * rho));
  }
  return p;
}

inline PairTail pair_tail(const EllipticalClassifierInput& in, std::size_t i, std::size_t j) {
  const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(j);
  const double si = std::sqrt(in.sigma(a, a)), sj = std::sqrt(in.sigma(b, b));
  PairTail p = pair_tail(in.mu(a), in.mu(b), si, sj, in.sigma(a, b) / (si * sj));
  p.i = sj > si ? j : i;
  p.j = sj > si ? i : j;
  return p;
}

/// Rule for Kotz III laws with tail exponent δ: BRE if σ₁^δ > 2κ^δ, or
/// equality with δ > 1 and μ₁ > μ; LE on equality; inefficient otherwise.
inline EfficiencyVerdict classify_kotz3(double K, double N, double r, double delta, double sigma1,
                                        double kappa, double mu1, double mu) {
  if (!(K > 0.0 && N > 0.0 && r > 0.0 && delta > 0.0))
    throw std::invalid_argument("classify_kotz3: K, N, r, delta must be positive");
  EfficiencyVerdict v;
  const double lhs = std::pow(sigma1, delta), rhs = 2.0 * std::pow(kappa, delta);
  v.diagnostics = {{"sigma1", sigma1}, {"kappa", kappa}, {"mu1", mu1}, {"mu", mu}, {"delta", delta}};
  const double tol = 1e-12 * std::max(lhs, rhs);
  if (lhs - rhs > tol) {
    v.level = EfficiencyLevel::BRE;
    v.rules_fired.push_back("sigma1^delta > 2 kappa^delta");
  } else if (std::abs(lhs - rhs) <= tol) {
    if (delta > 1.0 && mu1 > mu) {
      v.level = EfficiencyLevel::BRE;
      v.rules_fired.push_back("sigma1^delta = 2 kappa^delta, delta > 1 and mu1 > mu");
    } else {
      v.level = EfficiencyLevel::LE;
      v.rules_fired.push_back("sigma1^delta = 2 kappa^delta");
    }
  } else {
    v.level = EfficiencyLevel::Inefficient;
    v.rules_fired.push_back("sigma1^delta < 2 kappa^delta");
  }
  return v;
}

/// Normal laws (Kotz III with δ = 2). κ is the largest κ_ij and μ the
/// largest μ_ij among the pairs attaining it; σ₁ is the largest standard
/// deviation and μ₁ the largest mean among components attaining σ₁.
inline EfficiencyVerdict classify_normal(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma) {
  const auto d = static_cast<std::size_t>(mu.size());
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) throw std::invalid_argument("classify_normal: covariance not positive-definite");
  const EllipticalClassifierInput in{mu, sigma, RadialLaw::normal()};

  double sigma1 = 0.0;
  for (std::size_t k = 0; k < d; ++k)
    sigma1 = std::max(sigma1, std::sqrt(sigma(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k))));
  double mu1 = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < d; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    if (std::sqrt(sigma(kk, kk)) == sigma1) mu1 = std::max(mu1, mu(kk));
  }

  if (d < 2) {
    EfficiencyVerdict v;
    v.level = EfficiencyLevel::BRE;
    v.rules_fired.push_back("single event: no pairs");
    v.diagnostics = {{"sigma1", sigma1}, {"mu1", mu1}};
    return v;
  }

  double kappa = 0.0, mu_k = -std::numeric_limits<double>::infinity();
  std::size_t branch_ge = 0, branch_lt = 0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      const PairTail p = pair_tail(in, i, j);
      (p.rho_at_least_a ? branch_ge : branch_lt)++;
      if (p.kappa > kappa * (1.0 + 1e-14)) {
        kappa = p.kappa;
        mu_k = p.mu;
      } else if (std::abs(p.kappa - kappa) <= 1e-14 * kappa) {
        mu_k = std::max(mu_k, p.mu);
      }
    }

  EfficiencyVerdict v = classify_kotz3(1.0, 1.0, 0.5, 2.0, sigma1, kappa, mu1, mu_k);
  v.diagnostics["kappa_sq"] = kappa * kappa;
  v.diagnostics["pairs_rho_ge_a"] = static_cast<double>(branch_ge);
  v.diagnostics["pairs_rho_lt_a"] = static_cast<double>(branch_lt);
  v.rules_fired.insert(v.rules_fired.begin(), "normal: Kotz III rule with delta = 2");

  // Independent-looking pairs on the boundary: the Ledford–Tawn form with
  // η = 1/2 and constant L would give BRE. Reported, not applied.
  if (v.level == EfficiencyLevel::LE) {
    bool all_uncorrelated = true;
    for (std::size_t i = 0; i < d && all_uncorrelated; ++i)
      for (std::size_t j = i + 1; j < d; ++j)
        if (sigma(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != 0.0) {
          all_uncorrelated = false;
          break;
        }
    if (all_uncorrelated) {
      v.rules_fired.push_back("note: independent components; Ledford-Tawn eta = 1/2 with constant L would give BRE");
      v.diagnostics["eta"] = 0.5;
    }
  }
  return v;
}

inline EfficiencyVerdict classify_normal(const NormalModel& model) {
  return classify_normal(model.mean(), model.covariance());
}

/// Stationary AR(1): the first-order estimator has BRE for every |φ| < 1. The
/// lag of the largest pair probability is 1 for φ > 0 and 2 for φ < 0.
inline EfficiencyVerdict classify_ar1(double phi) {
  if (!(phi > -1.0 && phi < 1.0)) throw std::invalid_argument("classify_ar1: need |phi| < 1");
  EfficiencyVerdict v;
  v.level = EfficiencyLevel::BRE;
  v.diagnostics["phi"] = phi;
  if (phi > 0.0) {
    v.diagnostics["max_pair_lag"] = 1;
    v.diagnostics["conditional_variance_ratio"] = 1.0 - phi * phi;
    v.rules_fired.push_back("phi > 0: adjacent pair dominates, conditional variance below marginal");
  } else if (phi < 0.0) {
    v.diagnostics["max_pair_lag"] = 2;
    v.diagnostics["conditional_variance_ratio"] = (1.0 - std::pow(phi, 4));
    v.rules_fired.push_back("phi < 0: lag-2 pair dominates, conditional variance below marginal");
  } else {
    v.diagnostics["max_pair_lag"] = 0;
    v.rules_fired.push_back("phi = 0: independence");
  }
  return v;
}

//==============================================================================
// Savage condition and tail asymptotics
//==============================================================================

struct SavageResult {
  bool satisfied = false;
  Eigen::VectorXd solution;  // Σ⁻¹t
};

/// Σ⁻¹t > 0 componentwise.
inline SavageResult savage_condition(const Eigen::MatrixXd& sigma, const Eigen::VectorXd& t) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(sigma);
  if (!lu.isInvertible()) throw std::invalid_argument("savage_condition: singular covariance");
  SavageResult r;
  r.solution = lu.solve(t);
  r.satisfied = (r.solution.array() > 0.0).all();
  return r;
}

/// Leading term F̄(υ)/√(2π υ w(υ)) of P(X_i > γ), υ = (γ − μ_i)/σ_i.
inline double berman_univariate_asymptotic(const RadialLaw& radial, double mu_i, double sigma_i,
                                           double gamma) {
  const double u = (gamma - mu_i) / sigma_i;
  const double w = radial.w(u);
  if (!(u > 0.0) || !(w > 0.0)) throw std::domain_error("berman_univariate_asymptotic: need w(v) > 0");
  return radial.survival(u) / std::sqrt(2.0 * std::numbers::pi * u * w);
}

struct AsymptoticRate {
  double value = 0.0;
  double upsilon = 0.0;
  PairTail pair;
  /// "rho>a", "rho<a" or "rho=a"; constants are never applied.
  std::string branch;
};

/// Rate of P(X_i > γ, X_j > γ) up to an unspecified positive constant:
/// F̄(υ)(2πυw(υ))^{−1/2} when ρ >= a, F̄(υ)(2πυw(υ))^{−1} when ρ < a, with
/// υ = (γ − μ_ij)/κ_ij. Compare on a log scale only.
inline AsymptoticRate bivariate_type1_asymptotic_rate(const EllipticalClassifierInput& in,
                                                      std::size_t i, std::size_t j, double gamma) {
  AsymptoticRate r;
  r.pair = pair_tail(in, i, j);
  r.upsilon = (gamma - r.pair.mu) / r.pair.kappa;
  const double w = in.radial.w(r.upsilon);
  if (!(r.upsilon > 0.0) || !(w > 0.0))
    throw std::domain_error("bivariate_type1_asymptotic_rate: need w(v) > 0");
  const double base = 2.0 * std::numbers::pi * r.upsilon * w;
  const double fbar = in.radial.survival(r.upsilon);
  if (r.pair.rho > r.pair.a) {
    r.branch = "rho>a";
    r.value = fbar / std::sqrt(base);
  } else if (r.pair.rho < r.pair.a) {
    r.branch = "rho<a";
    r.value = fbar / base;
  } else {
    r.branch = "rho=a";
    r.value = fbar / std::sqrt(base);
  }
  return r;
}

} // namespace rare_union
