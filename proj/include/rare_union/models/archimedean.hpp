#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "rare_union/models/dependence_model.hpp"
#include "rare_union/samplers/frailty.hpp"

namespace rare_union {

enum class ArchimedeanFamily { Clayton, GumbelHougaard, Frank, AliMikhailHaq };

inline std::string to_string(ArchimedeanFamily f) {
  switch (f) {
  case ArchimedeanFamily::Clayton: return "clayton";
  case ArchimedeanFamily::GumbelHougaard: return "gumbel";
  case ArchimedeanFamily::Frank: return "frank";
  case ArchimedeanFamily::AliMikhailHaq: return "amh";
  }
  return "?";
}

inline ArchimedeanFamily parse_archimedean_family(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "clayton") return ArchimedeanFamily::Clayton;
  if (s == "gumbel" || s == "gumbel-hougaard" || s == "gumbel_hougaard")
    return ArchimedeanFamily::GumbelHougaard;
  if (s == "frank") return ArchimedeanFamily::Frank;
  if (s == "amh" || s == "ali-mikhail-haq" || s == "ali_mikhail_haq")
    return ArchimedeanFamily::AliMikhailHaq;
  throw ModelError("archimedean: unknown family '" + std::string(name) + "'");
}

/// Generator ψ and its inverse for one family and parameter. Only the θ
/// values that admit a frailty representation in any dimension are accepted:
/// Clayton θ >= 0, Gumbel θ >= 1, Frank θ > 0, AMH 0 <= θ < 1. θ = 0 (Clayton,
/// AMH) and θ = 1 (Gumbel) give the independence copula.
class ArchimedeanGenerator {
public:
  ArchimedeanGenerator(ArchimedeanFamily family, double theta) : family_(family), theta_(theta) {
    bool ok = false;
    switch (family) {
    case ArchimedeanFamily::Clayton: ok = theta >= 0.0 && std::isfinite(theta); break;
    case ArchimedeanFamily::GumbelHougaard: ok = theta >= 1.0 && std::isfinite(theta); break;
    case ArchimedeanFamily::Frank: ok = theta > 0.0 && std::isfinite(theta); break;
    case ArchimedeanFamily::AliMikhailHaq: ok = theta >= 0.0 && theta < 1.0; break;
    }
    if (!ok)
      throw ModelError("archimedean: theta out of the supported range for " + to_string(family));
  }

  ArchimedeanFamily family() const noexcept { return family_; }
  double theta() const noexcept { return theta_; }

  /// ψ(t), t in (0, 1].
  double psi(double t) const {
    const double th = theta_;
    switch (family_) {
    case ArchimedeanFamily::Clayton:
      return th == 0.0 ? -std::log(t) : std::expm1(-th * std::log(t)) / th;
    case ArchimedeanFamily::GumbelHougaard: return std::pow(-std::log(t), th);
    case ArchimedeanFamily::Frank: return -std::log(std::expm1(-th * t) / std::expm1(-th));
    case ArchimedeanFamily::AliMikhailHaq: return std::log((1.0 - th * (1.0 - t)) / t);
    }
    return 0.0;
  }

  /// ψ^←(s), s >= 0; also the Laplace transform of the frailty.
  double psi_inverse(double s) const {
    const double th = theta_;
    switch (family_) {
    case ArchimedeanFamily::Clayton:
      return th == 0.0 ? std::exp(-s) : std::exp(-std::log1p(th * s) / th);
    case ArchimedeanFamily::GumbelHougaard: return std::exp(-std::pow(s, 1.0 / th));
    case ArchimedeanFamily::Frank: return -std::log1p(std::exp(-s) * std::expm1(-th)) / th;
    case ArchimedeanFamily::AliMikhailHaq: return (1.0 - th) / (std::exp(s) - th);
    }
    return 0.0;
  }

  /// C(u, ..., u) with m arguments.
  double diagonal(double u, std::size_t m) const {
    if (m == 0 || u >= 1.0) return 1.0;
    if (u <= 0.0) return 0.0;
    return psi_inverse(static_cast<double>(m) * psi(u));
  }

  /// Draws the frailty V with E[e^{−sV}] = ψ^←(s).
  double sample_frailty(Rng& rng) const {
    const double th = theta_;
    switch (family_) {
    case ArchimedeanFamily::Clayton: return th == 0.0 ? 1.0 : th * sample_gamma(1.0 / th, rng);
    case ArchimedeanFamily::GumbelHougaard: return sample_positive_stable(1.0 / th, rng);
    case ArchimedeanFamily::Frank: return static_cast<double>(sample_log_series(-th, rng));
    case ArchimedeanFamily::AliMikhailHaq: return static_cast<double>(sample_geometric(th, rng));
    }
    return 1.0;
  }

private:
  ArchimedeanFamily family_;
  double theta_;
};

/// Uniform marginals joined by an Archimedean copula. The threshold is on the
/// uniform scale: A_i = {U_i > u} with u passed as γ, so P(A_i) = 1 − u.
class ArchimedeanModel : public DependenceModel {
public:
  ArchimedeanModel(ArchimedeanFamily family, double theta, std::size_t d)
      : gen_(family, theta), d_(d) {
    if (d < 1 || d > kMaxEvents) throw ModelError("archimedean: need 1 <= d <= 64");
  }

  const ArchimedeanGenerator& generator() const noexcept { return gen_; }

  std::size_t dim() const override { return d_; }
  Capabilities capabilities() const override {
    return {.marginal_prob = true, .pair_prob = true};
  }
  std::string type_name() const override { return "archimedean"; }
  nlohmann::json to_json() const override {
    return {{"type", "archimedean"},
            {"family", to_string(gen_.family())},
            {"theta", gen_.theta()},
            {"d", d_}};
  }

  /// Frailty construction: U_i = ψ^←(E_i / V), E_i i.i.d. unit exponentials.
  void sample(Rng& rng, std::span<double> out) const override {
    const double v = gen_.sample_frailty(rng);
    for (auto& u : out) u = gen_.psi_inverse(rng.exponential() / v);
  }

  double marginal_survival(std::size_t i, double u) const override {
    check_index(i);
    return std::clamp(1.0 - u, 0.0, 1.0);
  }

  /// 1 − 2u + C(u, u).
  double pair_survival(std::size_t i, std::size_t j, double u) const override {
    check_pair(i, j);
    if (u <= 0.0) return 1.0;
    if (u >= 1.0) return 0.0;
    return std::max(0.0, 1.0 - 2.0 * u + gen_.diagonal(u, 2));
  }

private:
  ArchimedeanGenerator gen_;
  std::size_t d_;
};

} // namespace rare_union
