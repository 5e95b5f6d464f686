#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "rare_union/core/finite_pattern_model.hpp"
#include "rare_union/models/archimedean.hpp"
#include "rare_union/models/laplace.hpp"
#include "rare_union/models/normal.hpp"

namespace rare_union {

namespace detail {

inline const nlohmann::json& require(const nlohmann::json& j, const char* key, const char* type) {
  if (!j.contains(key)) throw ModelError(std::string(type) + ": missing field '" + key + "'");
  return j.at(key);
}

inline std::size_t require_dim(const nlohmann::json& j, const char* type) {
  const auto& v = require(j, "d", type);
  if (!v.is_number_integer() || v.get<long long>() < 1)
    throw ModelError(std::string(type) + ": 'd' must be a positive integer");
  return v.get<std::size_t>();
}

} // namespace detail

/// Model from its JSON description:
///   {"type":"normal","d":4,"rho":0.75}
///   {"type":"normal","mu":[...],"sigma":[[...],...]}
///   {"type":"laplace","d":4}
///   {"type":"archimedean","family":"clayton","theta":2,"d":3}
///   {"type":"ar1","phi":0.5,"sigma_eps":0.866,"d":5}
///   {"type":"finite","d":2,"pmf":[...]}
inline ModelPtr build_model(const nlohmann::json& spec) {
  if (!spec.is_object()) throw ModelError("model spec must be a JSON object");
  const std::string type = detail::require(spec, "type", "model").get<std::string>();
  try {
    if (type == "normal") {
      if (spec.contains("rho")) {
        const auto d = detail::require_dim(spec, "normal");
        return std::make_shared<NormalModel>(
            NormalModel::equicorrelated(d, spec.at("rho").get<double>()));
      }
      const auto rows = detail::require(spec, "sigma", "normal").get<std::vector<std::vector<double>>>();
      const auto n = static_cast<Eigen::Index>(rows.size());
      Eigen::MatrixXd sigma(n, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto& r = rows[static_cast<std::size_t>(i)];
        if (static_cast<Eigen::Index>(r.size()) != n) throw ModelError("normal: sigma must be square");
        for (Eigen::Index k = 0; k < n; ++k) sigma(i, k) = r[static_cast<std::size_t>(k)];
      }
      Eigen::VectorXd mu = Eigen::VectorXd::Zero(n);
      if (spec.contains("mu")) {
        const auto m = spec.at("mu").get<std::vector<double>>();
        if (static_cast<Eigen::Index>(m.size()) != n) throw ModelError("normal: mu has wrong length");
        for (Eigen::Index i = 0; i < n; ++i) mu(i) = m[static_cast<std::size_t>(i)];
      }
      if (spec.contains("d") && spec.at("d").get<Eigen::Index>() != n)
        throw ModelError("normal: d disagrees with sigma");
      return std::make_shared<NormalModel>(mu, sigma);
    }
    if (type == "laplace") return std::make_shared<LaplaceModel>(detail::require_dim(spec, "laplace"));
    if (type == "archimedean") {
      return std::make_shared<ArchimedeanModel>(
          parse_archimedean_family(detail::require(spec, "family", "archimedean").get<std::string>()),
          detail::require(spec, "theta", "archimedean").get<double>(),
          detail::require_dim(spec, "archimedean"));
    }
    if (type == "ar1") {
      return std::make_shared<AR1Model>(detail::require(spec, "phi", "ar1").get<double>(),
                                        spec.value("sigma_eps", 1.0), detail::require_dim(spec, "ar1"));
    }
    if (type == "finite") {
      return std::make_shared<FinitePatternModel>(FinitePatternModel::from_lexicographic(
          detail::require_dim(spec, "finite"),
          detail::require(spec, "pmf", "finite").get<std::vector<double>>()));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(type + ": " + e.what());
  }
  throw ModelError("unknown model type '" + type + "'");
}

} // namespace rare_union
