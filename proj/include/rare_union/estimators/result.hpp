#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "rare_union/core/events.hpp"

namespace rare_union {

/// One estimate with its replicate statistics.
///
/// sample_std is the standard deviation of a single replicate: for the
/// stratified estimators it is that of one draw per stratum combined with the
/// stratum weights. std_error is the standard deviation of the estimate itself.
struct EstimateResult {
  std::string estimator;
  double gamma = 0.0;
  double estimate = 0.0;
  double sample_std = 0.0;
  double std_error = 0.0;
  std::uint64_t replicates = 0;
  bool degenerate = false;
  std::uint64_t seed = 0;
  double wall_ms = 0.0;

  nlohmann::json to_json() const {
    return {{"estimator", estimator}, {"gamma", gamma},         {"estimate", estimate},
            {"sample_std", sample_std}, {"stderr", std_error},    {"replicates", replicates},
            {"degenerate", degenerate}, {"seed", seed},         {"wall_ms", wall_ms}};
  }
};

/// The random variable Y in β_n = E[Y·1{E >= n}], evaluated on a draw.
class PayoffSpec {
public:
  enum class Kind { ConstantOne, ResidualAlternating, Custom };
  using Callback = std::function<double(std::span<const double>, const ExceedancePattern&)>;

  static PayoffSpec constant_one() { return PayoffSpec(Kind::ConstantOne, 0, {}); }

  /// Y = Σ_{i=0}^{m} (−1)^i C(E, i). With m = n−1, β_n equals the mean of the
  /// residual term of order n−1.
  static PayoffSpec residual_alternating(std::size_t m) {
    return PayoffSpec(Kind::ResidualAlternating, m, {});
  }

  static PayoffSpec custom(Callback f) {
    if (!f) throw std::invalid_argument("PayoffSpec::custom: empty callback");
    return PayoffSpec(Kind::Custom, 0, std::move(f));
  }

  Kind kind() const noexcept { return kind_; }
  std::size_t order() const noexcept { return order_; }

  double operator()(std::span<const double> x, const ExceedancePattern& p) const {
    switch (kind_) {
    case Kind::ConstantOne: return 1.0;
    case Kind::ResidualAlternating:
      return static_cast<double>(alternating_binomial_sum(p.count(), order_));
    case Kind::Custom: return callback_(x, p);
    }
    return 0.0;
  }

private:
  PayoffSpec(Kind k, std::size_t m, Callback f) : kind_(k), order_(m), callback_(std::move(f)) {}

  Kind kind_;
  std::size_t order_;
  Callback callback_;
};

} // namespace rare_union
