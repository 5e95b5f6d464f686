#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rare_union/core/events.hpp"
#include "rare_union/math/random.hpp"

namespace rare_union {

/// Invalid model description (non-PD covariance, θ out of range, ...).
class ModelError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// The model cannot provide a requested probability or sampler.
class UnsupportedCapability : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

struct Capabilities {
  bool marginal_prob = false;
  bool pair_prob = false;
  bool conditional_single = false;
  bool conditional_pair = false;
  /// Intersections and conditional laws for index sets of any size.
  bool arbitrary_sets = false;
};

/// Draws one d-vector into the span. Handles are immutable; all randomness
/// comes from the caller's stream. A handle must not outlive its model.
using Sampler = std::function<void(Rng&, std::span<double>)>;

/// Joint law of X together with the exceedance events A_i(γ).
class DependenceModel {
public:
  virtual ~DependenceModel() = default;

  virtual std::size_t dim() const = 0;
  virtual Capabilities capabilities() const = 0;
  virtual std::string type_name() const = 0;
  virtual nlohmann::json to_json() const = 0;

  /// One unconditional draw.
  virtual void sample(Rng& rng, std::span<double> out) const = 0;

  /// Events of a draw: A_i = {x_i > γ}.
  virtual ExceedancePattern pattern(std::span<const double> x, double gamma) const {
    ExceedancePattern p(x.size(), 0);
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] > gamma) p.set(i);
    return p;
  }

  /// P(A_i).
  virtual double marginal_survival(std::size_t /*i*/, double /*gamma*/) const {
    throw UnsupportedCapability(type_name() + ": marginal probabilities unavailable");
  }

  /// P(A_i A_j), i != j.
  virtual double pair_survival(std::size_t /*i*/, std::size_t /*j*/, double /*gamma*/) const {
    throw UnsupportedCapability(type_name() + ": pair probabilities unavailable");
  }

  /// Draws from P(· | A_i).
  virtual Sampler conditional_given_exceedance(std::size_t /*i*/, double /*gamma*/) const {
    throw UnsupportedCapability(type_name() + ": no sampler given A_i");
  }

  /// Draws from P(· | A_i A_j).
  virtual Sampler conditional_given_pair_exceedance(std::size_t /*i*/, std::size_t /*j*/,
                                                    double /*gamma*/) const {
    throw UnsupportedCapability(type_name() + ": no sampler given A_i A_j");
  }

  /// P(B_I), B_I = ∩_{i∈I} A_i; P(B_∅) = 1.
  virtual double intersection_survival(const IndexSet& set, double gamma) const {
    check_set(set);
    const auto idx = set.indices();
    switch (idx.size()) {
    case 0: return 1.0;
    case 1: return marginal_survival(idx[0], gamma);
    case 2: return pair_survival(idx[0], idx[1], gamma);
    default:
      throw UnsupportedCapability(type_name() + ": intersections of more than two events");
    }
  }

  /// Draws from P(· | B_I); the empty set gives the unconditional law.
  virtual Sampler conditional_given_all(const IndexSet& set, double gamma) const {
    check_set(set);
    const auto idx = set.indices();
    switch (idx.size()) {
    case 0: return unconditional();
    case 1: return conditional_given_exceedance(idx[0], gamma);
    case 2: return conditional_given_pair_exceedance(idx[0], idx[1], gamma);
    default:
      throw UnsupportedCapability(type_name() + ": conditioning on more than two events");
    }
  }

  Sampler unconditional() const {
    return [this](Rng& rng, std::span<double> out) { sample(rng, out); };
  }

  /// max_i P(A_i) <= α <= Σ_i P(A_i); this is the upper end.
  double sum_marginals(double gamma) const {
    double s = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) s += marginal_survival(i, gamma);
    return s;
  }

  /// q = Σ_{i<j} P(A_i A_j).
  double sum_pairs(double gamma) const {
    double s = 0.0;
    for (std::size_t i = 0; i < dim(); ++i)
      for (std::size_t j = i + 1; j < dim(); ++j) s += pair_survival(i, j, gamma);
    return s;
  }

protected:
  void check_index(std::size_t i) const {
    if (i >= dim()) throw std::out_of_range(type_name() + ": event index out of range");
  }
  void check_pair(std::size_t i, std::size_t j) const {
    check_index(i);
    check_index(j);
    if (i == j) throw std::invalid_argument(type_name() + ": pair needs i != j");
  }
  void check_set(const IndexSet& set) const {
    if (set.dim() != dim()) throw std::invalid_argument("index set dimension mismatch");
  }
};

using ModelPtr = std::shared_ptr<const DependenceModel>;

} // namespace rare_union
