#pragma once

// Config-driven experiment tables: one row per (estimator, γ), with the
// oracle value and relative error when the model has an oracle.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rare_union/analysis/oracles.hpp"
#include "rare_union/estimators/estimators.hpp"
#include "rare_union/models/factory.hpp"

namespace rare_union {

/// Invalid configuration; the CLI maps it to exit status 2.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::uint64_t kDeskReplicates = 100'000;
inline constexpr std::uint64_t kPaperReplicates = 1'000'000;

inline const std::vector<std::string>& estimator_names() {
  static const std::vector<std::string> names = {"cmc",       "alpha1",      "alpha2",
                                                 "alpha1_is", "alpha2_is",   "beta1_alpha",
                                                 "beta2_alpha", "bonferroni"};
  return names;
}

inline bool is_estimator_name(const std::string& s) {
  const auto& n = estimator_names();
  return std::find(n.begin(), n.end(), s) != n.end();
}

enum class OutputFormat { Csv, Json };

struct OracleMode {
  bool enabled = true;
  std::uint64_t qmc_points = kDefaultQmcPoints;
};

struct ExperimentConfig {
  nlohmann::json model;
  std::vector<double> gamma_grid;
  std::vector<std::string> estimators;
  std::uint64_t replicates = kDeskReplicates;
  std::uint64_t master_seed = 0;
  OutputFormat output = OutputFormat::Csv;
  OracleMode oracle;

  void validate() const {
    if (gamma_grid.empty()) throw ConfigError("gamma_grid must be non-empty");
    for (std::size_t k = 1; k < gamma_grid.size(); ++k)
      if (!(gamma_grid[k] > gamma_grid[k - 1])) throw ConfigError("gamma_grid must be increasing");
    for (const auto& e : estimators)
      if (!is_estimator_name(e)) throw ConfigError("unknown estimator '" + e + "'");
    if (replicates < 1) throw ConfigError("replicates must be >= 1");
    if (!model.is_object()) throw ConfigError("model must be a JSON object");
  }

  static ExperimentConfig from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    try {
      if (!j.is_object()) throw ConfigError("config must be a JSON object");
      if (!j.contains("model")) throw ConfigError("config needs 'model'");
      c.model = j.at("model");
      if (j.contains("gamma_grid")) c.gamma_grid = j.at("gamma_grid").get<std::vector<double>>();
      if (j.contains("estimators")) c.estimators = j.at("estimators").get<std::vector<std::string>>();
      if (j.contains("replicates")) {
        const auto r = j.at("replicates").get<std::int64_t>();
        if (r < 1) throw ConfigError("replicates must be >= 1");
        c.replicates = static_cast<std::uint64_t>(r);
      }
      if (j.contains("master_seed")) c.master_seed = j.at("master_seed").get<std::uint64_t>();
      if (j.contains("output")) {
        const auto o = j.at("output").get<std::string>();
        if (o == "csv") c.output = OutputFormat::Csv;
        else if (o == "json") c.output = OutputFormat::Json;
        else throw ConfigError("output must be 'csv' or 'json'");
      }
      if (j.contains("oracle")) {
        const auto& o = j.at("oracle");
        if (o.is_string()) {
          const auto s = o.get<std::string>();
          if (s == "auto") c.oracle.enabled = true;
          else if (s == "none") c.oracle.enabled = false;
          else throw ConfigError("oracle must be 'auto', 'none' or {\"qmc_points\": n}");
        } else if (o.is_object() && o.contains("qmc_points")) {
          c.oracle.qmc_points = o.at("qmc_points").get<std::uint64_t>();
          if (c.oracle.qmc_points < kQmcShifts) throw ConfigError("qmc_points too small");
        } else {
          throw ConfigError("oracle must be 'auto', 'none' or {\"qmc_points\": n}");
        }
      }
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
  }
};

struct TableRow {
  std::string estimator;
  double gamma = 0.0;
  double estimate = std::nan("");
  double sample_std = std::nan("");
  double std_error = std::nan("");
  std::optional<double> abs_rel_error;
  bool degenerate = false;
  std::uint64_t replicates = 0;
  std::uint64_t seed = 0;
  double wall_ms = 0.0;
  /// Set when the cell could not run (e.g. a missing model capability).
  std::string error;

  nlohmann::json to_json() const {
    auto num = [](double v) -> nlohmann::json {
      return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
    };
    nlohmann::json j = {{"estimator", estimator},
                        {"gamma", gamma},
                        {"estimate", num(estimate)},
                        {"sample_std", num(sample_std)},
                        {"stderr", num(std_error)},
                        {"abs_rel_error", abs_rel_error ? num(*abs_rel_error) : nlohmann::json(nullptr)},
                        {"degenerate", degenerate},
                        {"replicates", replicates},
                        {"seed", seed},
                        {"wall_ms", wall_ms}};
    if (!error.empty()) j["error"] = error;
    return j;
  }
};

/// Seed of one cell; depends only on (master, estimator, γ) so cells are
/// unaffected by what else the config contains.
inline std::uint64_t cell_seed(std::uint64_t master, const std::string& estimator, double gamma) {
  return derive_key(master, hash64(estimator), std::bit_cast<std::uint64_t>(gamma));
}

namespace detail {

inline TableRow row_from(const EstimateResult& r) {
  TableRow row;
  row.estimator = r.estimator;
  row.gamma = r.gamma;
  row.estimate = r.estimate;
  row.sample_std = r.sample_std;
  row.std_error = r.std_error;
  row.degenerate = r.degenerate;
  row.replicates = r.replicates;
  row.seed = r.seed;
  row.wall_ms = r.wall_ms;
  return row;
}

inline TableRow deterministic_row(const char* name, double gamma, double value) {
  TableRow row;
  row.estimator = name;
  row.gamma = gamma;
  row.estimate = value;
  row.sample_std = 0.0;
  row.std_error = 0.0;
  return row;
}

inline EstimateResult run_named(const std::string& name, const DependenceModel& model, double gamma,
                                std::uint64_t R, std::uint64_t seed) {
  if (name == "cmc") return estimate_cmc(model, gamma, R, seed);
  if (name == "alpha1") return estimate_alpha_n(model, gamma, 1, R, seed);
  if (name == "alpha2") return estimate_alpha_n(model, gamma, 2, R, seed);
  if (name == "alpha1_is") return estimate_alpha_1_is(model, gamma, R, seed);
  if (name == "alpha2_is") return estimate_alpha_2_is(model, gamma, R, seed);
  if (name == "beta1_alpha") return estimate_beta_dagger_alpha(model, gamma, 1, R, seed);
  if (name == "beta2_alpha") return estimate_beta_dagger_alpha(model, gamma, 2, R, seed);
  throw ConfigError("unknown estimator '" + name + "'");
}

} // namespace detail

/// Rows in config order: for each γ, the oracle row (when available), then
/// the estimators. "bonferroni" contributes the two deterministic rows
/// alpha_bar and alpha_bar_minus_q. Per-cell failures are recorded in the
/// row and the run continues.
inline std::vector<TableRow> run_experiment(const ExperimentConfig& config) {
  config.validate();
  ModelPtr model;
  try {
    model = build_model(config.model);
  } catch (const ModelError& e) {
    throw ConfigError(e.what());
  }
  std::vector<TableRow> rows;
  for (double gamma : config.gamma_grid) {
    std::optional<double> truth;
    if (config.oracle.enabled) {
      try {
        truth = union_oracle(*model, gamma, config.oracle.qmc_points);
      } catch (const std::exception&) {
        truth.reset();
      }
      if (truth) {
        TableRow o = detail::deterministic_row("oracle", gamma, *truth);
        o.abs_rel_error = 0.0;
        rows.push_back(o);
      }
    }
    auto finish = [&](TableRow row) {
      if (truth && std::isfinite(row.estimate) && *truth != 0.0)
        row.abs_rel_error = std::abs(row.estimate - *truth) / *truth;
      rows.push_back(std::move(row));
    };
    for (const auto& name : config.estimators) {
      const std::uint64_t seed = cell_seed(config.master_seed, name, gamma);
      if (name == "bonferroni") {
        try {
          const auto b = bonferroni_bounds(*model, gamma);
          finish(detail::deterministic_row("alpha_bar", gamma, b.upper));
          finish(detail::deterministic_row("alpha_bar_minus_q", gamma, b.second));
        } catch (const std::exception& e) {
          TableRow r = detail::deterministic_row("alpha_bar", gamma, std::nan(""));
          r.error = e.what();
          rows.push_back(r);
        }
        continue;
      }
      try {
        EstimateResult r = detail::run_named(name, *model, gamma, config.replicates, seed);
        r.gamma = gamma;
        finish(detail::row_from(r));
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& e) {
        TableRow r;
        r.estimator = name;
        r.gamma = gamma;
        r.seed = seed;
        r.replicates = config.replicates;
        r.error = e.what();
        rows.push_back(r);
      }
    }
  }
  return rows;
}

//==============================================================================
// Writers
//==============================================================================

inline constexpr const char* kCsvHeader =
    "estimator,gamma,estimate,sample_std,stderr,rel_err,degenerate,replicates,seed,wall_ms";

inline std::string format_number(double v, const char* fmt = "%.6e") {
  if (!std::isfinite(v)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

/// CSV text; degenerate estimates carry a trailing asterisk. `with_timing`
/// false writes wall_ms as 0 so output can be compared byte for byte.
inline void write_csv(std::ostream& os, const std::vector<TableRow>& rows, bool with_timing = true) {
  os << kCsvHeader << '\n';
  for (const auto& r : rows) {
    os << r.estimator << ',' << format_number(r.gamma, "%g") << ',' << format_number(r.estimate)
       << (r.degenerate ? "*" : "") << ',' << format_number(r.sample_std) << ','
       << format_number(r.std_error) << ','
       << (r.abs_rel_error ? format_number(*r.abs_rel_error, "%.3e") : std::string("NA")) << ','
       << (r.degenerate ? 1 : 0) << ',' << r.replicates << ',' << r.seed << ','
       << format_number(with_timing ? r.wall_ms : 0.0, "%.1f") << '\n';
  }
}

inline void write_json(std::ostream& os, const std::vector<TableRow>& rows, bool with_timing = true) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    auto j = r.to_json();
    if (!with_timing) j["wall_ms"] = 0.0;
    arr.push_back(std::move(j));
  }
  os << arr.dump(2) << '\n';
}

} // namespace rare_union
