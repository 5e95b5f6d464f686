// Command-line front end: estimate | table | oracle | classify | ratio.
// Exit status 0 on success, 2 on a configuration error, 1 on a runtime error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rare_union/rare_union.hpp"

namespace ru = rare_union;
using nlohmann::json;

namespace {

json parse_json_arg(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ru::ConfigError(std::string(what) + ": " + e.what());
  }
}

ru::ModelPtr model_from(const std::string& text) {
  try {
    return ru::build_model(parse_json_arg(text, "--model"));
  } catch (const ru::ModelError& e) {
    throw ru::ConfigError(e.what());
  }
}

int cmd_estimate(const std::string& model_text, const std::string& name, double gamma,
                 std::uint64_t replicates, std::uint64_t seed) {
  const auto model = model_from(model_text);
  if (name == "bonferroni") {
    const auto b = ru::bonferroni_bounds(*model, gamma);
    std::cout << json{{"gamma", gamma}, {"alpha_bar", b.upper}, {"alpha_bar_minus_q", b.second}}.dump(2)
              << '\n';
    return 0;
  }
  if (!ru::is_estimator_name(name)) throw ru::ConfigError("unknown estimator '" + name + "'");
  ru::EstimateResult r = ru::detail::run_named(name, *model, gamma, replicates, seed);
  r.gamma = gamma;
  std::cout << r.to_json().dump(2) << '\n';
  return 0;
}

int cmd_table(const std::string& config_path, const std::string& format, bool paper_scale,
              bool no_timing) {
  std::ifstream in(config_path);
  if (!in) throw ru::ConfigError("cannot open config '" + config_path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  auto config = ru::ExperimentConfig::from_json(parse_json_arg(ss.str(), "--config"));
  if (paper_scale) config.replicates = ru::kPaperReplicates;
  if (format == "csv") config.output = ru::OutputFormat::Csv;
  else if (format == "json") config.output = ru::OutputFormat::Json;
  else if (!format.empty()) throw ru::ConfigError("--format must be csv or json");

  const auto rows = ru::run_experiment(config);
  for (const auto& r : rows)
    if (!r.error.empty())
      std::cerr << "cell " << r.estimator << " gamma=" << r.gamma << ": " << r.error << '\n';
  if (config.output == ru::OutputFormat::Json) ru::write_json(std::cout, rows, !no_timing);
  else ru::write_csv(std::cout, rows, !no_timing);
  return 0;
}

int cmd_oracle(const std::string& model_text, const std::vector<double>& gammas, std::uint64_t qmc_points) {
  const auto model = model_from(model_text);
  for (double g : gammas) {
    const auto v = ru::union_oracle(*model, g, qmc_points);
    if (!v) throw std::runtime_error("no oracle for model '" + model->type_name() + "' at this gamma");
    std::printf("%.3e\n", *v);
  }
  return 0;
}

int cmd_classify(const std::string& model_text, int archimedean_row, int lt_row, double theta) {
  ru::EfficiencyVerdict v;
  if (archimedean_row > 0) {
    try {
      v = ru::classify_archimedean(archimedean_row, theta);
    } catch (const std::invalid_argument& e) {
      throw ru::ConfigError(e.what());
    }
  } else if (lt_row > 0) {
    const auto& rows = ru::ledford_tawn_table();
    const auto* it = std::find_if(rows.begin(), rows.end(), [&](const auto& r) { return r.number == lt_row; });
    if (it == rows.end()) throw ru::ConfigError("unknown Ledford-Tawn row");
    v = ru::classify_ledford_tawn(*it);
  } else {
    if (model_text.empty()) throw ru::ConfigError("classify needs --model, --archimedean-row or --lt-row");
    const auto model = model_from(model_text);
    if (const auto* ar = dynamic_cast<const ru::AR1Model*>(model.get())) v = ru::classify_ar1(ar->phi());
    else if (const auto* n = dynamic_cast<const ru::NormalModel*>(model.get())) v = ru::classify_normal(*n);
    else if (const auto* a = dynamic_cast<const ru::ArchimedeanModel*>(model.get()))
      v = ru::classify_archimedean(a->generator().family(), a->generator().theta());
    else throw ru::ConfigError("no classifier for model '" + model->type_name() + "'");
  }
  std::cout << v.to_json().dump(2) << '\n';
  return 0;
}

int cmd_ratio(const std::string& model_text, const std::vector<double>& gammas,
              const std::vector<double>& epsilons) {
  const auto model = model_from(model_text);
  std::cout << ru::empirical_efficiency_ratio(*model, gammas, epsilons).to_json().dump(2) << '\n';
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rare-event union probability estimators"};
  app.require_subcommand(1);

  std::string model_text, estimator, config_path, format;
  double gamma = 0.0, theta = 0.0;
  std::vector<double> gammas, epsilons{0.0, 0.1};
  std::uint64_t replicates = ru::kDeskReplicates, seed = 0, qmc_points = ru::kDefaultQmcPoints;
  bool paper_scale = false, no_timing = false;
  int archimedean_row = 0, lt_row = 0;

  auto* est = app.add_subcommand("estimate", "Run one estimator at one gamma");
  est->add_option("--model", model_text, "Model as JSON")->required();
  est->add_option("--estimator", estimator, "Estimator name")->required();
  est->add_option("--gamma", gamma, "Threshold")->required();
  est->add_option("--replicates", replicates, "Replicates R")->check(CLI::PositiveNumber);
  est->add_option("--seed", seed, "Master seed");
  est->add_flag("--paper-scale", paper_scale, "Use R = 10^6");

  auto* tab = app.add_subcommand("table", "Run an experiment config");
  tab->add_option("--config", config_path, "Config JSON file")->required();
  tab->add_option("--format", format, "csv or json");
  tab->add_flag("--paper-scale", paper_scale, "Use R = 10^6");
  tab->add_flag("--no-timing", no_timing, "Write wall_ms as 0");

  auto* orc = app.add_subcommand("oracle", "Reference union probability");
  orc->add_option("--model", model_text, "Model as JSON")->required();
  orc->add_option("--gamma", gammas, "Threshold(s)")->required();
  orc->add_option("--qmc-points", qmc_points, "Total QMC points for the general normal oracle");

  auto* cls = app.add_subcommand("classify", "Efficiency classification");
  cls->add_option("--model", model_text, "Model as JSON");
  cls->add_option("--archimedean-row", archimedean_row, "Archimedean table row (1-22)");
  cls->add_option("--lt-row", lt_row, "Residual tail index table row");
  cls->add_option("--theta", theta, "Copula parameter for --archimedean-row");

  auto* rat = app.add_subcommand("ratio", "Empirical efficiency ratio over a gamma grid");
  rat->add_option("--model", model_text, "Model as JSON")->required();
  rat->add_option("--gamma", gammas, "Threshold grid")->required();
  rat->add_option("--epsilon", epsilons, "Exponent weakenings");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    if (app.get_subcommands().empty()) std::cerr << app.help();
    return 2;
  }

  try {
    if (*est) return cmd_estimate(model_text, estimator, gamma, paper_scale ? ru::kPaperReplicates : replicates, seed);
    if (*tab) return cmd_table(config_path, format, paper_scale, no_timing);
    if (*orc) return cmd_oracle(model_text, gammas, qmc_points);
    if (*cls) return cmd_classify(model_text, archimedean_row, lt_row, theta);
    if (*rat) return cmd_ratio(model_text, gammas, epsilons);
  } catch (const ru::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
