// Command-line front end: generate synthetic data, run private estimates,
// sweep parameter grids, combine studies, and convert privacy budgets.

#include "dpcausal/config.hpp"
#include "dpcausal/experiments.hpp"
#include "dpcausal/meta.hpp"
#include "dpcausal/privacy.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using dpcausal::ConfigError;
using dpcausal::DataError;
using dpcausal::PrivacyError;
using nlohmann::json;

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitPrivacy = 4;

void apply_cli_settings(dpcausal::RunConfig& config, const std::string& config_path,
                        const std::vector<std::string>& overrides) {
  if (!config_path.empty()) config = dpcausal::parse_config_file(config_path);
  for (const std::string& entry : overrides) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + entry + "'");
    dpcausal::apply_config_entry(config, entry.substr(0, eq), entry.substr(eq + 1));
  }
  if (const char* env_seed = std::getenv("DPCAUSAL_SEED")) {
    dpcausal::apply_config_entry(config, "seed", env_seed);
  }
}

void write_json(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << j.dump(2) << '\n';
}

template <typename T>
std::vector<T> parse_list(const std::string& csv, const std::string& flag,
                          T (*convert)(const std::string&)) {
  std::vector<T> values;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    values.push_back(convert(item));
  }
  if (values.empty()) throw ConfigError("empty grid dimension for " + flag);
  return values;
}

int cmd_generate(const std::string& kind_name, long long n, unsigned long long seed,
                 const std::string& out_path, bool as_json) {
  dpcausal::GeneratorSpec spec;
  spec.kind = dpcausal::generator_kind_from_string(kind_name);
  spec.n = static_cast<dpcausal::Index>(n);
  spec.seed = seed;
  const dpcausal::Dataset data = dpcausal::generate(spec);
  if (as_json) {
    dpcausal::save_json(data, out_path);
  } else {
    dpcausal::save_csv(data, out_path);
  }
  std::cout << "wrote " << data.size() << " records (" << to_string(spec.kind) << ") to "
            << out_path << "\n";
  return 0;
}

int cmd_estimate(dpcausal::RunConfig config) {
  config.check();
  const dpcausal::Dataset data = dpcausal::load_run_data(config);
  const dpcausal::EstimateReport report = dpcausal::run_estimate(data, config.pipeline);
  const json j = dpcausal::report_to_json(report, config);

  std::cout << "tau_dp = " << report.tau_dp << "\n";
  std::cout << "v_dp   = " << report.v_dp << "  (Var(tau_dp) ~ "
            << report.v_dp / static_cast<double>(report.n) << ")\n";
  if (report.ci) {
    std::cout << "ci     = [" << report.ci->first << ", " << report.ci->second << "]  ("
              << to_string(report.ci_method) << ")\n";
  }
  if (report.non_private) {
    std::cout << "privacy: non-private mode, no guarantee\n";
  } else {
    std::cout << "privacy: " << report.budget.mu << "-GDP  = (" << report.epsilon_at_1e5
              << ", 1e-5)-DP\n";
  }
  if (!config.output_path.empty()) {
    write_json(j, config.output_path);
    std::cout << "report written to " << config.output_path << "\n";
  } else {
    std::cout << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_sweep(dpcausal::RunConfig config, const std::string& grid_k, const std::string& grid_mu,
              const std::string& grid_n, const std::string& grid_estimator, int reps,
              const std::string& out_dir) {
  if (!config.generator) throw ConfigError("sweep requires a generator data source");
  auto to_ll = +[](const std::string& s) { return std::stoll(s); };
  auto to_dd = +[](const std::string& s) { return std::stod(s); };
  auto to_kind = +[](const std::string& s) { return dpcausal::estimator_kind_from_string(s); };

  std::vector<long long> ks = grid_k.empty()
                                  ? std::vector<long long>{config.pipeline.k_folds}
                                  : parse_list<long long>(grid_k, "--grid-k", to_ll);
  std::vector<double> mus = grid_mu.empty()
                                ? std::vector<double>{config.pipeline.mu_total.mu}
                                : parse_list<double>(grid_mu, "--grid-mu", to_dd);
  std::vector<long long> ns = grid_n.empty() ? std::vector<long long>{config.generator_n}
                                             : parse_list<long long>(grid_n, "--grid-n", to_ll);
  std::vector<dpcausal::EstimatorKind> kinds =
      grid_estimator.empty() ? std::vector<dpcausal::EstimatorKind>{config.pipeline.kind}
                             : parse_list<dpcausal::EstimatorKind>(grid_estimator,
                                                                   "--grid-estimator", to_kind);

  std::filesystem::create_directories(out_dir);
  std::ofstream summary(out_dir + "/summary.csv");
  if (!summary) throw DataError("cannot write " + out_dir + "/summary.csv");
  summary << "k,mu,n,estimator,reps,mean,sd,bias,rmse,coverage\n";

  int cell = 0;
  for (long long k : ks) {
    for (double mu : mus) {
      for (long long n : ns) {
        for (dpcausal::EstimatorKind kind : kinds) {
          dpcausal::PipelineConfig cell_config = config.pipeline;
          cell_config.k_folds = static_cast<int>(k);
          cell_config.mu_total.mu = mu;
          cell_config.kind = kind;
          const dpcausal::ReplicationTable table = dpcausal::run_replications(
              *config.generator, static_cast<dpcausal::Index>(n), cell_config, reps,
              config.pipeline.seed + static_cast<std::uint64_t>(cell));
          std::ostringstream name;
          name << out_dir << "/cell_k" << k << "_mu" << mu << "_n" << n << "_"
               << to_string(kind) << ".csv";
          dpcausal::write_replication_csv(table, name.str());
          const auto& s = table.summary;
          summary << k << ',' << mu << ',' << n << ',' << to_string(kind) << ',' << s.reps << ','
                  << s.mean << ',' << s.sd << ',' << s.bias << ',' << s.rmse << ',' << s.coverage
                  << '\n';
          std::cout << "cell " << ++cell << ": k=" << k << " mu=" << mu << " n=" << n
                    << " estimator=" << to_string(kind) << "  rmse=" << s.rmse << "\n";
        }
      }
    }
  }
  std::cout << "summary written to " << out_dir << "/summary.csv\n";
  return 0;
}

int cmd_meta(const std::vector<std::string>& inputs, const std::string& weight_rule,
             const std::string& out_path) {
  std::vector<std::string> files;
  for (const std::string& input : inputs) {
    if (std::filesystem::is_directory(input)) {
      for (const auto& entry : std::filesystem::directory_iterator(input)) {
        if (entry.path().extension() == ".json") files.push_back(entry.path().string());
      }
    } else {
      files.push_back(input);
    }
  }
  std::sort(files.begin(), files.end());
  if (files.size() < 2) throw DataError("meta-analysis needs at least 2 study reports");

  std::vector<dpcausal::StudyRecord> studies;
  for (const std::string& file : files) {
    std::ifstream in(file);
    if (!in) throw DataError("cannot open " + file);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw DataError(file + ": " + e.what());
    }
    const json& result = j.contains("result") ? j.at("result") : j;
    dpcausal::StudyRecord study;
    study.tau_dp = result.at("tau_dp").get<double>();
    study.v_dp = result.at("v_dp").get<double>();
    study.n = result.at("n").get<dpcausal::Index>();
    study.budget.mu = result.value("mu_total", 0.0);
    studies.push_back(study);
  }

  const dpcausal::WeightRule rule = weight_rule == "inverse_variance"
                                        ? dpcausal::WeightRule::InverseVariance
                                        : dpcausal::WeightRule::InverseStdErr;
  const dpcausal::Vector weights = dpcausal::optimal_weights(studies, rule);
  const dpcausal::MetaResult combined = dpcausal::meta_combine(studies, weights);

  json j;
  j["n_studies"] = studies.size();
  j["weight_rule"] = weight_rule;
  j["weights"] = std::vector<double>(weights.begin(), weights.end());
  j["tau_meta"] = combined.tau_meta;
  j["variance"] = combined.v_meta_over_n;
  j["inputs"] = files;
  std::cout << "tau_meta = " << combined.tau_meta << "  variance = " << combined.v_meta_over_n
            << "\n";
  if (!out_path.empty()) {
    write_json(j, out_path);
    std::cout << "combined report written to " << out_path << "\n";
  } else {
    std::cout << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_convert_privacy(double mu, std::optional<double> epsilon, std::optional<double> delta) {
  const dpcausal::PrivacyBudget budget{mu};
  if (epsilon && delta) throw ConfigError("pass either --epsilon or --delta, not both");
  if (epsilon) {
    std::cout << "delta(" << mu << "-GDP, epsilon=" << *epsilon
              << ") = " << dpcausal::gdp_to_approx_dp(budget, *epsilon) << "\n";
  } else {
    const double d = delta ? *delta : 1e-5;
    std::cout << "epsilon(" << mu << "-GDP, delta=" << d
              << ") = " << dpcausal::epsilon_for_delta(budget, d) << "\n";
  }
  std::cout << dpcausal::budget_report_json(mu, mu / std::sqrt(2.0), mu / std::sqrt(2.0)).dump(2)
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private average treatment effect estimation"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand("generate", "Write a synthetic dataset to CSV or JSON");
  std::string gen_kind = "low_overlap", gen_out = "dataset.csv";
  long long gen_n = 1000;
  unsigned long long gen_seed = 1;
  bool gen_json = false;
  generate->add_option("--kind", gen_kind, "Generator name");
  generate->add_option("--n", gen_n, "Number of records")->check(CLI::PositiveNumber);
  generate->add_option("--seed", gen_seed, "Generator seed");
  generate->add_option("--out", gen_out, "Output path");
  generate->add_flag("--json", gen_json, "Write JSON instead of CSV");

  // estimate
  auto* estimate = app.add_subcommand("estimate", "Run the private estimation pipeline");
  std::string est_config_path;
  std::vector<std::string> est_overrides;
  estimate->add_option("--config", est_config_path, "Config file (key = value lines)");
  estimate->add_option("--set", est_overrides, "Override config entries, key=value");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Replication tables over a parameter grid");
  std::string sweep_config_path, sweep_k, sweep_mu, sweep_n, sweep_estimator;
  std::string sweep_out = "sweep_out";
  std::vector<std::string> sweep_overrides;
  int sweep_reps = 20;
  sweep->add_option("--config", sweep_config_path, "Config file");
  sweep->add_option("--set", sweep_overrides, "Override config entries, key=value");
  sweep->add_option("--grid-k", sweep_k, "Comma-separated fold counts");
  sweep->add_option("--grid-mu", sweep_mu, "Comma-separated budgets");
  sweep->add_option("--grid-n", sweep_n, "Comma-separated sample sizes");
  sweep->add_option("--grid-estimator", sweep_estimator, "Comma-separated estimators");
  sweep->add_option("--reps", sweep_reps, "Replications per cell")->check(CLI::PositiveNumber);
  sweep->add_option("--out-dir", sweep_out, "Output directory");

  // meta
  auto* meta = app.add_subcommand("meta", "Combine study reports by meta-analysis");
  std::vector<std::string> meta_inputs;
  std::string meta_rule = "inverse_se", meta_out;
  meta->add_option("--inputs", meta_inputs, "Report files or a directory")->required();
  meta->add_option("--weights", meta_rule, "inverse_se (default) or inverse_variance");
  meta->add_option("--out", meta_out, "Combined report path");

  // convert-privacy
  auto* convert = app.add_subcommand("convert-privacy", "GDP to (epsilon, delta) conversion");
  double conv_mu = 1.0;
  std::optional<double> conv_eps, conv_delta;
  convert->add_option("--mu", conv_mu, "GDP parameter")->required();
  convert->add_option("--epsilon", conv_eps, "Report delta at this epsilon");
  convert->add_option("--delta", conv_delta, "Report epsilon at this delta (default 1e-5)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) return cmd_generate(gen_kind, gen_n, gen_seed, gen_out, gen_json);
    if (*estimate) {
      dpcausal::RunConfig config;
      apply_cli_settings(config, est_config_path, est_overrides);
      return cmd_estimate(std::move(config));
    }
    if (*sweep) {
      dpcausal::RunConfig config;
      apply_cli_settings(config, sweep_config_path, sweep_overrides);
      return cmd_sweep(std::move(config), sweep_k, sweep_mu, sweep_n, sweep_estimator,
                       sweep_reps, sweep_out);
    }
    if (*meta) return cmd_meta(meta_inputs, meta_rule, meta_out);
    if (*convert) return cmd_convert_privacy(conv_mu, conv_eps, conv_delta);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const PrivacyError& e) {
    std::cerr << "privacy error: " << e.what() << "\n";
    return kExitPrivacy;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
