#include "dpcausal/config.hpp"

#include "dpcausal/privacy.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dpcausal {

namespace {

using nlohmann::json;

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(begin, end - begin + 1));
}

double to_double(const std::string& value, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double parsed = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception&) {
    throw ConfigError("config: bad number for '" + key + "': " + value);
  }
}

long long to_int(const std::string& value, const std::string& key) {
  try {
    std::size_t pos = 0;
    const long long parsed = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer for '" + key + "': " + value);
  }
}

bool to_bool(const std::string& value, const std::string& key) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config: bad boolean for '" + key + "': " + value);
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

void RunConfig::check() const {
  if (data_path.empty() && !generator) {
    throw ConfigError("config: set either 'data' or 'generator'");
  }
  if (!data_path.empty() && generator) {
    throw ConfigError("config: 'data' and 'generator' are mutually exclusive");
  }
  if (generator && generator_n < 1) throw ConfigError("config: generator needs n >= 1");
  pipeline.check();
}

void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value) {
  PipelineConfig& p = config.pipeline;
  if (key == "data") {
    config.data_path = value;
  } else if (key == "generator") {
    config.generator = generator_kind_from_string(value);
  } else if (key == "n") {
    config.generator_n = static_cast<Index>(to_int(value, key));
  } else if (key == "rescale_covariates") {
    config.rescale_covariates = to_bool(value, key);
  } else if (key == "output") {
    config.output_path = value;
  } else if (key == "estimator") {
    p.kind = estimator_kind_from_string(value);
  } else if (key == "k") {
    p.k_folds = static_cast<int>(to_int(value, key));
  } else if (key == "b_mu") {
    p.bounds.b_mu = to_double(value, key);
  } else if (key == "b_pi") {
    p.bounds.b_pi = to_double(value, key);
  } else if (key == "mu_total") {
    p.mu_total.mu = to_double(value, key);
  } else if (key == "non_private") {
    p.non_private = to_bool(value, key);
  } else if (key == "scheme") {
    p.scheme = aggregation_scheme_from_string(value);
  } else if (key == "pi_learner") {
    p.spec_pi.kind = learner_kind_from_string(value);
  } else if (key == "mu_learner") {
    p.spec_mu.kind = learner_kind_from_string(value);
  } else if (key == "max_iter") {
    p.spec_pi.max_iter = p.spec_mu.max_iter = static_cast<int>(to_int(value, key));
  } else if (key == "tolerance") {
    p.spec_pi.tolerance = p.spec_mu.tolerance = to_double(value, key);
  } else if (key == "max_depth") {
    p.spec_pi.max_depth = p.spec_mu.max_depth = static_cast<int>(to_int(value, key));
  } else if (key == "min_leaf") {
    p.spec_pi.min_leaf = p.spec_mu.min_leaf = static_cast<int>(to_int(value, key));
  } else if (key == "n_trees") {
    p.spec_pi.n_trees = p.spec_mu.n_trees = static_cast<int>(to_int(value, key));
  } else if (key == "subsample_fraction") {
    p.spec_pi.subsample_fraction = p.spec_mu.subsample_fraction = to_double(value, key);
  } else if (key == "ci_method") {
    p.ci_method = ci_method_from_string(value);
  } else if (key == "alpha") {
    p.alpha = to_double(value, key);
  } else if (key == "alpha1") {
    p.alpha1 = to_double(value, key);
  } else if (key == "beta") {
    p.beta = to_double(value, key);
  } else if (key == "bootstrap_r") {
    p.bootstrap_r = static_cast<int>(to_int(value, key));
  } else if (key == "seed") {
    p.seed = static_cast<std::uint64_t>(to_int(value, key));
  } else if (key == "dump_nuisance_matrix") {
    p.debug_matrix_csv = value;
  } else {
    throw ConfigError("config: unknown key '" + key + "'");
  }
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  RunConfig config;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected key = value");
    }
    apply_config_entry(config, trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }
  return config;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

json config_to_json(const RunConfig& config) {
  const PipelineConfig& p = config.pipeline;
  json j;
  if (!config.data_path.empty()) j["data"] = config.data_path;
  if (config.generator) {
    j["generator"] = to_string(*config.generator);
    j["n"] = config.generator_n;
  }
  j["rescale_covariates"] = config.rescale_covariates;
  if (!config.output_path.empty()) j["output"] = config.output_path;
  j["estimator"] = to_string(p.kind);
  j["k"] = p.k_folds;
  j["b_mu"] = p.bounds.b_mu;
  j["b_pi"] = p.bounds.b_pi;
  j["mu_total"] = p.mu_total.mu;
  j["non_private"] = p.non_private;
  j["scheme"] = to_string(p.scheme);
  j["pi_learner"] = to_string(p.spec_pi.kind);
  j["mu_learner"] = to_string(p.spec_mu.kind);
  j["max_iter"] = p.spec_pi.max_iter;
  j["tolerance"] = p.spec_pi.tolerance;
  j["max_depth"] = p.spec_pi.max_depth;
  j["min_leaf"] = p.spec_pi.min_leaf;
  j["n_trees"] = p.spec_pi.n_trees;
  j["subsample_fraction"] = p.spec_pi.subsample_fraction;
  j["ci_method"] = to_string(p.ci_method);
  j["alpha"] = p.alpha;
  j["alpha1"] = p.alpha1;
  j["beta"] = p.beta;
  j["bootstrap_r"] = p.bootstrap_r;
  j["seed"] = p.seed;
  if (!p.debug_matrix_csv.empty()) j["dump_nuisance_matrix"] = p.debug_matrix_csv;
  return j;
}

json budget_report_json(double mu_total, double mu_ate, double mu_var) {
  json j;
  j["mu_total"] = mu_total;
  j["mu_ate"] = mu_ate;
  j["mu_var"] = mu_var;
  if (mu_total > 0.0) {
    j["epsilon_at_delta_1e-5"] = epsilon_for_delta({mu_total}, 1e-5);
  } else {
    j["epsilon_at_delta_1e-5"] = nullptr;
  }
  return j;
}

json report_to_json(const EstimateReport& report, const RunConfig& config) {
  json result;
  result["kind"] = to_string(report.kind);
  result["n"] = report.n;
  result["K"] = report.k;
  result["tau_dp"] = report.tau_dp;
  result["v_dp"] = report.v_dp;
  if (report.ci) {
    result["ci"] = json::array({report.ci->first, report.ci->second});
  } else {
    result["ci"] = nullptr;
  }
  result["ci_method"] = to_string(report.ci_method);
  result["mu_total"] = report.budget.mu;
  result["epsilon_at_1e-5"] =
      std::isnan(report.epsilon_at_1e5) ? json(nullptr) : json(report.epsilon_at_1e5);
  result["seed"] = report.seed;
  result["non_private"] = report.non_private;
  if (report.tau_nonprivate) result["tau_nonprivate"] = *report.tau_nonprivate;
  if (report.warning_missing_arm) {
    result["warnings"] = json::array({"a fold lacked one treatment arm; constant-0 outcome used"});
  }
  result["budget"] = budget_report_json(report.budget.mu, report.mu_ate, report.mu_var);
  if (report.ci_method == CiMethod::Bootstrap || report.ci_method == CiMethod::Pointwise) {
    json ci_report;
    ci_report["method"] = to_string(report.ci_method);
    ci_report["alpha"] = config.pipeline.alpha;
    ci_report["beta"] = config.pipeline.beta;
    ci_report["r"] = config.pipeline.bootstrap_r;
    ci_report["tau_minus"] = report.ci->first;
    ci_report["tau_plus"] = report.ci->second;
    ci_report["mu_total"] = report.budget.mu;
    result["ci_report"] = std::move(ci_report);
  }

  json j;
  j["config"] = config_to_json(config);
  j["result"] = std::move(result);
  return j;
}

Dataset load_run_data(const RunConfig& config) {
  Dataset data;
  if (config.generator) {
    data = generate({*config.generator, config.generator_n,
                     RngStream::keyed(config.pipeline.seed, {0x67656e64617461ULL}).next_u64()});
  } else if (ends_with(config.data_path, ".json")) {
    data = load_json(config.data_path);
  } else {
    data = load_csv(config.data_path);
  }
  if (config.rescale_covariates) data = rescale_covariates(data);
  return data;
}

}  // namespace dpcausal
