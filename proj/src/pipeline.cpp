#include "dpcausal/pipeline.hpp"

#include "dpcausal/intervals.hpp"
#include "dpcausal/nuisance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace dpcausal {

namespace {

// Noise stream domains keyed by (run seed, release index).
constexpr std::uint64_t kNoiseDomain = 0x72656c6561736533ULL;
constexpr std::uint64_t kFoldDomain = 0x666f6c642d736432ULL;
constexpr std::uint64_t kLearnDomain = 0x6e756973616e6365ULL;
constexpr std::uint64_t kSampleDomain = 0x616767722d736d70ULL;
constexpr std::uint64_t kCiDomain = 0x63692d626f756e64ULL;

RngStream release_stream(std::uint64_t seed, std::uint64_t release_index) {
  return RngStream::keyed(seed, {kNoiseDomain, release_index});
}

}  // namespace

PipelineSeeds PipelineSeeds::derive(std::uint64_t run_seed) {
  PipelineSeeds seeds;
  seeds.folds = RngStream::keyed(run_seed, {kFoldDomain}).next_u64();
  seeds.learners = RngStream::keyed(run_seed, {kLearnDomain}).next_u64();
  seeds.sampling = RngStream::keyed(run_seed, {kSampleDomain}).next_u64();
  seeds.ci_bounds = RngStream::keyed(run_seed, {kCiDomain}).next_u64();
  return seeds;
}

namespace {

std::vector<PointwiseCate> forest_pointwise_cates(const Dataset& data,
                                                  const FoldAssignment& folds,
                                                  const PipelineConfig& config) {
  if (config.spec_mu.kind != LearnerKind::Forest || config.kind != EstimatorKind::G) {
    throw ConfigError(
        "pointwise CI needs mu_learner = forest and estimator = g; "
        "other learners must supply their own variance hook");
  }
  std::vector<PointwiseCate> cates(static_cast<std::size_t>(folds.k));
  for (int fold = 0; fold < folds.k; ++fold) {
    const DataSlice slice = slice_rows(data, folds.members[static_cast<std::size_t>(fold)]);
    RngStream rng =
        RngStream::keyed(config.seed, {kCiDomain, static_cast<std::uint64_t>(fold)});
    std::vector<std::shared_ptr<const RegressionForest>> arm_models(2);
    for (int arm = 0; arm <= 1; ++arm) {
      std::vector<int> rows;
      for (Index i = 0; i < slice.x.rows(); ++i) {
        if (slice.a[i] == static_cast<double>(arm)) rows.push_back(static_cast<int>(i));
      }
      if (rows.empty()) {
        arm_models[static_cast<std::size_t>(arm)] = nullptr;
        continue;
      }
      const auto m = static_cast<Index>(rows.size());
      Matrix xa(m, slice.x.cols());
      Vector ya(m);
      for (Index i = 0; i < m; ++i) {
        xa.row(i) = slice.x.row(rows[static_cast<std::size_t>(i)]);
        ya[i] = slice.y[rows[static_cast<std::size_t>(i)]];
      }
      arm_models[static_cast<std::size_t>(arm)] =
          fit_forest_model(xa, ya, config.spec_mu, rng.split(static_cast<std::uint64_t>(arm)));
    }
    const double b_mu = config.bounds.b_mu;
    auto model0 = arm_models[0];
    auto model1 = arm_models[1];
    cates[static_cast<std::size_t>(fold)].score = [model0, model1, b_mu](RowRef x) {
      const double m0 = model0 ? clip(model0->predict(x), -b_mu, b_mu) : 0.0;
      const double m1 = model1 ? clip(model1->predict(x), -b_mu, b_mu) : 0.0;
      return m1 - m0;
    };
    cates[static_cast<std::size_t>(fold)].variance = [model0, model1](RowRef x) {
      return (model0 ? model0->variance_of_mean(x) : 0.0) +
             (model1 ? model1->variance_of_mean(x) : 0.0);
    };
  }
  return cates;
}

}  // namespace

void PipelineConfig::check() const {
  bounds.check();
  spec_pi.check();
  spec_mu.check();
  if (k_folds < 2) throw ConfigError("pipeline: K must be at least 2");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("pipeline: alpha must lie in (0, 1)");
  if (ci_method == CiMethod::Asymptotic && !(alpha1 > 0.0 && alpha1 < alpha)) {
    throw ConfigError("pipeline: need 0 < alpha1 < alpha");
  }
  if (!(beta > 0.0 && beta < 1.0)) throw ConfigError("pipeline: beta must lie in (0, 1)");
  if (bootstrap_r < 2) throw ConfigError("pipeline: bootstrap_r must be at least 2");
  mu_total.check();
  if (!non_private && mu_total.non_private()) {
    throw PrivacyError("budget is zero: pass non_private to run without a guarantee");
  }
}

EstimateReport run_estimate(const Dataset& raw_data, const PipelineConfig& config) {
  config.check();
  validate(raw_data, config.bounds);
  const Dataset data = clip_outcomes(raw_data, config.bounds);
  const Index n = data.size();

  const PipelineSeeds seeds = PipelineSeeds::derive(config.seed);
  const FoldAssignment folds = split_folds(n, config.k_folds, seeds.folds);
  const NuisanceEnsemble ensemble =
      fit_ensemble(data, folds, config.spec_pi, config.spec_mu, config.bounds, seeds.learners);
  const NuisanceMatrix matrix = build_nuisance_matrix(data, ensemble);
  if (!config.debug_matrix_csv.empty()) {
    dump_nuisance_matrix_csv(matrix, config.debug_matrix_csv);
  }
  const AggregatedNuisance agg = build_aggregated(matrix, folds, config.scheme, seeds.sampling);
  const ScoreVector scores = compute_scores(data, agg, config.kind);

  // Equal budget split across the point release, the variance release, and,
  // for the fold-based CIs, the two interval releases.
  const bool interval_ci =
      config.ci_method == CiMethod::Bootstrap || config.ci_method == CiMethod::Pointwise;
  const int releases = interval_ci ? 4 : 2;
  const double mu_each =
      config.non_private ? 0.0 : config.mu_total.mu / std::sqrt(static_cast<double>(releases));
  const PrivacyBudget mu_release{mu_each};

  const EstimatorConstant constant = estimator_constant(config.kind, config.bounds);
  double sig1 = 0.0;
  double sig2 = 0.0;
  if (!config.non_private) {
    if (config.scheme == AggregationScheme::Sampling) {
      // The sampling aggregator's sensitivity depends on the realized maximum
      // assignment count of the (data-independent) sampling map, so the noise
      // is calibrated through the generic replacement-neighbor route.
      Index max_assigned = 0;
      std::vector<Index> counts(static_cast<std::size_t>(config.k_folds), 0);
      for (int fold : agg.chosen_fold) {
        max_assigned = std::max(max_assigned, ++counts[static_cast<std::size_t>(fold)]);
      }
      const SensitivityPair pair =
          sensitivity_sampling(config.kind, config.bounds, config.k_folds, max_assigned, n);
      const double tau_sensitivity = unified_sensitivity(pair, n, config.k_folds);
      const double sd_sensitivity = sqrt_variance_sensitivity(pair, n, config.k_folds);
      sig1 = tau_sensitivity * tau_sensitivity / (mu_each * mu_each);
      sig2 = sd_sensitivity * sd_sensitivity / (mu_each * mu_each);
    } else {
      sig1 = sigma1_squared(constant, mu_release, n, config.k_folds);
      sig2 = sigma2_squared(constant, mu_release, n, config.k_folds);
    }
  }

  EstimateReport report;
  report.kind = config.kind;
  report.n = n;
  report.k = config.k_folds;
  report.seed = config.seed;
  report.non_private = config.non_private;
  report.ci_method = config.ci_method;
  report.mu_ate = mu_each;
  report.mu_var = mu_each;

  RngStream ate_stream = release_stream(config.seed, 0);
  const AteRelease ate = private_ate(scores, sig1, ate_stream);
  report.tau_dp = ate.tau_dp;
  if (config.non_private) report.tau_nonprivate = ate.tau_nonprivate;

  RngStream var_stream = release_stream(config.seed, 1);
  report.v_dp = private_variance(scores, ate.tau_nonprivate, sig1, sig2, var_stream);

  std::vector<PrivacyBudget> consumed{mu_release, mu_release};
  switch (config.ci_method) {
    case CiMethod::None:
      break;
    case CiMethod::Asymptotic:
      report.ci = asymptotic_ci(report.tau_dp, report.v_dp, n, config.alpha, config.alpha1, sig2);
      break;
    case CiMethod::Bootstrap:
    case CiMethod::Pointwise: {
      BoundScores bound_scores;
      if (config.ci_method == CiMethod::Bootstrap) {
        bound_scores = bootstrap_bounds(
            data, folds, config.spec_pi, config.spec_mu, config.bounds, config.kind,
            config.bootstrap_r, config.alpha, seeds.ci_bounds);
      } else {
        bound_scores = pointwise_variance_bounds(
            data, folds, forest_pointwise_cates(data, folds, config), config.alpha,
            config.bounds);
      }
      // Bound scores are clipped to [-2 B_mu, 2 B_mu], so their means carry
      // the G-formula sensitivity regardless of the score kind.
      const EstimatorConstant g_constant = estimator_constant(EstimatorKind::G, config.bounds);
      const double ci_sig1 =
          config.non_private ? 0.0 : sigma1_squared(g_constant, mu_release, n, config.k_folds);
      RngStream ci_stream = release_stream(config.seed, 2);
      const IntervalRelease interval = private_interval(bound_scores, ci_sig1, config.beta,
                                                        config.bounds.b_mu, n, ci_stream);
      report.ci = std::make_pair(interval.tau_minus, interval.tau_plus);
      report.mu_ci = mu_each;
      consumed.push_back(mu_release);
      consumed.push_back(mu_release);
      break;
    }
  }

  report.budget = compose(std::span<const PrivacyBudget>(consumed.data(), consumed.size()));
  report.epsilon_at_1e5 = config.non_private
                              ? std::numeric_limits<double>::quiet_NaN()
                              : epsilon_for_delta(report.budget, 1e-5);
  for (const NuisanceTriple& triple : ensemble.triples) {
    if (triple.missing_control || triple.missing_treated) report.warning_missing_arm = true;
  }
  return report;
}

std::string to_string(CiMethod method) {
  switch (method) {
    case CiMethod::None: return "none";
    case CiMethod::Asymptotic: return "asymptotic";
    case CiMethod::Bootstrap: return "bootstrap";
    case CiMethod::Pointwise: return "pointwise";
  }
  return "?";
}

CiMethod ci_method_from_string(std::string_view name) {
  if (name == "none") return CiMethod::None;
  if (name == "asymptotic") return CiMethod::Asymptotic;
  if (name == "bootstrap") return CiMethod::Bootstrap;
  if (name == "pointwise") return CiMethod::Pointwise;
  throw ConfigError("unknown ci method '" + std::string(name) + "'");
}

}  // namespace dpcausal
