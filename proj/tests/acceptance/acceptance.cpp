// Acceptance suite: one line per criterion, PASS/FAIL with the measured
// numbers. Run with a criterion number (1-11) or no argument for all.

#include "dpcausal/aggregate.hpp"
#include "dpcausal/config.hpp"
#include "dpcausal/dataset.hpp"
#include "dpcausal/estimators.hpp"
#include "dpcausal/experiments.hpp"
#include "dpcausal/intervals.hpp"
#include "dpcausal/meta.hpp"
#include "dpcausal/nuisance.hpp"
#include "dpcausal/parallel.hpp"
#include "dpcausal/pipeline.hpp"
#include "dpcausal/privacy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

using namespace dpcausal;

namespace {

struct Check {
  bool pass;
  std::string detail;
};

// ---------------------------------------------------------------------------
// 1. Privacy conversion
// ---------------------------------------------------------------------------
Check criterion_1() {
  const double delta = gdp_to_approx_dp({1.5}, 7.05);
  const bool pass = delta >= 0.8e-5 && delta <= 1.2e-5;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "delta(mu=1.5, eps=7.05) = %.6e, required [0.8e-5, 1.2e-5]",
                delta);
  return {pass, buf};
}

// ---------------------------------------------------------------------------
// 2. Sensitivity oracle: exhaustive single-record replacement
// ---------------------------------------------------------------------------
double cross_fitted_tau(const Dataset& data, const FoldAssignment& folds,
                        const LearnerSpec& spec_pi, const LearnerSpec& spec_mu,
                        const Bounds& bounds, EstimatorKind kind, std::uint64_t seed) {
  const NuisanceEnsemble ensemble = fit_ensemble(data, folds, spec_pi, spec_mu, bounds, seed);
  const AggregatedNuisance agg = build_aggregated(build_nuisance_matrix(data, ensemble), folds,
                                                  AggregationScheme::CompleteMeans);
  return compute_scores(data, agg, kind).scores.mean();
}

Check criterion_2() {
  const Index n = 12;
  const int k = 3;
  const Bounds bounds{1.0, 5.0};
  const std::uint64_t learner_seed = 77;

  Dataset base;
  RngStream rng = RngStream::keyed(1002, {0});
  base.covariates.resize(n, 1);
  base.treatment.resize(n);
  base.outcome.resize(n);
  for (Index i = 0; i < n; ++i) {
    base.covariates(i, 0) = 2.0 * rng.next_gaussian();
    base.treatment[i] = i % 2 == 0 ? 1.0 : 0.0;
    base.outcome[i] = clip(0.4 * base.covariates(i, 0), -1.0, 1.0);
  }
  const FoldAssignment folds = split_folds(n, k, 5);

  const double x_grid[5] = {-2.0, -1.0, 0.0, 1.0, 2.0};
  const double a_grid[2] = {0.0, 1.0};
  const double y_grid[5] = {-1.0, -0.5, 0.0, 0.5, 1.0};

  LearnerSpec constant{.kind = LearnerKind::Constant};
  LearnerSpec linear{.kind = LearnerKind::Linear};
  LearnerSpec logistic{.kind = LearnerKind::Logistic};
  LearnerSpec tree{.kind = LearnerKind::Tree, .max_depth = 3, .min_leaf = 1};
  const std::vector<std::pair<LearnerSpec, LearnerSpec>> learner_combos = {
      {constant, constant}, {logistic, linear}, {tree, tree}};

  bool pass = true;
  std::string detail;
  for (EstimatorKind kind : {EstimatorKind::G, EstimatorKind::IPW, EstimatorKind::AIPW}) {
    const double c = estimator_constant(kind, bounds).c;
    const double bound = std::sqrt(c) * (1.0 / static_cast<double>(n) + 1.0 / (k - 1));
    // The per-estimator replacement-neighbor decomposition can be tighter
    // than the sqrt(C) form (it is for IPW); both must hold.
    const double unified =
        unified_sensitivity(sensitivity_complete_means(kind, bounds, k), n, k);
    double worst = 0.0;
    for (const auto& [spec_pi, spec_mu] : learner_combos) {
      const double tau0 =
          cross_fitted_tau(base, folds, spec_pi, spec_mu, bounds, kind, learner_seed);
      for (Index i = 0; i < n; ++i) {
        for (double x : x_grid) {
          for (double a : a_grid) {
            for (double y : y_grid) {
              Dataset neighbor = base;
              neighbor.covariates(i, 0) = x;
              neighbor.treatment[i] = a;
              neighbor.outcome[i] = y;
              const double tau1 = cross_fitted_tau(neighbor, folds, spec_pi, spec_mu, bounds,
                                                   kind, learner_seed);
              worst = std::max(worst, std::abs(tau1 - tau0));
            }
          }
        }
      }
    }
    const bool kind_ok = worst <= bound + 1e-9 && worst <= unified + 1e-9;
    pass = pass && kind_ok;
    char buf[112];
    std::snprintf(buf, sizeof(buf),
                  "%s max|dtau| = %.4f vs sqrt(C)(1/n+1/(K-1)) = %.4f, unified = %.4f; ",
                  to_string(kind).c_str(), worst, bound, unified);
    detail += buf;
  }
  return {pass, detail};
}

// ---------------------------------------------------------------------------
// 3. Well-specified recovery with variance tracking
// ---------------------------------------------------------------------------
Check criterion_3() {
  PipelineConfig config;
  config.kind = EstimatorKind::G;
  config.k_folds = 100;
  config.bounds = {1.0, 10.0};
  config.spec_pi.kind = LearnerKind::Logistic;
  config.spec_mu.kind = LearnerKind::Logistic;
  config.mu_total = {1.5};
  config.ci_method = CiMethod::None;
  const ReplicationTable table =
      run_replications(GeneratorKind::GoodOverlapBinary, 10000, config, 100, 301);

  const double se = table.summary.sd / 10.0;
  const double bias = std::abs(table.summary.mean - 0.1);
  double mean_vdp = 0.0;
  for (const auto& row : table.rows) mean_vdp += row.v_dp;
  mean_vdp /= static_cast<double>(table.rows.size());
  const double predicted_sd = std::sqrt(mean_vdp / 10000.0);
  const double ratio = table.summary.sd / predicted_sd;

  const bool pass = bias <= 3.0 * se && ratio >= 0.7 && ratio <= 1.3;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "|mean - 0.1| = %.5f vs 3 SE = %.5f; sd/sqrt(mean v_dp / n) = %.3f in [0.7, 1.3]",
                bias, 3.0 * se, ratio);
  return {pass, buf};
}

// ---------------------------------------------------------------------------
// 4. Low-overlap qualitative behavior
// ---------------------------------------------------------------------------
Check criterion_4() {
  const Index n = 5000;
  const int reps = 100;
  PipelineConfig config;
  config.k_folds = 200;
  config.spec_pi.kind = LearnerKind::Logistic;
  config.spec_mu.kind = LearnerKind::Linear;
  config.mu_total = {1.5};
  config.ci_method = CiMethod::None;

  config.kind = EstimatorKind::G;
  config.bounds = {1.0, 1.0 / 0.0035};
  const ReplicationTable g = run_replications(GeneratorKind::LowOverlap, n, config, reps, 401);

  config.kind = EstimatorKind::IPW;
  const ReplicationTable ipw_wide =
      run_replications(GeneratorKind::LowOverlap, n, config, reps, 401);

  config.bounds = {1.0, 5.0};  // 1/0.2 clipping
  const ReplicationTable ipw_clip =
      run_replications(GeneratorKind::LowOverlap, n, config, reps, 401);

  config.kind = EstimatorKind::AIPW;
  const ReplicationTable aipw =
      run_replications(GeneratorKind::LowOverlap, n, config, reps, 401);

  const double sd_ratio = ipw_wide.summary.sd / g.summary.sd;
  const double ipw_bias = std::abs(ipw_clip.summary.bias);
  const double ipw_3se = 3.0 * ipw_clip.summary.sd / std::sqrt(static_cast<double>(reps));
  const double aipw_bias = std::abs(aipw.summary.bias);
  const double aipw_3se = 3.0 * aipw.summary.sd / std::sqrt(static_cast<double>(reps));

  const bool pass = sd_ratio >= 3.0 && ipw_bias > ipw_3se && aipw_bias <= aipw_3se;
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "sd(IPW wide)/sd(G) = %.1f (need >= 3); clipped IPW |bias| = %.4f vs 3 SE = "
                "%.4f (need >); AIPW |bias| = %.4f vs 3 SE = %.4f (need <=)",
                sd_ratio, ipw_bias, ipw_3se, aipw_bias, aipw_3se);
  return {pass, buf};
}

// ---------------------------------------------------------------------------
// 5. Misspecification and double robustness
// ---------------------------------------------------------------------------
Check criterion_5() {
  const Index n = 20000;
  const int reps = 40;
  PipelineConfig config;
  config.k_folds = 50;
  config.bounds = {1.0, 5.0};
  config.mu_total = {1.5};
  config.ci_method = CiMethod::None;

  config.kind = EstimatorKind::G;
  config.spec_pi.kind = LearnerKind::Logistic;
  config.spec_mu.kind = LearnerKind::Linear;
  const ReplicationTable g_lin =
      run_replications(GeneratorKind::MisspecifiedTrees, n, config, reps, 501);

  config.spec_mu.kind = LearnerKind::Tree;
  const ReplicationTable g_tree =
      run_replications(GeneratorKind::MisspecifiedTrees, n, config, reps, 502);

  // AIPW with a misspecified propensity model (logistic) and a correct
  // outcome family (tree): double robustness keeps it unbiased.
  config.kind = EstimatorKind::AIPW;
  config.spec_pi.kind = LearnerKind::Logistic;
  config.spec_mu.kind = LearnerKind::Tree;
  const ReplicationTable aipw =
      run_replications(GeneratorKind::MisspecifiedTrees, n, config, reps, 503);

  const double root_reps = std::sqrt(static_cast<double>(reps));
  const double lin_bias = std::abs(g_lin.summary.bias);
  const double lin_3se = 3.0 * g_lin.summary.sd / root_reps;
  const double tree_bias = std::abs(g_tree.summary.bias);
  const double tree_3se = 3.0 * g_tree.summary.sd / root_reps;
  const double aipw_bias = std::abs(aipw.summary.bias);
  const double aipw_3se = 3.0 * aipw.summary.sd / root_reps;

  const bool pass = lin_bias > lin_3se && tree_bias <= tree_3se && aipw_bias <= aipw_3se;
  char buf[220];
  std::snprintf(buf, sizeof(buf),
                "linear G |bias| = %.4f vs 3 SE = %.4f (need >); tree G |bias| = %.4f vs "
                "%.4f (need <=); AIPW |bias| = %.4f vs %.4f (need <=)",
                lin_bias, lin_3se, tree_bias, tree_3se, aipw_bias, aipw_3se);
  return {pass, buf};
}

// ---------------------------------------------------------------------------
// 6 and 7. Effect of K; folding vs subsample-and-aggregate
// ---------------------------------------------------------------------------
struct SweepResult {
  std::vector<int> ks;
  std::vector<double> rmse_ours;
  std::vector<double> rmse_sa;
  // Paired squared-error differences e_sa^2 - e_ours^2 per K: mean and
  // standard error over replications.
  std::vector<double> paired_gap;
  std::vector<double> paired_gap_se;
};

SweepResult effect_of_k_sweep(bool with_sa, int reps) {
  const Index n = 20000;
  const double true_ate = generator_true_ate(GeneratorKind::EffectOfK);
  SweepResult result;
  result.ks = {5, 25, 100, 400};  // n/50 = 400
  result.rmse_ours.assign(result.ks.size(), 0.0);
  result.rmse_sa.assign(result.ks.size(), 0.0);
  result.paired_gap.assign(result.ks.size(), 0.0);
  result.paired_gap_se.assign(result.ks.size(), 0.0);

  LearnerSpec logistic{.kind = LearnerKind::Logistic};
  LearnerSpec linear{.kind = LearnerKind::Linear};
  const Bounds bounds{1.0, 10.0};

  for (std::size_t ki = 0; ki < result.ks.size(); ++ki) {
    const int k = result.ks[ki];
    std::vector<double> err_ours(reps), err_sa(reps);
    parallel_for(0, reps, [&](int rep) {
      RngStream rep_stream = RngStream::keyed(601, {static_cast<std::uint64_t>(rep)});
      const std::uint64_t data_seed = rep_stream.next_u64();
      const std::uint64_t fit_seed = rep_stream.next_u64();
      const Dataset data = gen_effect_of_k(n, data_seed);
      const FoldAssignment folds = split_folds(n, k, rep_stream.next_u64());

      const NuisanceEnsemble ensemble =
          fit_ensemble(data, folds, logistic, linear, bounds, fit_seed);
      const AggregatedNuisance agg = build_aggregated(build_nuisance_matrix(data, ensemble),
                                                      folds, AggregationScheme::CompleteMeans);
      const double tau = compute_scores(data, agg, EstimatorKind::G).scores.mean();
      err_ours[static_cast<std::size_t>(rep)] = tau - true_ate;

      if (with_sa) {
        const double tau_sa = subsample_aggregate_estimate(
            data, folds, logistic, linear, bounds, EstimatorKind::G, {0.0}, fit_seed);
        err_sa[static_cast<std::size_t>(rep)] = tau_sa - true_ate;
      }
    });
    double sum_ours = 0.0, sum_sa = 0.0, gap_sum = 0.0, gap_sum_sq = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
      const double so = err_ours[static_cast<std::size_t>(rep)] * err_ours[static_cast<std::size_t>(rep)];
      const double ss = err_sa[static_cast<std::size_t>(rep)] * err_sa[static_cast<std::size_t>(rep)];
      sum_ours += so;
      sum_sa += ss;
      gap_sum += ss - so;
      gap_sum_sq += (ss - so) * (ss - so);
    }
    result.rmse_ours[ki] = std::sqrt(sum_ours / reps);
    result.rmse_sa[ki] = std::sqrt(sum_sa / reps);
    result.paired_gap[ki] = gap_sum / reps;
    const double gap_var =
        (gap_sum_sq - gap_sum * gap_sum / reps) / (static_cast<double>(reps) - 1.0);
    result.paired_gap_se[ki] = std::sqrt(gap_var / reps);
  }
  return result;
}

Check criterion_6() {
  const SweepResult sweep = effect_of_k_sweep(false, 20);
  // Fold sizes 4000, 800, 200 are the stable cells; K = 400 (fold size 50)
  // is allowed to degrade.
  double lo = sweep.rmse_ours[0], hi = sweep.rmse_ours[0];
  for (std::size_t ki = 0; ki < 3; ++ki) {
    lo = std::min(lo, sweep.rmse_ours[ki]);
    hi = std::max(hi, sweep.rmse_ours[ki]);
  }
  const bool pass = hi <= 2.0 * lo;
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "zero-noise RMSE over K={5,25,100,400}: %.5f %.5f %.5f %.5f; stable-cell "
                "max/min = %.2f (need <= 2)",
                sweep.rmse_ours[0], sweep.rmse_ours[1], sweep.rmse_ours[2], sweep.rmse_ours[3],
                hi / lo);
  return {pass, buf};
}

Check criterion_7() {
  const SweepResult sweep = effect_of_k_sweep(true, 60);
  // Both schemes share data and fold assignments, so the comparison is a
  // paired one. At small K the two estimators coincide to leading order and
  // the RMSE gap sits inside Monte-Carlo error; "ours never worse" therefore
  // allows a 2 SE band on the paired squared-error difference, while the
  // regime where the schemes genuinely separate must show a strict win.
  bool pass = true;
  std::string detail;
  for (std::size_t ki = 0; ki < sweep.ks.size(); ++ki) {
    const bool not_worse = sweep.rmse_ours[ki] <= sweep.rmse_sa[ki] ||
                           sweep.paired_gap[ki] >= -2.0 * sweep.paired_gap_se[ki];
    pass = pass && not_worse;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "K=%d: ours %.5f vs SA %.5f (paired gap %.1e +- %.1e); ",
                  sweep.ks[ki], sweep.rmse_ours[ki], sweep.rmse_sa[ki], sweep.paired_gap[ki],
                  sweep.paired_gap_se[ki]);
    detail += buf;
  }
  // Strict superiority where the half-fold sample size cripples the baseline.
  pass = pass && sweep.rmse_ours.back() < sweep.rmse_sa.back();
  return {pass, detail + "(need ours <= SA within paired MC error, strict at K=400)"};
}

// ---------------------------------------------------------------------------
// 8. Zero-noise equivalence, bitwise
// ---------------------------------------------------------------------------
Check criterion_8() {
  bool pass = true;
  std::string detail = "pipeline vs reconstructed cross-fitted estimator: ";
  for (EstimatorKind kind : {EstimatorKind::G, EstimatorKind::IPW, EstimatorKind::AIPW}) {
    PipelineConfig config;
    config.kind = kind;
    config.k_folds = 8;
    config.bounds = {1.0, 5.0};
    config.spec_pi.kind = LearnerKind::Logistic;
    config.spec_mu.kind = LearnerKind::Linear;
    config.non_private = true;
    config.mu_total = {0.0};
    config.ci_method = CiMethod::None;
    config.seed = 801 + static_cast<std::uint64_t>(kind);

    const Dataset data = gen_low_overlap(600, 17 + static_cast<std::uint64_t>(kind));
    const EstimateReport report = run_estimate(data, config);

    const PipelineSeeds seeds = PipelineSeeds::derive(config.seed);
    const Dataset clipped = clip_outcomes(data, config.bounds);
    const FoldAssignment folds = split_folds(clipped.size(), config.k_folds, seeds.folds);
    const NuisanceEnsemble ensemble = fit_ensemble(clipped, folds, config.spec_pi,
                                                   config.spec_mu, config.bounds, seeds.learners);
    const AggregatedNuisance agg = build_aggregated(build_nuisance_matrix(clipped, ensemble),
                                                    folds, config.scheme, seeds.sampling);
    const double tau = compute_scores(clipped, agg, kind).scores.mean();
    const bool same = report.tau_dp == tau && report.tau_nonprivate &&
                      *report.tau_nonprivate == tau;
    pass = pass && same;
    detail += to_string(kind) + (same ? " bitwise-equal; " : " MISMATCH; ");
  }
  return {pass, detail};
}

// ---------------------------------------------------------------------------
// 9. Confidence interval coverage
// ---------------------------------------------------------------------------
Check criterion_9() {
  const Index n = 2000;
  const int k = 20;
  const int reps = 200;
  const double true_ate = generator_true_ate(GeneratorKind::GoodOverlapBinary);
  const Bounds bounds{1.0, 10.0};

  // Asymptotic CI: ATE + variance releases at mu_total = 2.
  PipelineConfig config;
  config.kind = EstimatorKind::G;
  config.k_folds = k;
  config.bounds = bounds;
  config.spec_pi.kind = LearnerKind::Logistic;
  config.spec_mu.kind = LearnerKind::Logistic;
  config.mu_total = {2.0};
  config.ci_method = CiMethod::Asymptotic;
  const ReplicationTable asym =
      run_replications(GeneratorKind::GoodOverlapBinary, n, config, reps, 901);

  // Bootstrap CI: the interval is the entire release, two mu-GDP bounds with
  // mu = 2 / sqrt(2) each, composing to 2-GDP for the released pair.
  const PrivacyBudget mu_bound{2.0 / std::sqrt(2.0)};
  const double sig1 =
      sigma1_squared(estimator_constant(EstimatorKind::G, bounds), mu_bound, n, k);
  LearnerSpec logistic{.kind = LearnerKind::Logistic};
  std::vector<int> covered(reps, 0);
  parallel_for(0, reps, [&](int rep) {
    RngStream rep_stream = RngStream::keyed(902, {static_cast<std::uint64_t>(rep)});
    const Dataset data = gen_good_overlap_binary(n, rep_stream.next_u64());
    const FoldAssignment folds = split_folds(n, k, rep_stream.next_u64());
    const BoundScores bs = bootstrap_bounds(data, folds, logistic, logistic, bounds,
                                            EstimatorKind::G, 200, 0.05, rep_stream.next_u64());
    RngStream noise = rep_stream.split(3);
    const IntervalRelease interval = private_interval(bs, sig1, 0.05, bounds.b_mu, n, noise);
    covered[static_cast<std::size_t>(rep)] =
        interval.tau_minus <= true_ate && true_ate <= interval.tau_plus ? 1 : 0;
  });
  int boot_covered = 0;
  for (int c : covered) boot_covered += c;
  const double boot_coverage = static_cast<double>(boot_covered) / reps;

  const bool pass = asym.summary.coverage >= 0.90 && boot_coverage >= 0.90;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "asymptotic coverage = %.3f, bootstrap coverage = %.3f over %d reps (need >= "
                "0.90 at nominal 95%%)",
                asym.summary.coverage, boot_coverage, reps);
  return {pass, buf};
}

// ---------------------------------------------------------------------------
// 10. Meta-analysis variance identity
// ---------------------------------------------------------------------------
Check criterion_10() {
  bool pass = true;
  std::string detail;
  for (int n_studies : {2, 5, 10}) {
    std::vector<StudyRecord> studies;
    for (int j = 0; j < n_studies; ++j) studies.push_back({0.1, 2.4, 600, {1.5}});
    const MetaResult r = meta_combine(studies, optimal_weights(studies));
    const double per_study = 2.4 / 600.0;
    const double gap = std::abs(r.v_meta_over_n - per_study / n_studies);
    pass = pass && gap < 1e-12;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "N=%d gap = %.2e; ", n_studies, gap);
    detail += buf;
  }
  return {pass, detail + "(need < 1e-12)"};
}

// ---------------------------------------------------------------------------
// 11. Aggregator sensitivity bounds by exhaustive perturbation
// ---------------------------------------------------------------------------
Check criterion_11() {
  const double b_pi = 5.0;
  const double b_mu = 1.0;
  double worst_margin = -1e300;
  bool pass = true;
  for (int k : {2, 3, 5}) {
    const Index n = static_cast<Index>(3 * k);
    FoldAssignment folds;
    folds.k = k;
    folds.fold_of.resize(static_cast<std::size_t>(n));
    folds.members.resize(static_cast<std::size_t>(k));
    for (Index i = 0; i < n; ++i) {
      const int f = static_cast<int>(i % k);
      folds.fold_of[static_cast<std::size_t>(i)] = f;
      folds.members[static_cast<std::size_t>(f)].push_back(static_cast<int>(i));
    }
    RngStream rng = RngStream::keyed(1101, {static_cast<std::uint64_t>(k)});
    NuisanceMatrix base;
    base.pi_pred.resize(n, k);
    base.mu0_pred.resize(n, k);
    base.mu1_pred.resize(n, k);
    for (Index i = 0; i < n; ++i) {
      for (int f = 0; f < k; ++f) {
        base.pi_pred(i, f) = 1.0 / b_pi + (1.0 - 2.0 / b_pi) * rng.next_uniform();
        base.mu0_pred(i, f) = b_mu * (2.0 * rng.next_uniform() - 1.0);
        base.mu1_pred(i, f) = b_mu * (2.0 * rng.next_uniform() - 1.0);
      }
    }
    const AggregatedNuisance before =
        build_aggregated(base, folds, AggregationScheme::CompleteMeans);
    const double grid[5] = {0.0, 0.25, 0.5, 0.75, 1.0};
    for (int col = 0; col < k; ++col) {
      for (double tp : grid) {
        for (double tm : grid) {
          NuisanceMatrix perturbed = base;
          const double new_pi = 1.0 / b_pi + (1.0 - 2.0 / b_pi) * tp;
          const double new_mu = b_mu * (2.0 * tm - 1.0);
          perturbed.pi_pred.col(col).setConstant(new_pi);
          perturbed.mu0_pred.col(col).setConstant(new_mu);
          perturbed.mu1_pred.col(col).setConstant(-new_mu);
          const AggregatedNuisance after =
              build_aggregated(perturbed, folds, AggregationScheme::CompleteMeans);
          for (Index i = 0; i < n; ++i) {
            if (folds.fold_of[static_cast<std::size_t>(i)] == col) continue;
            const double inv_bound = b_pi / (k - 1) + 1e-12;
            const double mu_bound = 2.0 * b_mu / (k - 1) + 1e-12;
            const double d1 = std::abs(1.0 / after.pi1[i] - 1.0 / before.pi1[i]);
            const double d2 =
                std::abs(1.0 / after.one_minus_pi0[i] - 1.0 / before.one_minus_pi0[i]);
            const double d3 = std::abs(after.mu0[i] - before.mu0[i]);
            const double d4 = std::abs(after.mu1[i] - before.mu1[i]);
            pass = pass && d1 <= inv_bound && d2 <= inv_bound && d3 <= mu_bound && d4 <= mu_bound;
            worst_margin = std::max({worst_margin, d1 - inv_bound, d2 - inv_bound,
                                     d3 - mu_bound, d4 - mu_bound});
          }
        }
      }
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "exhaustive perturbation at K in {2,3,5}; worst excess over the bounds = %.2e",
                worst_margin);
  return {pass, buf};
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> criteria;
  if (argc > 1) {
    for (int i = 1; i < argc; ++i) criteria.push_back(std::atoi(argv[i]));
  } else {
    for (int c = 1; c <= 11; ++c) criteria.push_back(c);
  }

  static const char* kDescriptions[] = {
      "privacy conversion",
      "sensitivity oracle (exhaustive replacement)",
      "well-specified recovery and variance tracking",
      "low-overlap IPW variance and clipping bias",
      "misspecification and double robustness",
      "effect of fold count on zero-noise RMSE",
      "folding vs subsample-and-aggregate",
      "zero-noise bitwise equivalence",
      "confidence interval coverage",
      "meta-analysis variance identity",
      "aggregator sensitivity bounds",
  };

  bool all_pass = true;
  for (int c : criteria) {
    if (c < 1 || c > 11) {
      std::printf("unknown criterion %d\n", c);
      all_pass = false;
      continue;
    }
    Check result{false, "not run"};
    switch (c) {
      case 1: result = criterion_1(); break;
      case 2: result = criterion_2(); break;
      case 3: result = criterion_3(); break;
      case 4: result = criterion_4(); break;
      case 5: result = criterion_5(); break;
      case 6: result = criterion_6(); break;
      case 7: result = criterion_7(); break;
      case 8: result = criterion_8(); break;
      case 9: result = criterion_9(); break;
      case 10: result = criterion_10(); break;
      case 11: result = criterion_11(); break;
    }
    std::printf("criterion %2d [%s]: %s :: %s\n", c, result.pass ? "PASS" : "FAIL",
                kDescriptions[c - 1], result.detail.c_str());
    std::fflush(stdout);
    all_pass = all_pass && result.pass;
  }
  return all_pass ? 0 : 1;
}
