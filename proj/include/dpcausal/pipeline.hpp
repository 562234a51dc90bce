#pragma once

#include "dpcausal/aggregate.hpp"
#include "dpcausal/dataset.hpp"
#include "dpcausal/estimators.hpp"
#include "dpcausal/learners.hpp"
#include "dpcausal/privacy.hpp"
#include "dpcausal/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

namespace dpcausal {

enum class CiMethod { None, Asymptotic, Bootstrap, Pointwise };

std::string to_string(CiMethod method);
CiMethod ci_method_from_string(std::string_view name);

// Everything the five-step pipeline needs besides the data itself.
struct PipelineConfig {
  EstimatorKind kind = EstimatorKind::G;
  int k_folds = 2;
  Bounds bounds;
  LearnerSpec spec_pi{.kind = LearnerKind::Logistic};
  LearnerSpec spec_mu{.kind = LearnerKind::Linear};
  AggregationScheme scheme = AggregationScheme::CompleteMeans;
  PrivacyBudget mu_total;
  bool non_private = false;
  CiMethod ci_method = CiMethod::Asymptotic;
  double alpha = 0.05;   // CI coverage level 1 - alpha
  double alpha1 = 0.02;  // variance-inflation share of the asymptotic CI
  double beta = 0.05;    // widening level of the fold-based CIs
  int bootstrap_r = 200;
  std::uint64_t seed = 1;
  std::string debug_matrix_csv;  // when set, dump the prediction matrix here

  void check() const;
};

struct EstimateReport {
  EstimatorKind kind = EstimatorKind::G;
  Index n = 0;
  int k = 0;
  double tau_dp = 0.0;
  double v_dp = 0.0;
  std::optional<std::pair<double, double>> ci;
  CiMethod ci_method = CiMethod::None;
  PrivacyBudget budget;  // total budget consumed
  double mu_ate = 0.0;
  double mu_var = 0.0;
  double mu_ci = 0.0;               // per-bound budget of a fold-based CI
  double epsilon_at_1e5 = 0.0;      // NaN in non-private mode
  std::uint64_t seed = 0;
  bool non_private = false;
  std::optional<double> tau_nonprivate;  // only populated in non-private mode
  bool warning_missing_arm = false;
};

// Sub-seeds derived from the run seed; fold splitting, learner fits,
// sampling aggregation, and each noise release own independent streams.
struct PipelineSeeds {
  std::uint64_t folds = 0;
  std::uint64_t learners = 0;
  std::uint64_t sampling = 0;
  std::uint64_t ci_bounds = 0;

  static PipelineSeeds derive(std::uint64_t run_seed);
};

// The five-step pipeline: split, fit, aggregate, score, release. The budget
// is split equally across the point, variance, and (if any) interval
// releases so that their composition equals mu_total.
EstimateReport run_estimate(const Dataset& raw_data, const PipelineConfig& config);

}  // namespace dpcausal
