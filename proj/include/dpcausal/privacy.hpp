#pragma once

#include "dpcausal/rng.hpp"
#include "dpcausal/types.hpp"

#include <cstdint>
#include <span>

namespace dpcausal {

// Gaussian differential privacy parameter. mu = 0 is reserved for the
// explicit non-private mode: no noise is added and no guarantee is claimed.
struct PrivacyBudget {
  double mu = 0.0;

  bool non_private() const { return mu == 0.0; }

  void check() const {
    if (!(mu >= 0.0)) throw PrivacyError("privacy budget must be nonnegative");
  }
};

// Replacement-neighbor sensitivity decomposition of a fold-based estimator:
// delta_eq bounds the change of the modified record's own score, delta_neq
// the aggregate cross-fold change, and score_bound the uniform score bound M.
struct SensitivityPair {
  double delta_eq = 0.0;
  double delta_neq = 0.0;
  double score_bound = 0.0;
};

// Estimator-specific constant C entering the noise calibration.
struct EstimatorConstant {
  double c = 0.0;
};

// C = 16 B_mu^2 (G), 4 B_mu^2 B_pi^2 (IPW), 16 B_mu^2 (1+B_pi)^2 (AIPW).
EstimatorConstant estimator_constant(EstimatorKind kind, const Bounds& bounds);

// Noise variance for the ATE release: (C / mu1^2) * (1/n + 1/(K-1))^2.
double sigma1_squared(EstimatorConstant c, PrivacyBudget mu1, Index n, int k);

// Noise variance for the sqrt-variance release:
// (2 C n / (mu2^2 (n-1))) * (1/n + 1/(K-1) + sqrt(1/n + 1/(K-1)))^2.
double sigma2_squared(EstimatorConstant c, PrivacyBudget mu2, Index n, int k);

// Worst-case estimator sensitivity delta_eq/n + delta_neq/K.
double unified_sensitivity(const SensitivityPair& s, Index n, int k);

// Sensitivity of sqrt of the sample variance of the scores:
// sqrt(2n/(n-1)) * (2 sqrt(M) sqrt(t) + t) with t = delta_eq/n + delta_neq/K.
double sqrt_variance_sensitivity(const SensitivityPair& s, Index n, int k);

// Per-estimator sensitivity pairs for the complete-means aggregators.
SensitivityPair sensitivity_complete_means(EstimatorKind kind, const Bounds& bounds, int k);

// Per-estimator sensitivity pairs for the sampling aggregator, given the
// realized maximum number of records assigned to any single fold's model.
SensitivityPair sensitivity_sampling(EstimatorKind kind, const Bounds& bounds, int k,
                                     Index max_assigned, Index n);

// value + N(0, variance), drawn from the given stream. Variance 0 returns
// the value unchanged without consuming randomness.
double add_gaussian_noise(double value, double variance, RngStream& rng);
double add_gaussian_noise(double value, double variance, std::uint64_t seed);

// Composition: sqrt of the sum of squared budgets.
PrivacyBudget compose(std::span<const PrivacyBudget> budgets);
PrivacyBudget compose(std::initializer_list<PrivacyBudget> budgets);

// delta such that a mu-GDP algorithm is (epsilon, delta)-DP:
// delta = Phi(-eps/mu + mu/2) - e^eps Phi(-eps/mu - mu/2).
double gdp_to_approx_dp(PrivacyBudget mu, double epsilon);

// Smallest epsilon at which a mu-GDP algorithm is (epsilon, delta)-DP.
double epsilon_for_delta(PrivacyBudget mu, double delta);

}  // namespace dpcausal
