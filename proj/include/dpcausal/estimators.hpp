#pragma once

#include "dpcausal/aggregate.hpp"
#include "dpcausal/dataset.hpp"
#include "dpcausal/privacy.hpp"
#include "dpcausal/types.hpp"

#include <functional>
#include <utility>

namespace dpcausal {

// Per-record scores whose average is the ATE estimate. Bounded by 2 B_mu (G),
// B_mu B_pi (IPW), or 2 B_mu (1 + B_pi) (AIPW) when nuisances are clipped.
struct ScoreVector {
  Vector scores;
  EstimatorKind kind = EstimatorKind::G;
};

ScoreVector compute_scores(const Dataset& data, const AggregatedNuisance& agg,
                           EstimatorKind kind);

// Score of a single record under one triple's nuisances; used by the
// confidence-interval procedures and the subsample-and-aggregate baseline.
double single_triple_score(const NuisanceTriple& triple, RowRef x, double a, double y,
                           EstimatorKind kind);

struct AteRelease {
  double tau_dp = 0.0;
  // Retained for the explicit non-private mode and internal diagnostics;
  // never emitted through a private release path.
  double tau_nonprivate = 0.0;
};

// tau_hat = mean of scores; tau_dp = tau_hat + N(0, sigma1_sq).
AteRelease private_ate(const ScoreVector& scores, double sigma1_sq, RngStream& rng);

// (sqrt(sample variance of scores) + N(0, sigma2_sq))^2 + n sigma1_sq.
// Estimates the variance of sqrt(n) (tau_dp - tau); Var(tau_dp) ~ v_dp / n.
double private_variance(const ScoreVector& scores, double tau_hat, double sigma1_sq,
                        double sigma2_sq, RngStream& rng);

// Interval centered at tau_dp with half-width
// Phi^{-1}(1 - alpha/2 + alpha1/2) * sqrt((v_dp + Phi^{-1}(1 - alpha1/2) sigma2_sq) / n).
// Pure post-processing of released values.
std::pair<double, double> asymptotic_ci(double tau_dp, double v_dp, Index n, double alpha,
                                        double alpha1, double sigma2_sq);

// Data-generating process with known nuisances, used to evaluate the oracle
// asymptotic variances by Monte Carlo for acceptance-level checks.
struct OracleModel {
  std::function<RowVector(RngStream&)> sample_covariates;
  std::function<double(RowRef)> propensity;
  std::function<double(RowRef)> mu0;
  std::function<double(RowRef)> mu1;
  std::function<double(RowRef, int, RngStream&)> sample_outcome;  // (x, arm, rng)
  double true_ate = 0.0;
};

double oracle_variance_reference(EstimatorKind kind, const OracleModel& model, Index draws,
                                 std::uint64_t seed);

}  // namespace dpcausal
