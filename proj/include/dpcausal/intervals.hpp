#pragma once

#include "dpcausal/dataset.hpp"
#include "dpcausal/estimators.hpp"
#include "dpcausal/nuisance.hpp"
#include "dpcausal/types.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace dpcausal {

// Per-record lower and upper CATE bounds, clipped to [-2 B_mu, 2 B_mu].
struct BoundScores {
  Vector gamma_minus;
  Vector gamma_plus;
};

// Empirical quantile convention: the element of rank ceil(q * r) in the
// sorted sample (1-indexed), clamped to [1, r].
double empirical_quantile(std::vector<double> sample, double q);

// Within-fold bootstrap bounds. For each fold k and replication b, nuisances
// are refit on a with-replacement resample of the fold; per record and
// foreign fold the alpha/2 and 1-alpha/2 quantiles of the debiased replicate
// scores are averaged over the K-1 foreign folds.
BoundScores bootstrap_bounds(const Dataset& data, const FoldAssignment& folds,
                             const LearnerSpec& spec_pi, const LearnerSpec& spec_mu,
                             const Bounds& bounds, EstimatorKind kind, int replications,
                             double alpha, std::uint64_t seed);

// Per-fold CATE point estimate and pointwise variance estimate, the hook for
// learners with built-in uncertainty (e.g. forest ensembles).
struct PointwiseCate {
  std::function<double(RowRef)> score;
  std::function<double(RowRef)> variance;
};

// Bonferroni-corrected normal bounds: per foreign fold k, project
// score_k(x_i) +- Phi^{-1}(1 - alpha/(2nK)) sqrt(var_k(x_i)) onto
// [-2 B_mu, 2 B_mu] and average the projections.
BoundScores pointwise_variance_bounds(const Dataset& data, const FoldAssignment& folds,
                                      const std::vector<PointwiseCate>& cates, double alpha,
                                      const Bounds& bounds);

struct IntervalRelease {
  double tau_minus = 0.0;
  double tau_plus = 0.0;
  bool degenerate_bounds = false;  // gamma_minus == gamma_plus everywhere
};

// Noised means of the two bound vectors (independent draws), widened by
// Phi^{-1}(1 - beta/2) (sigma1 + B_mu / (2 sqrt(n))). Two mu-GDP releases,
// sqrt(2) mu-GDP in total; sigma1_sq must be calibrated with the G constant.
IntervalRelease private_interval(const BoundScores& bounds_scores, double sigma1_sq, double beta,
                                 double b_mu, Index n, RngStream& rng);

}  // namespace dpcausal
