#pragma once

#include "dpcausal/dataset.hpp"
#include "dpcausal/nuisance.hpp"
#include "dpcausal/types.hpp"

#include <cstdint>
#include <vector>

namespace dpcausal {

// Per-record predictions of every fold model: column k holds model k
// evaluated at each record's covariates.
struct NuisanceMatrix {
  Matrix pi_pred;   // n x K, clipped propensities
  Matrix mu0_pred;  // n x K
  Matrix mu1_pred;  // n x K
};

NuisanceMatrix build_nuisance_matrix(const Dataset& data, const NuisanceEnsemble& ensemble);

enum class AggregationScheme { CompleteMeans, Sampling };

std::string to_string(AggregationScheme scheme);
AggregationScheme aggregation_scheme_from_string(std::string_view name);

// Ensemble nuisances for each record, built only from the K-1 models trained
// without that record. Propensities for the two arms are tracked separately.
struct AggregatedNuisance {
  Vector pi1;            // harmonic mean of pi over foreign folds
  Vector one_minus_pi0;  // harmonic mean of 1 - pi over foreign folds
  Vector mu0;
  Vector mu1;
  std::vector<int> chosen_fold;  // sampling scheme only: realized l(i)
};

// Arithmetic mean of the K-1 entries excluding own_fold.
double aggregate_outcome_mean(RowRef preds, int own_fold);

// Harmonic mean over foreign folds of pi (treated arm) or of 1 - pi
// (control arm). Inputs must lie strictly inside (0, 1).
double aggregate_propensity_harmonic(RowRef preds, int own_fold, bool treated_arm);

// Prediction of one foreign fold drawn uniformly from [K] \ {own_fold}.
double aggregate_sampling(RowRef preds, int own_fold, RngStream& rng);

// Applies the scheme row-wise. For sampling, one fold l(i) is drawn per
// record and reused for all three nuisances.
AggregatedNuisance build_aggregated(const NuisanceMatrix& matrix, const FoldAssignment& folds,
                                    AggregationScheme scheme, std::uint64_t seed = 0);

// Audit dump of the prediction matrix, one row per record:
// record,fold,pi,mu0,mu1.
void dump_nuisance_matrix_csv(const NuisanceMatrix& matrix, const std::string& path);

}  // namespace dpcausal
