#pragma once

#include "dpcausal/dataset.hpp"
#include "dpcausal/generators.hpp"
#include "dpcausal/pipeline.hpp"
#include "dpcausal/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dpcausal {

// Subsample-and-aggregate baseline: each fold is split into two halves,
// nuisances are fit on one half and scores computed on the other (and vice
// versa); the released value is the noised mean of all scores. Uses the same
// replacement-neighbor accounting as the folding scheme.
double subsample_aggregate_estimate(const Dataset& data, const FoldAssignment& folds,
                                    const LearnerSpec& spec_pi, const LearnerSpec& spec_mu,
                                    const Bounds& bounds, EstimatorKind kind, PrivacyBudget mu,
                                    std::uint64_t seed);

struct ReplicationRow {
  int rep = 0;
  double tau_dp = 0.0;
  double v_dp = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  bool covered = false;
  std::uint64_t seed = 0;
};

struct ReplicationSummary {
  int reps = 0;
  double mean = 0.0;
  double sd = 0.0;
  double bias = 0.0;
  double rmse = 0.0;
  double coverage = 0.0;  // NaN when no interval was requested
};

struct ReplicationTable {
  std::vector<ReplicationRow> rows;
  ReplicationSummary summary;
  double true_ate = 0.0;
};

// Monte-Carlo harness: independent data, folds, learner seeds, and noise per
// replication; rows are deterministic functions of (seed, rep).
ReplicationTable run_replications(GeneratorKind generator, Index n, const PipelineConfig& config,
                                  int reps, std::uint64_t seed);

// Fixed column order: rep,tau_dp,v_dp,ci_lo,ci_hi,covered,seed.
void write_replication_csv(const ReplicationTable& table, const std::string& path);

}  // namespace dpcausal
