#include "dpcausal/experiments.hpp"

#include "dpcausal/estimators.hpp"
#include "dpcausal/nuisance.hpp"
#include "dpcausal/parallel.hpp"
#include "dpcausal/privacy.hpp"
#include "dpcausal/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace dpcausal {

double subsample_aggregate_estimate(const Dataset& data, const FoldAssignment& folds,
                                    const LearnerSpec& spec_pi, const LearnerSpec& spec_mu,
                                    const Bounds& bounds, EstimatorKind kind, PrivacyBudget mu,
                                    std::uint64_t seed) {
  bounds.check();
  mu.check();
  const Index n = data.size();
  Index max_fold = 0;
  for (const auto& members : folds.members) {
    if (members.size() < 4) throw DataError("subsample_aggregate: fold too small (need >= 4)");
    max_fold = std::max<Index>(max_fold, static_cast<Index>(members.size()));
  }

  Vector scores(n);
  parallel_for(0, folds.k, [&](int fold) {
    RngStream rng = RngStream::keyed(seed, {0x73612d666f6c64ULL, static_cast<std::uint64_t>(fold)});
    std::vector<int> order = folds.members[static_cast<std::size_t>(fold)];
    for (std::size_t i = order.size() - 1; i > 0; --i) {
      const auto j = static_cast<std::size_t>(rng.next_below(static_cast<std::uint64_t>(i) + 1));
      std::swap(order[i], order[j]);
    }
    const std::size_t cut = order.size() / 2;
    const std::vector<int> half1(order.begin(), order.begin() + static_cast<long>(cut));
    const std::vector<int> half2(order.begin() + static_cast<long>(cut), order.end());
    for (int side = 0; side < 2; ++side) {
      const auto& train = side == 0 ? half1 : half2;
      const auto& eval = side == 0 ? half2 : half1;
      const DataSlice slice = slice_rows(data, train);
      const NuisanceTriple triple = fit_triple(slice.x, slice.a, slice.y, spec_pi, spec_mu,
                                               bounds, rng.split(static_cast<std::uint64_t>(side)));
      for (int record : eval) {
        scores[record] = single_triple_score(triple, data.covariates.row(record),
                                             data.treatment[record], data.outcome[record], kind);
      }
    }
  });

  double tau = scores.mean();
  if (!mu.non_private()) {
    // One record change moves its own score and, through the refit model, the
    // scores of the opposite half of its fold.
    const SensitivityPair base = sensitivity_complete_means(kind, bounds, folds.k);
    const double half_size = std::ceil(static_cast<double>(max_fold) / 2.0);
    const double sensitivity = base.delta_eq / static_cast<double>(n) * (1.0 + half_size);
    RngStream noise = RngStream::keyed(seed, {0x73612d6e6f697365ULL});
    tau = add_gaussian_noise(tau, sensitivity * sensitivity / (mu.mu * mu.mu), noise);
  }
  return tau;
}

ReplicationTable run_replications(GeneratorKind generator, Index n, const PipelineConfig& config,
                                  int reps, std::uint64_t seed) {
  if (reps < 1) throw std::invalid_argument("run_replications: reps must be positive");
  ReplicationTable table;
  table.true_ate = generator_true_ate(generator);
  table.rows.resize(static_cast<std::size_t>(reps));

  parallel_for(0, reps, [&](int rep) {
    RngStream rep_stream = RngStream::keyed(seed, {0x7265706cULL, static_cast<std::uint64_t>(rep)});
    const std::uint64_t data_seed = rep_stream.next_u64();
    const std::uint64_t pipe_seed = rep_stream.next_u64();
    const Dataset data = generate({generator, n, data_seed});
    PipelineConfig rep_config = config;
    rep_config.seed = pipe_seed;
    const EstimateReport report = run_estimate(data, rep_config);

    ReplicationRow row;
    row.rep = rep;
    row.tau_dp = report.tau_dp;
    row.v_dp = report.v_dp;
    if (report.ci) {
      row.ci_lo = report.ci->first;
      row.ci_hi = report.ci->second;
      row.covered = row.ci_lo <= table.true_ate && table.true_ate <= row.ci_hi;
    } else {
      row.ci_lo = std::numeric_limits<double>::quiet_NaN();
      row.ci_hi = std::numeric_limits<double>::quiet_NaN();
      row.covered = false;
    }
    row.seed = pipe_seed;
    table.rows[static_cast<std::size_t>(rep)] = row;
  });

  ReplicationSummary& s = table.summary;
  s.reps = reps;
  double sum = 0.0, sum_sq_err = 0.0;
  int covered_count = 0;
  for (const ReplicationRow& row : table.rows) {
    sum += row.tau_dp;
    const double err = row.tau_dp - table.true_ate;
    sum_sq_err += err * err;
    covered_count += row.covered ? 1 : 0;
  }
  s.mean = sum / reps;
  double ss = 0.0;
  for (const ReplicationRow& row : table.rows) {
    ss += (row.tau_dp - s.mean) * (row.tau_dp - s.mean);
  }
  s.sd = reps > 1 ? std::sqrt(ss / (reps - 1)) : 0.0;
  s.bias = s.mean - table.true_ate;
  s.rmse = std::sqrt(sum_sq_err / reps);
  s.coverage = config.ci_method == CiMethod::None
                   ? std::numeric_limits<double>::quiet_NaN()
                   : static_cast<double>(covered_count) / reps;
  return table;
}

void write_replication_csv(const ReplicationTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << "rep,tau_dp,v_dp,ci_lo,ci_hi,covered,seed\n";
  char buf[256];
  for (const ReplicationRow& row : table.rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g,%d,%llu\n", row.rep, row.tau_dp,
                  row.v_dp, row.ci_lo, row.ci_hi, row.covered ? 1 : 0,
                  static_cast<unsigned long long>(row.seed));
    out << buf;
  }
}

}  // namespace dpcausal
