#include "dpcausal/aggregate.hpp"

#include "dpcausal/parallel.hpp"
#include "dpcausal/rng.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace dpcausal {

namespace {

void check_own_fold(Index k, int own_fold) {
  if (k < 2) throw std::invalid_argument("aggregation requires K >= 2");
  if (own_fold < 0 || own_fold >= k) throw std::invalid_argument("own_fold out of range");
}

}  // namespace

NuisanceMatrix build_nuisance_matrix(const Dataset& data, const NuisanceEnsemble& ensemble) {
  const Index n = data.size();
  const int k = ensemble.k();
  NuisanceMatrix matrix;
  matrix.pi_pred.resize(n, k);
  matrix.mu0_pred.resize(n, k);
  matrix.mu1_pred.resize(n, k);
  parallel_for(0, static_cast<int>(n), [&](int i) {
    const RowVector row = data.covariates.row(i);
    for (int f = 0; f < k; ++f) {
      const NuisanceTriple& triple = ensemble.triples[static_cast<std::size_t>(f)];
      matrix.pi_pred(i, f) = triple.propensity(row);
      matrix.mu0_pred(i, f) = triple.outcome0(row);
      matrix.mu1_pred(i, f) = triple.outcome1(row);
    }
  });
  return matrix;
}

double aggregate_outcome_mean(RowRef preds, int own_fold) {
  const Index k = preds.size();
  check_own_fold(k, own_fold);
  double sum = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Index f = 0; f < k; ++f) {
    if (f == own_fold) continue;
    sum += preds[f];
    lo = std::min(lo, preds[f]);
    hi = std::max(hi, preds[f]);
  }
  // The exact mean lies in [lo, hi]; clamping removes rounding overshoot so
  // aggregated outputs keep the clip range of their inputs.
  return clip(sum / static_cast<double>(k - 1), lo, hi);
}

double aggregate_propensity_harmonic(RowRef preds, int own_fold, bool treated_arm) {
  const Index k = preds.size();
  check_own_fold(k, own_fold);
  double inv_sum = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Index f = 0; f < k; ++f) {
    if (f == own_fold) continue;
    const double p = preds[f];
    if (!(p > 0.0 && p < 1.0)) {
      throw std::invalid_argument("harmonic aggregation needs propensities inside (0, 1)");
    }
    const double value = treated_arm ? p : 1.0 - p;
    inv_sum += 1.0 / value;
    lo = std::min(lo, value);
    hi = std::max(hi, value);
  }
  return clip(static_cast<double>(k - 1) / inv_sum, lo, hi);
}

double aggregate_sampling(RowRef preds, int own_fold, RngStream& rng) {
  const Index k = preds.size();
  check_own_fold(k, own_fold);
  auto pick = static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(k - 1)));
  if (pick >= own_fold) ++pick;
  return preds[pick];
}

AggregatedNuisance build_aggregated(const NuisanceMatrix& matrix, const FoldAssignment& folds,
                                    AggregationScheme scheme, std::uint64_t seed) {
  const Index n = matrix.pi_pred.rows();
  const Index k = matrix.pi_pred.cols();
  if (matrix.mu0_pred.rows() != n || matrix.mu1_pred.rows() != n ||
      matrix.mu0_pred.cols() != k || matrix.mu1_pred.cols() != k ||
      static_cast<Index>(folds.fold_of.size()) != n || folds.k != static_cast<int>(k)) {
    throw std::invalid_argument("build_aggregated: dimension mismatch");
  }
  if (k < 2) throw std::invalid_argument("build_aggregated: K >= 2 required");

  AggregatedNuisance agg;
  agg.pi1.resize(n);
  agg.one_minus_pi0.resize(n);
  agg.mu0.resize(n);
  agg.mu1.resize(n);

  if (scheme == AggregationScheme::Sampling) {
    // l(i) is drawn once per record and cached; the realized assignment sizes
    // drive the sampling-aggregator sensitivity accounting.
    agg.chosen_fold.resize(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
      RngStream rng = RngStream::keyed(seed, {0x73616d706cULL, static_cast<std::uint64_t>(i)});
      const int own = folds.fold_of[static_cast<std::size_t>(i)];
      auto pick = static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(k - 1)));
      if (pick >= own) ++pick;
      agg.chosen_fold[static_cast<std::size_t>(i)] = static_cast<int>(pick);
      agg.pi1[i] = matrix.pi_pred(i, pick);
      agg.one_minus_pi0[i] = 1.0 - matrix.pi_pred(i, pick);
      agg.mu0[i] = matrix.mu0_pred(i, pick);
      agg.mu1[i] = matrix.mu1_pred(i, pick);
    }
    return agg;
  }

  parallel_for(0, static_cast<int>(n), [&](int i) {
    const int own = folds.fold_of[static_cast<std::size_t>(i)];
    agg.pi1[i] = aggregate_propensity_harmonic(matrix.pi_pred.row(i), own, true);
    agg.one_minus_pi0[i] = aggregate_propensity_harmonic(matrix.pi_pred.row(i), own, false);
    agg.mu0[i] = aggregate_outcome_mean(matrix.mu0_pred.row(i), own);
    agg.mu1[i] = aggregate_outcome_mean(matrix.mu1_pred.row(i), own);
  });
  return agg;
}

void dump_nuisance_matrix_csv(const NuisanceMatrix& matrix, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << "record,fold,pi,mu0,mu1\n";
  char buf[128];
  for (Index i = 0; i < matrix.pi_pred.rows(); ++i) {
    for (Index f = 0; f < matrix.pi_pred.cols(); ++f) {
      std::snprintf(buf, sizeof(buf), "%lld,%lld,%.17g,%.17g,%.17g\n",
                    static_cast<long long>(i), static_cast<long long>(f), matrix.pi_pred(i, f),
                    matrix.mu0_pred(i, f), matrix.mu1_pred(i, f));
      out << buf;
    }
  }
}

std::string to_string(AggregationScheme scheme) {
  return scheme == AggregationScheme::CompleteMeans ? "complete_means" : "sampling";
}

AggregationScheme aggregation_scheme_from_string(std::string_view name) {
  if (name == "complete_means") return AggregationScheme::CompleteMeans;
  if (name == "sampling") return AggregationScheme::Sampling;
  throw ConfigError("unknown aggregation scheme '" + std::string(name) + "'");
}

}  // namespace dpcausal
