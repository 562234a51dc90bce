#include "dpcausal/intervals.hpp"

#include "dpcausal/normal.hpp"
#include "dpcausal/parallel.hpp"
#include "dpcausal/privacy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dpcausal {

namespace {

int quantile_rank(double q, int r) {
  const int rank = static_cast<int>(std::ceil(q * static_cast<double>(r) - 1e-9));
  return clip(rank, 1, r);
}

double median_sorted(const std::vector<double>& sorted) {
  const std::size_t r = sorted.size();
  return r % 2 == 1 ? sorted[r / 2] : 0.5 * (sorted[r / 2 - 1] + sorted[r / 2]);
}

}  // namespace

double empirical_quantile(std::vector<double> sample, double q) {
  if (sample.empty()) throw std::invalid_argument("empirical_quantile: empty sample");
  std::sort(sample.begin(), sample.end());
  return sample[static_cast<std::size_t>(quantile_rank(q, static_cast<int>(sample.size())) - 1)];
}

BoundScores bootstrap_bounds(const Dataset& data, const FoldAssignment& folds,
                             const LearnerSpec& spec_pi, const LearnerSpec& spec_mu,
                             const Bounds& bounds, EstimatorKind kind, int replications,
                             double alpha, std::uint64_t seed) {
  if (replications < 2) throw std::invalid_argument("bootstrap_bounds: need at least 2 replications");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("bootstrap_bounds: bad alpha");
  const Index n = data.size();
  const int k = folds.k;
  if (k < 2) throw std::invalid_argument("bootstrap_bounds: K >= 2 required");

  const NuisanceEnsemble base =
      fit_ensemble(data, folds, spec_pi, spec_mu, bounds, seed ^ 0xb00757ull);

  BoundScores out;
  out.gamma_minus = Vector::Zero(n);
  out.gamma_plus = Vector::Zero(n);

  const double q_lo = alpha / 2.0;
  const double q_hi = 1.0 - alpha / 2.0;
  const int rank_lo = quantile_rank(q_lo, replications);
  const int rank_hi = quantile_rank(q_hi, replications);

  // One fold at a time: refit on resamples, score every foreign record, then
  // reduce each record's replicate list to its quantile bounds.
  for (int fold = 0; fold < k; ++fold) {
    const auto& members = folds.members[static_cast<std::size_t>(fold)];
    const DataSlice slice = slice_rows(data, members);
    const auto fold_size = static_cast<Index>(members.size());

    std::vector<int> foreign;
    foreign.reserve(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
      if (folds.fold_of[static_cast<std::size_t>(i)] != fold) {
        foreign.push_back(static_cast<int>(i));
      }
    }
    const auto n_foreign = static_cast<Index>(foreign.size());
    Matrix replicate_scores(n_foreign, replications);

    parallel_for(0, replications, [&](int b) {
      RngStream rng = RngStream::keyed(seed, {0x626f6f74ULL, static_cast<std::uint64_t>(fold),
                                              static_cast<std::uint64_t>(b)});
      Matrix rx(fold_size, data.dim());
      Vector ra(fold_size), ry(fold_size);
      for (Index j = 0; j < fold_size; ++j) {
        const auto pick =
            static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(fold_size)));
        rx.row(j) = slice.x.row(pick);
        ra[j] = slice.a[pick];
        ry[j] = slice.y[pick];
      }
      const NuisanceTriple triple =
          fit_triple(rx, ra, ry, spec_pi, spec_mu, bounds, rng.split(0xf17ULL));
      for (Index j = 0; j < n_foreign; ++j) {
        const int record = foreign[static_cast<std::size_t>(j)];
        replicate_scores(j, b) = single_triple_score(triple, data.covariates.row(record),
                                                     data.treatment[record],
                                                     data.outcome[record], kind);
      }
    });

    const NuisanceTriple& base_triple = base.triples[static_cast<std::size_t>(fold)];
    parallel_for(0, static_cast<int>(n_foreign), [&](int j) {
      const int record = foreign[static_cast<std::size_t>(j)];
      const double base_score =
          single_triple_score(base_triple, data.covariates.row(record), data.treatment[record],
                              data.outcome[record], kind);
      std::vector<double> sorted(replicate_scores.row(j).begin(),
                                 replicate_scores.row(j).end());
      std::sort(sorted.begin(), sorted.end());
      // Debiasing adds the constant base_score - median, so quantiles of the
      // debiased set are shifted quantiles of the raw replicates.
      const double shift = base_score - median_sorted(sorted);
      out.gamma_minus[record] += sorted[static_cast<std::size_t>(rank_lo - 1)] + shift;
      out.gamma_plus[record] += sorted[static_cast<std::size_t>(rank_hi - 1)] + shift;
    });
  }

  const double bound = 2.0 * bounds.b_mu;
  out.gamma_minus = (out.gamma_minus / static_cast<double>(k - 1)).cwiseMax(-bound).cwiseMin(bound);
  out.gamma_plus = (out.gamma_plus / static_cast<double>(k - 1)).cwiseMax(-bound).cwiseMin(bound);
  return out;
}

BoundScores pointwise_variance_bounds(const Dataset& data, const FoldAssignment& folds,
                                      const std::vector<PointwiseCate>& cates, double alpha,
                                      const Bounds& bounds) {
  const Index n = data.size();
  const int k = folds.k;
  if (static_cast<int>(cates.size()) != k) {
    throw std::invalid_argument("pointwise_variance_bounds: one estimator per fold required");
  }
  if (k < 2) throw std::invalid_argument("pointwise_variance_bounds: K >= 2 required");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("pointwise_variance_bounds: bad alpha");
  }

  const double level = 1.0 - alpha / (2.0 * static_cast<double>(n) * static_cast<double>(k));
  const double quantile = norm_quantile(level);
  const double bound = 2.0 * bounds.b_mu;

  BoundScores out;
  out.gamma_minus = Vector::Zero(n);
  out.gamma_plus = Vector::Zero(n);
  parallel_for(0, static_cast<int>(n), [&](int i) {
    const RowVector x = data.covariates.row(i);
    const int own = folds.fold_of[static_cast<std::size_t>(i)];
    double lo_sum = 0.0, hi_sum = 0.0;
    for (int fold = 0; fold < k; ++fold) {
      if (fold == own) continue;
      const auto& cate = cates[static_cast<std::size_t>(fold)];
      const double score = cate.score(x);
      const double variance = cate.variance(x);
      if (!(variance >= 0.0)) {
        throw std::invalid_argument("pointwise_variance_bounds: negative variance estimate");
      }
      const double offset = quantile * std::sqrt(variance);
      lo_sum += clip(score - offset, -bound, bound);
      hi_sum += clip(score + offset, -bound, bound);
    }
    out.gamma_minus[i] = lo_sum / static_cast<double>(k - 1);
    out.gamma_plus[i] = hi_sum / static_cast<double>(k - 1);
  });
  return out;
}

IntervalRelease private_interval(const BoundScores& bounds_scores, double sigma1_sq, double beta,
                                 double b_mu, Index n, RngStream& rng) {
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("private_interval: bad beta");
  if (bounds_scores.gamma_minus.size() != n || bounds_scores.gamma_plus.size() != n || n < 1) {
    throw std::invalid_argument("private_interval: bound vector size mismatch");
  }
  IntervalRelease release;
  release.degenerate_bounds = bounds_scores.gamma_minus == bounds_scores.gamma_plus;
  const double widen = norm_quantile(1.0 - beta / 2.0) *
                       (std::sqrt(sigma1_sq) + b_mu / (2.0 * std::sqrt(static_cast<double>(n))));
  double lo = add_gaussian_noise(bounds_scores.gamma_minus.mean(), sigma1_sq, rng);
  double hi = add_gaussian_noise(bounds_scores.gamma_plus.mean(), sigma1_sq, rng);
  if (lo > hi) {
    // Independent draws can invert the noised pair; isotonic regression of
    // the two released values (a post-processing step) restores ordering.
    lo = hi = 0.5 * (lo + hi);
  }
  release.tau_minus = lo - widen;
  release.tau_plus = hi + widen;
  return release;
}

}  // namespace dpcausal
