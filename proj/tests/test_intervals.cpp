#include "dpcausal/intervals.hpp"

#include "dpcausal/privacy.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace dpcausal;

namespace {

// Balanced two-arm dataset with linear outcomes; large enough that every
// bootstrap resample keeps both arms with overwhelming probability.
Dataset linear_data(Index n, std::uint64_t seed) {
  RngStream rng = RngStream::keyed(seed, {0x11});
  Dataset d;
  d.covariates.resize(n, 1);
  d.treatment.resize(n);
  d.outcome.resize(n);
  for (Index i = 0; i < n; ++i) {
    d.covariates(i, 0) = rng.next_gaussian();
    d.treatment[i] = i % 2 == 0 ? 1.0 : 0.0;
    d.outcome[i] =
        clip(0.2 * d.covariates(i, 0) + 0.25 * d.treatment[i] + 0.1 * rng.next_gaussian(),
             -1.0, 1.0);
  }
  return d;
}

}  // namespace

TEST_CASE("empirical quantile follows the ceil(q r) rank convention") {
  const std::vector<double> sample{0.0, 1.0, 2.0};
  CHECK(empirical_quantile(sample, 0.25) == 0.0);  // rank ceil(0.75) = 1
  CHECK(empirical_quantile(sample, 0.5) == 1.0);   // rank 2
  CHECK(empirical_quantile(sample, 0.75) == 2.0);  // rank 3
  CHECK(empirical_quantile(sample, 1e-9) == 0.0);  // clamped to rank 1
  CHECK(empirical_quantile(sample, 1.0) == 2.0);
  CHECK(empirical_quantile({5.0, -1.0, 3.0, 0.0}, 0.5) == 0.0);  // rank 2 of sorted
  CHECK_THROWS_AS(empirical_quantile({}, 0.5), std::invalid_argument);
}

TEST_CASE("bootstrap bounds collapse when resampling cannot vary") {
  // All outcomes equal: every refit and every replicate score is identical.
  Dataset d = linear_data(40, 3);
  d.outcome.setConstant(0.25);
  const FoldAssignment folds = split_folds(d.size(), 2, 9);
  const Bounds bounds{1.0, 5.0};
  LearnerSpec constant{.kind = LearnerKind::Constant};
  const BoundScores bs = bootstrap_bounds(d, folds, constant, constant, bounds,
                                          EstimatorKind::G, 25, 0.1, 4);
  for (Index i = 0; i < d.size(); ++i) {
    // G score of a constant fit on constant outcomes: mu1 = mu0 = 0.25.
    CHECK(bs.gamma_minus[i] == doctest::Approx(0.0));
    CHECK(bs.gamma_plus[i] == doctest::Approx(0.0));
  }
}

TEST_CASE("alpha = 1 collapses both bounds to the debiased median") {
  const Dataset d = linear_data(60, 5);
  const FoldAssignment folds = split_folds(d.size(), 3, 2);
  const Bounds bounds{1.0, 5.0};
  LearnerSpec linear{.kind = LearnerKind::Linear};
  LearnerSpec logistic{.kind = LearnerKind::Logistic};
  const BoundScores bs =
      bootstrap_bounds(d, folds, logistic, linear, bounds, EstimatorKind::G, 21, 1.0, 4);
  CHECK(bs.gamma_minus == bs.gamma_plus);
}

TEST_CASE("unclipped bootstrap bounds nest around the cross-fitted score") {
  const Dataset d = linear_data(60, 7);
  const FoldAssignment folds = split_folds(d.size(), 3, 11);
  const Bounds bounds{1.0, 5.0};
  LearnerSpec linear{.kind = LearnerKind::Linear};
  LearnerSpec logistic{.kind = LearnerKind::Logistic};
  const BoundScores bs =
      bootstrap_bounds(d, folds, logistic, linear, bounds, EstimatorKind::G, 40, 0.1, 13);

  // The debiased median equals the per-fold base score, so the averaged
  // bounds nest around the complete-means cross-fitted score when no
  // clipping binds.
  const NuisanceEnsemble ensemble =
      fit_ensemble(d, folds, logistic, linear, bounds, 13 ^ 0xb00757ull);
  const NuisanceMatrix matrix = build_nuisance_matrix(d, ensemble);
  const AggregatedNuisance agg =
      build_aggregated(matrix, folds, AggregationScheme::CompleteMeans);
  const ScoreVector scores = compute_scores(d, agg, EstimatorKind::G);
  for (Index i = 0; i < d.size(); ++i) {
    if (std::abs(bs.gamma_minus[i]) < 2.0 && std::abs(bs.gamma_plus[i]) < 2.0) {
      CHECK(bs.gamma_minus[i] <= scores.scores[i] + 1e-9);
      CHECK(bs.gamma_plus[i] >= scores.scores[i] - 1e-9);
    }
    CHECK(bs.gamma_minus[i] <= bs.gamma_plus[i]);
    CHECK(std::abs(bs.gamma_minus[i]) <= 2.0);
    CHECK(std::abs(bs.gamma_plus[i]) <= 2.0);
  }

  CHECK_THROWS_AS(bootstrap_bounds(d, folds, logistic, linear, bounds, EstimatorKind::G, 1,
                                   0.1, 13),
                  std::invalid_argument);
}

TEST_CASE("bootstrap bound means have bounded neighbor sensitivity") {
  // Exhaustive single-record replacement at desk scale; the mean of the upper
  // bounds may move by at most 4 B_mu (1/n + 1/(K-1)).
  const Index n = 9;
  const int k = 3;
  const Bounds bounds{1.0, 5.0};
  LearnerSpec constant{.kind = LearnerKind::Constant};
  const FoldAssignment folds = split_folds(n, k, 1);
  Dataset base = linear_data(n, 17);
  const BoundScores bs0 = bootstrap_bounds(base, folds, constant, constant, bounds,
                                           EstimatorKind::G, 8, 0.2, 21);
  const double mean_plus0 = bs0.gamma_plus.mean();
  const double limit = 4.0 * bounds.b_mu * (1.0 / n + 1.0 / (k - 1));
  for (Index i = 0; i < n; ++i) {
    for (double new_a : {0.0, 1.0}) {
      for (double new_y : {-1.0, 0.3, 1.0}) {
        Dataset neighbor = base;
        neighbor.covariates(i, 0) = -neighbor.covariates(i, 0);
        neighbor.treatment[i] = new_a;
        neighbor.outcome[i] = new_y;
        const BoundScores bs1 = bootstrap_bounds(neighbor, folds, constant, constant, bounds,
                                                 EstimatorKind::G, 8, 0.2, 21);
        CHECK(std::abs(bs1.gamma_plus.mean() - mean_plus0) <= limit + 1e-9);
      }
    }
  }
}

TEST_CASE("pointwise bounds collapse to the projected score when variance is zero") {
  const Dataset d = linear_data(12, 2);
  const FoldAssignment folds = split_folds(d.size(), 3, 5);
  const Bounds bounds{1.0, 5.0};
  std::vector<PointwiseCate> cates(3);
  for (int f = 0; f < 3; ++f) {
    cates[static_cast<std::size_t>(f)].score = [f](RowRef) { return 0.1 * (f + 1); };
    cates[static_cast<std::size_t>(f)].variance = [](RowRef) { return 0.0; };
  }
  const BoundScores bs = pointwise_variance_bounds(d, folds, cates, 0.05, bounds);
  for (Index i = 0; i < d.size(); ++i) {
    const int own = folds.fold_of[static_cast<std::size_t>(i)];
    double mean = 0.0;
    for (int f = 0; f < 3; ++f) {
      if (f != own) mean += 0.1 * (f + 1);
    }
    mean /= 2.0;
    CHECK(bs.gamma_minus[i] == doctest::Approx(mean));
    CHECK(bs.gamma_plus[i] == doctest::Approx(mean));
  }
}

TEST_CASE("pointwise bounds use the Bonferroni-corrected quantile") {
  // One record, K = 2, alpha = 0.05: quantile level 1 - 0.05/4 = 0.9875.
  Dataset d;
  d.covariates = Matrix::Zero(1, 1);
  d.treatment = Vector::Zero(1);
  d.outcome = Vector::Zero(1);
  FoldAssignment folds;
  folds.k = 2;
  folds.fold_of = {0};
  folds.members = {{0}, {}};
  std::vector<PointwiseCate> cates(2);
  for (int f = 0; f < 2; ++f) {
    cates[static_cast<std::size_t>(f)].score = [](RowRef) { return 0.0; };
    cates[static_cast<std::size_t>(f)].variance = [](RowRef) { return 1.0; };
  }
  const Bounds bounds{10.0, 5.0};  // wide outcome bound: projection inactive
  const BoundScores bs = pointwise_variance_bounds(d, folds, cates, 0.05, bounds);
  CHECK(bs.gamma_plus[0] == doctest::Approx(2.2414027276049454).epsilon(1e-9));
  CHECK(bs.gamma_minus[0] == doctest::Approx(-2.2414027276049454).epsilon(1e-9));
}

TEST_CASE("pointwise bounds project onto [-2 b_mu, 2 b_mu]") {
  const Dataset d = linear_data(6, 8);
  const FoldAssignment folds = split_folds(d.size(), 2, 3);
  std::vector<PointwiseCate> cates(2);
  for (int f = 0; f < 2; ++f) {
    cates[static_cast<std::size_t>(f)].score = [](RowRef) { return 50.0; };
    cates[static_cast<std::size_t>(f)].variance = [](RowRef) { return 0.0; };
  }
  const Bounds bounds{1.0, 5.0};
  const BoundScores bs = pointwise_variance_bounds(d, folds, cates, 0.05, bounds);
  for (Index i = 0; i < d.size(); ++i) {
    CHECK(bs.gamma_plus[i] == 2.0);
    CHECK(bs.gamma_minus[i] == 2.0);
  }

  std::vector<PointwiseCate> negative(2);
  for (int f = 0; f < 2; ++f) {
    negative[static_cast<std::size_t>(f)].score = [](RowRef) { return 0.0; };
    negative[static_cast<std::size_t>(f)].variance = [](RowRef) { return -1.0; };
  }
  CHECK_THROWS_AS(pointwise_variance_bounds(d, folds, negative, 0.05, bounds),
                  std::invalid_argument);
}

TEST_CASE("private interval widening and composition") {
  const Index n = 4;
  BoundScores bs;
  bs.gamma_minus = Vector::Constant(n, 0.3);
  bs.gamma_plus = Vector::Constant(n, 0.3);

  // sigma1 = 0, beta = 0.05, B_mu = 1, n = 4: widen by 1.96 * (1 / 4).
  RngStream rng = RngStream::keyed(1, {0});
  const IntervalRelease r = private_interval(bs, 0.0, 0.05, 1.0, n, rng);
  const double widen = 1.9599639845400542 * 0.25;
  CHECK(r.tau_minus == doctest::Approx(0.3 - widen).epsilon(1e-12));
  CHECK(r.tau_plus == doctest::Approx(0.3 + widen).epsilon(1e-12));
  CHECK(r.degenerate_bounds);

  // beta -> 1 with sigma1 = 0: the interval is the pair of bound means.
  RngStream rng2 = RngStream::keyed(1, {0});
  const IntervalRelease tight = private_interval(bs, 0.0, 1.0 - 1e-12, 1.0, n, rng2);
  CHECK(tight.tau_minus == doctest::Approx(0.3).epsilon(1e-6));
  CHECK(tight.tau_plus == doctest::Approx(0.3).epsilon(1e-6));

  // Width is always at least 2 c (sigma1 + B_mu / (2 sqrt(n))), even when the
  // independent noise draws invert the raw gap.
  RngStream rng3 = RngStream::keyed(2, {0});
  for (int trial = 0; trial < 500; ++trial) {
    const double sigma1_sq = 0.04;
    const IntervalRelease noisy = private_interval(bs, sigma1_sq, 0.05, 1.0, n, rng3);
    const double min_width =
        2.0 * 1.9599639845400542 * (std::sqrt(sigma1_sq) + 1.0 / (2.0 * std::sqrt(4.0)));
    CHECK(noisy.tau_plus >= noisy.tau_minus);
    CHECK(noisy.tau_plus - noisy.tau_minus >= min_width - 1e-9);
  }

  // Two mu-GDP releases compose to sqrt(2) mu.
  CHECK(compose({{1.25}, {1.25}}).mu == doctest::Approx(std::sqrt(2.0) * 1.25));
}
