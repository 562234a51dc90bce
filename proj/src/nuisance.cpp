#include "dpcausal/nuisance.hpp"

#include "dpcausal/parallel.hpp"

#include <stdexcept>

namespace dpcausal {

DataSlice slice_rows(const Dataset& data, const std::vector<int>& rows) {
  DataSlice slice;
  const auto m = static_cast<Index>(rows.size());
  slice.x.resize(m, data.dim());
  slice.a.resize(m);
  slice.y.resize(m);
  for (Index i = 0; i < m; ++i) {
    const int r = rows[static_cast<std::size_t>(i)];
    slice.x.row(i) = data.covariates.row(r);
    slice.a[i] = data.treatment[r];
    slice.y[i] = data.outcome[r];
  }
  return slice;
}

NuisanceTriple fit_triple(MatrixRef x, VectorRef a, VectorRef y, const LearnerSpec& spec_pi,
                          const LearnerSpec& spec_mu, const Bounds& bounds, RngStream rng) {
  bounds.check();
  if (x.rows() < 1) throw DataError("fit_triple: empty fold");
  const double floor = bounds.propensity_floor();

  NuisanceTriple triple;
  triple.propensity =
      clip_predictor(fit_learner(x, a, spec_pi, rng.split(0)), floor, 1.0 - floor);

  for (int arm = 0; arm <= 1; ++arm) {
    std::vector<int> arm_rows;
    for (Index i = 0; i < x.rows(); ++i) {
      if (a[i] == static_cast<double>(arm)) arm_rows.push_back(static_cast<int>(i));
    }
    Predictor outcome;
    if (arm_rows.empty()) {
      outcome = [](RowRef) { return 0.0; };
      (arm == 0 ? triple.missing_control : triple.missing_treated) = true;
    } else {
      const auto m = static_cast<Index>(arm_rows.size());
      Matrix xa(m, x.cols());
      Vector ya(m);
      for (Index i = 0; i < m; ++i) {
        xa.row(i) = x.row(arm_rows[static_cast<std::size_t>(i)]);
        ya[i] = y[arm_rows[static_cast<std::size_t>(i)]];
      }
      outcome = fit_learner(xa, ya, spec_mu, rng.split(static_cast<std::uint64_t>(arm) + 1));
    }
    outcome = clip_predictor(std::move(outcome), -bounds.b_mu, bounds.b_mu);
    (arm == 0 ? triple.outcome0 : triple.outcome1) = std::move(outcome);
  }
  return triple;
}

NuisanceEnsemble fit_ensemble(const Dataset& data, const FoldAssignment& folds,
                              const LearnerSpec& spec_pi, const LearnerSpec& spec_mu,
                              const Bounds& bounds, std::uint64_t seed) {
  NuisanceEnsemble ensemble;
  ensemble.triples.resize(static_cast<std::size_t>(folds.k));
  parallel_for(0, folds.k, [&](int fold) {
    const DataSlice slice = slice_rows(data, folds.members[static_cast<std::size_t>(fold)]);
    RngStream rng = RngStream::keyed(seed, {0x6c6561726eULL, static_cast<std::uint64_t>(fold)});
    ensemble.triples[static_cast<std::size_t>(fold)] =
        fit_triple(slice.x, slice.a, slice.y, spec_pi, spec_mu, bounds, rng);
  });
  return ensemble;
}

}  // namespace dpcausal
