#pragma once

#include "dpcausal/dataset.hpp"
#include "dpcausal/learners.hpp"
#include "dpcausal/types.hpp"

#include <cstdint>
#include <vector>

namespace dpcausal {

// Propensity and outcome models fitted on one fold. Propensity outputs are
// clipped to [1/b_pi, 1 - 1/b_pi] and outcome outputs to [-b_mu, b_mu], so
// the boundedness contract holds no matter which learner produced them.
struct NuisanceTriple {
  Predictor propensity;
  Predictor outcome0;
  Predictor outcome1;
  bool missing_control = false;  // no A=0 records; outcome0 is the constant 0
  bool missing_treated = false;  // no A=1 records; outcome1 is the constant 0
};

// Fits (propensity, outcome0, outcome1) on the given rows. An arm with no
// records gets the constant-0 predictor and a warning flag.
NuisanceTriple fit_triple(MatrixRef x, VectorRef a, VectorRef y, const LearnerSpec& spec_pi,
                          const LearnerSpec& spec_mu, const Bounds& bounds, RngStream rng);

struct NuisanceEnsemble {
  std::vector<NuisanceTriple> triples;  // one per fold

  int k() const { return static_cast<int>(triples.size()); }
};

// Fits one triple per fold, each on that fold's own records. Fold fits are
// independent and run in parallel.
NuisanceEnsemble fit_ensemble(const Dataset& data, const FoldAssignment& folds,
                              const LearnerSpec& spec_pi, const LearnerSpec& spec_mu,
                              const Bounds& bounds, std::uint64_t seed);

// Extracts the rows of a fold (or any index list) into dense containers.
struct DataSlice {
  Matrix x;
  Vector a;
  Vector y;
};
DataSlice slice_rows(const Dataset& data, const std::vector<int>& rows);

}  // namespace dpcausal
