#pragma once

#include "dpcausal/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dpcausal {

// Observational study data: covariates X (n x d), binary treatment A, and a
// real outcome Y. All containers share the row count n.
struct Dataset {
  Matrix covariates;
  Vector treatment;
  Vector outcome;

  Index size() const { return covariates.rows(); }
  Index dim() const { return covariates.cols(); }
};

struct ValidationReport {
  Index out_of_bound_outcomes = 0;
  Index non_binary_treatments = 0;
  Index non_finite_entries = 0;

  bool ok() const {
    return out_of_bound_outcomes == 0 && non_binary_treatments == 0 && non_finite_entries == 0;
  }
};

// Checks the dataset against the estimation preconditions. Non-binary
// treatments and non-finite entries are hard errors (DataError); outcomes
// outside [-b_mu, b_mu] are only counted, since clip_outcomes repairs them.
ValidationReport validate(const Dataset& data, const Bounds& bounds);

// Returns a copy with every outcome clipped to [-b_mu, b_mu]. Idempotent.
Dataset clip_outcomes(const Dataset& data, const Bounds& bounds);

// Disjoint partition of record indices 0..n-1 into k folds whose sizes differ
// by at most one.
struct FoldAssignment {
  std::vector<int> fold_of;               // n entries in [0, k)
  int k = 0;
  std::vector<std::vector<int>> members;  // ascending within each fold
};

// Uniformly random partition via a seeded shuffle followed by contiguous
// slicing; the first n mod k folds receive the extra record.
FoldAssignment split_folds(Index n, int k, std::uint64_t seed);

// Rescales covariates so that 99% of rows have unit norm or less and clips
// the remaining rows to the unit sphere.
Dataset rescale_covariates(const Dataset& data);

// CSV with header x0..x{d-1},a,y.
Dataset load_csv(const std::string& path);
void save_csv(const Dataset& data, const std::string& path);

// JSON object with one array per CSV column under the same names.
Dataset load_json(const std::string& path);
void save_json(const Dataset& data, const std::string& path);

}  // namespace dpcausal
