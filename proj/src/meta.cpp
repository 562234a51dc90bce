#include "dpcausal/meta.hpp"

#include <cmath>
#include <stdexcept>

namespace dpcausal {

Vector optimal_weights(std::span<const StudyRecord> studies, WeightRule rule) {
  const auto n_studies = static_cast<Index>(studies.size());
  if (n_studies < 2) throw std::invalid_argument("optimal_weights: need at least 2 studies");
  Vector raw(n_studies);
  for (Index j = 0; j < n_studies; ++j) {
    const StudyRecord& s = studies[static_cast<std::size_t>(j)];
    if (!(s.v_dp > 0.0)) throw std::invalid_argument("optimal_weights: v_dp must be positive");
    if (s.n < 1) throw std::invalid_argument("optimal_weights: n must be positive");
    const double per_study_var = s.v_dp / static_cast<double>(s.n);
    raw[j] = rule == WeightRule::InverseStdErr ? 1.0 / std::sqrt(per_study_var)
                                               : 1.0 / per_study_var;
  }
  return raw / raw.sum();
}

MetaResult meta_combine(std::span<const StudyRecord> studies, VectorRef weights) {
  const auto n_studies = static_cast<Index>(studies.size());
  if (weights.size() != n_studies) throw std::invalid_argument("meta_combine: length mismatch");
  double weight_sum = 0.0;
  MetaResult result;
  for (Index j = 0; j < n_studies; ++j) {
    const double w = weights[j];
    if (!(w >= 0.0)) throw std::invalid_argument("meta_combine: weights must be nonnegative");
    const StudyRecord& s = studies[static_cast<std::size_t>(j)];
    weight_sum += w;
    result.tau_meta += w * s.tau_dp;
    result.v_meta_over_n += w * w * s.v_dp / static_cast<double>(s.n);
  }
  if (std::abs(weight_sum - 1.0) > 1e-9) {
    throw std::invalid_argument("meta_combine: weights must sum to 1");
  }
  return result;
}

}  // namespace dpcausal
