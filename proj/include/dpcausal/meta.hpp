#pragma once

#include "dpcausal/privacy.hpp"
#include "dpcausal/types.hpp"

#include <span>

namespace dpcausal {

// One study's released estimate: private ATE, private scaled variance
// (of sqrt(n)(tau - tau*), so the estimate variance is v_dp / n), sample
// size, and the budget it consumed.
struct StudyRecord {
  double tau_dp = 0.0;
  double v_dp = 0.0;
  Index n = 0;
  PrivacyBudget budget;
};

enum class WeightRule {
  InverseStdErr,    // weights proportional to (v_dp/n)^{-1/2}
  InverseVariance,  // classical fixed-effects weights, (v_dp/n)^{-1}
};

Vector optimal_weights(std::span<const StudyRecord> studies,
                       WeightRule rule = WeightRule::InverseStdErr);

struct MetaResult {
  double tau_meta = 0.0;
  double v_meta_over_n = 0.0;  // variance of tau_meta
};

// Weighted combination; post-processing of released values, so no
// additional privacy budget is consumed.
MetaResult meta_combine(std::span<const StudyRecord> studies, VectorRef weights);

}  // namespace dpcausal
