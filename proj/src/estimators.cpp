#include "dpcausal/estimators.hpp"

#include "dpcausal/normal.hpp"

#include <cmath>
#include <stdexcept>

namespace dpcausal {

ScoreVector compute_scores(const Dataset& data, const AggregatedNuisance& agg,
                           EstimatorKind kind) {
  const Index n = data.size();
  if (agg.mu0.size() != n || agg.mu1.size() != n || agg.pi1.size() != n ||
      agg.one_minus_pi0.size() != n) {
    throw std::invalid_argument("compute_scores: aggregation size mismatch");
  }
  ScoreVector out;
  out.kind = kind;
  out.scores.resize(n);
  for (Index i = 0; i < n; ++i) {
    const double a = data.treatment[i];
    const double y = data.outcome[i];
    switch (kind) {
      case EstimatorKind::G:
        out.scores[i] = agg.mu1[i] - agg.mu0[i];
        break;
      case EstimatorKind::IPW:
        out.scores[i] = a * y / agg.pi1[i] - (1.0 - a) * y / agg.one_minus_pi0[i];
        break;
      case EstimatorKind::AIPW:
        out.scores[i] = agg.mu1[i] - agg.mu0[i] + a * (y - agg.mu1[i]) / agg.pi1[i] -
                        (1.0 - a) * (y - agg.mu0[i]) / agg.one_minus_pi0[i];
        break;
    }
  }
  return out;
}

double single_triple_score(const NuisanceTriple& triple, RowRef x, double a, double y,
                           EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::G:
      return triple.outcome1(x) - triple.outcome0(x);
    case EstimatorKind::IPW:
      return a * y / triple.propensity(x) - (1.0 - a) * y / (1.0 - triple.propensity(x));
    case EstimatorKind::AIPW: {
      const double pi = triple.propensity(x);
      const double m0 = triple.outcome0(x);
      const double m1 = triple.outcome1(x);
      return m1 - m0 + a * (y - m1) / pi - (1.0 - a) * (y - m0) / (1.0 - pi);
    }
  }
  throw std::logic_error("unreachable estimator kind");
}

AteRelease private_ate(const ScoreVector& scores, double sigma1_sq, RngStream& rng) {
  if (scores.scores.size() < 1) throw std::invalid_argument("private_ate: empty scores");
  AteRelease release;
  release.tau_nonprivate = scores.scores.mean();
  release.tau_dp = add_gaussian_noise(release.tau_nonprivate, sigma1_sq, rng);
  return release;
}

double private_variance(const ScoreVector& scores, double tau_hat, double sigma1_sq,
                        double sigma2_sq, RngStream& rng) {
  const Index n = scores.scores.size();
  if (n < 2) throw std::invalid_argument("private_variance: need n >= 2");
  const double sample_var =
      (scores.scores.array() - tau_hat).square().sum() / static_cast<double>(n - 1);
  const double noised_sd = add_gaussian_noise(std::sqrt(sample_var), sigma2_sq, rng);
  return noised_sd * noised_sd + static_cast<double>(n) * sigma1_sq;
}

std::pair<double, double> asymptotic_ci(double tau_dp, double v_dp, Index n, double alpha,
                                        double alpha1, double sigma2_sq) {
  if (!(alpha > 0.0 && alpha < 1.0) || !(alpha1 > 0.0 && alpha1 < alpha)) {
    throw std::invalid_argument("asymptotic_ci: need 0 < alpha1 < alpha < 1");
  }
  if (n < 1) throw std::invalid_argument("asymptotic_ci: n must be positive");
  const double offset = sigma2_sq == 0.0 ? 0.0 : norm_quantile(1.0 - alpha1 / 2.0) * sigma2_sq;
  const double half = norm_quantile(1.0 - alpha / 2.0 + alpha1 / 2.0) *
                      std::sqrt((v_dp + offset) / static_cast<double>(n));
  return {tau_dp - half, tau_dp + half};
}

double oracle_variance_reference(EstimatorKind kind, const OracleModel& model, Index draws,
                                 std::uint64_t seed) {
  if (draws < 2) throw std::invalid_argument("oracle_variance_reference: need draws >= 2");
  RngStream rng = RngStream::keyed(seed, {0x6f7261636cULL});
  double sum_cate = 0.0, sum_cate_sq = 0.0;
  double sum_ipw = 0.0, sum_y1 = 0.0, sum_y0 = 0.0;
  double sum_aipw = 0.0;
  for (Index i = 0; i < draws; ++i) {
    const RowVector x = model.sample_covariates(rng);
    const double pi = model.propensity(x);
    const double m0 = model.mu0(x);
    const double m1 = model.mu1(x);
    const double cate = m1 - m0;
    sum_cate += cate;
    sum_cate_sq += cate * cate;
    const double y1 = model.sample_outcome(x, 1, rng);
    const double y0 = model.sample_outcome(x, 0, rng);
    sum_y1 += y1;
    sum_y0 += y0;
    sum_ipw += y1 * y1 / pi + y0 * y0 / (1.0 - pi);
    sum_aipw += (y1 - m1) * (y1 - m1) / pi + (y0 - m0) * (y0 - m0) / (1.0 - pi);
  }
  const double dn = static_cast<double>(draws);
  const double var_cate = sum_cate_sq / dn - (sum_cate / dn) * (sum_cate / dn);
  switch (kind) {
    case EstimatorKind::G:
      return var_cate;
    case EstimatorKind::IPW: {
      const double tau = sum_y1 / dn - sum_y0 / dn;
      return sum_ipw / dn - tau * tau;
    }
    case EstimatorKind::AIPW:
      return sum_aipw / dn + var_cate;
  }
  throw std::logic_error("unreachable estimator kind");
}

}  // namespace dpcausal
