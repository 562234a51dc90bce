#include "dpcausal/privacy.hpp"

#include "dpcausal/normal.hpp"

#include <cmath>
#include <stdexcept>

namespace dpcausal {

namespace {

double fold_term(Index n, int k) {
  return 1.0 / static_cast<double>(n) + 1.0 / (static_cast<double>(k) - 1.0);
}

void check_release_args(PrivacyBudget mu, Index n, int k, Index min_n) {
  mu.check();
  if (mu.non_private()) {
    throw PrivacyError("noise calibration requires mu > 0; use non-private mode instead");
  }
  if (k < 2) throw std::invalid_argument("noise calibration requires K >= 2");
  if (n < min_n) throw std::invalid_argument("noise calibration: n too small");
}

}  // namespace

EstimatorConstant estimator_constant(EstimatorKind kind, const Bounds& bounds) {
  bounds.check();
  const double bmu = bounds.b_mu;
  const double bpi = bounds.b_pi;
  switch (kind) {
    case EstimatorKind::G: return {16.0 * bmu * bmu};
    case EstimatorKind::IPW: return {4.0 * bmu * bmu * bpi * bpi};
    case EstimatorKind::AIPW: return {16.0 * bmu * bmu * (1.0 + bpi) * (1.0 + bpi)};
  }
  throw std::logic_error("unreachable estimator kind");
}

double sigma1_squared(EstimatorConstant c, PrivacyBudget mu1, Index n, int k) {
  check_release_args(mu1, n, k, 1);
  const double u = fold_term(n, k);
  return c.c / (mu1.mu * mu1.mu) * u * u;
}

double sigma2_squared(EstimatorConstant c, PrivacyBudget mu2, Index n, int k) {
  check_release_args(mu2, n, k, 2);
  const double u = fold_term(n, k);
  const double w = u + std::sqrt(u);
  const double nn = static_cast<double>(n);
  return 2.0 * c.c * nn / (mu2.mu * mu2.mu * (nn - 1.0)) * w * w;
}

double unified_sensitivity(const SensitivityPair& s, Index n, int k) {
  if (n < 1 || k < 1) throw std::invalid_argument("unified_sensitivity: n, k must be >= 1");
  return s.delta_eq / static_cast<double>(n) + s.delta_neq / static_cast<double>(k);
}

double sqrt_variance_sensitivity(const SensitivityPair& s, Index n, int k) {
  if (n < 2) throw std::invalid_argument("sqrt_variance_sensitivity: n must be >= 2");
  const double t = unified_sensitivity(s, n, k);
  const double nn = static_cast<double>(n);
  return std::sqrt(2.0 * nn / (nn - 1.0)) * (2.0 * std::sqrt(s.score_bound) * std::sqrt(t) + t);
}

SensitivityPair sensitivity_complete_means(EstimatorKind kind, const Bounds& bounds, int k) {
  bounds.check();
  if (k < 2) throw std::invalid_argument("complete-means sensitivity requires K >= 2");
  const double bmu = bounds.b_mu;
  const double bpi = bounds.b_pi;
  const double ratio = static_cast<double>(k) / (static_cast<double>(k) - 1.0);
  switch (kind) {
    case EstimatorKind::G:
      return {4.0 * bmu, 4.0 * bmu * ratio, 2.0 * bmu};
    case EstimatorKind::IPW:
      return {2.0 * bmu * bpi, bmu * bpi * ratio, bmu * bpi};
    case EstimatorKind::AIPW:
      return {4.0 * bmu * (1.0 + bpi), 4.0 * bmu * (1.0 + bpi) * ratio, 2.0 * bmu * (1.0 + bpi)};
  }
  throw std::logic_error("unreachable estimator kind");
}

SensitivityPair sensitivity_sampling(EstimatorKind kind, const Bounds& bounds, int k,
                                     Index max_assigned, Index n) {
  bounds.check();
  if (n < 1 || max_assigned < 0) throw std::invalid_argument("sensitivity_sampling: bad counts");
  const double bmu = bounds.b_mu;
  const double bpi = bounds.b_pi;
  const double load = static_cast<double>(k) * static_cast<double>(max_assigned) /
                      static_cast<double>(n);
  switch (kind) {
    case EstimatorKind::G:
      return {4.0 * bmu, 4.0 * bmu * load, 2.0 * bmu};
    case EstimatorKind::IPW:
      return {2.0 * bmu * bpi, bmu * bpi * load, bmu * bpi};
    case EstimatorKind::AIPW:
      return {2.0 * bmu * (2.0 + bpi), (4.0 * bmu + 3.0 * bmu * bpi) * load,
              2.0 * bmu * (1.0 + bpi)};
  }
  throw std::logic_error("unreachable estimator kind");
}

double add_gaussian_noise(double value, double variance, RngStream& rng) {
  if (!(variance >= 0.0)) throw std::invalid_argument("noise variance must be nonnegative");
  if (variance == 0.0) return value;
  return value + std::sqrt(variance) * rng.next_gaussian();
}

double add_gaussian_noise(double value, double variance, std::uint64_t seed) {
  RngStream rng = RngStream::keyed(seed, {0x6e6f697365ULL});  // "noise"
  return add_gaussian_noise(value, variance, rng);
}

PrivacyBudget compose(std::span<const PrivacyBudget> budgets) {
  double sum_sq = 0.0;
  for (const PrivacyBudget& b : budgets) {
    b.check();
    sum_sq += b.mu * b.mu;
  }
  return {std::sqrt(sum_sq)};
}

PrivacyBudget compose(std::initializer_list<PrivacyBudget> budgets) {
  return compose(std::span<const PrivacyBudget>(budgets.begin(), budgets.size()));
}

double gdp_to_approx_dp(PrivacyBudget mu, double epsilon) {
  mu.check();
  if (mu.non_private()) throw PrivacyError("gdp_to_approx_dp requires mu > 0");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be nonnegative");
  const double m = mu.mu;
  const double b = -epsilon / m + m / 2.0;
  const double c = -epsilon / m - m / 2.0;
  // delta = Phi(b) - e^eps Phi(c) = Phi(b) * (1 - exp(eps + logPhi(c) - logPhi(b))).
  // The ratio form avoids overflow of e^eps and limits cancellation.
  const double log_phi_b = log_norm_cdf(b);
  const double log_ratio = epsilon + log_norm_cdf(c) - log_phi_b;
  const double factor = -std::expm1(log_ratio);
  const double delta = std::exp(log_phi_b) * factor;
  return clip(delta, 0.0, 1.0);
}

double epsilon_for_delta(PrivacyBudget mu, double delta) {
  mu.check();
  if (mu.non_private()) throw PrivacyError("epsilon_for_delta requires mu > 0");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("epsilon_for_delta: delta must lie in (0, 1)");
  }
  if (gdp_to_approx_dp(mu, 0.0) <= delta) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (gdp_to_approx_dp(mu, hi) > delta) {
    hi *= 2.0;
    if (hi > 1e9) throw std::runtime_error("epsilon_for_delta: no finite epsilon found");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (gdp_to_approx_dp(mu, mid) > delta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

}  // namespace dpcausal
