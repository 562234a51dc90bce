#include "dpcausal/generators.hpp"

#include "dpcausal/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace dpcausal {

namespace {

double expit(double t) { return 1.0 / (1.0 + std::exp(-t)); }

// Well-specified, low-overlap setting (d = 1).
double low_overlap_propensity(double x) {
  return clip(expit(-0.2 + 6.0 * x), 0.004, 0.996);
}
double low_overlap_mean(double x, double a) { return -0.05 + 0.225 * x + 0.1 * a; }
constexpr double kLowOverlapNoiseSd = 0.1;  // variance 0.01

// Misspecified setting (d = 2): propensity and baseline outcome are piecewise
// constant on four overlapping rectangular regions.
double misspecified_propensity(double x1, double x2) {
  if (x2 > 0.0) return x1 > 0.1 ? 0.75 : 0.6;
  return x1 < -0.05 ? 0.25 : 0.5;
}
double misspecified_baseline(double x1, double x2) {
  if (x1 > 0.0) return x2 > 0.0 ? -0.7 : 0.1;
  return x2 > 0.05 ? -0.4 : 0.6;
}
const double kMisspecifiedNoiseSd = std::sqrt(0.025);

// Well-specified, good-overlap setting with binary outcomes (d = 10).
constexpr double kGoodOverlapBetaPi[10] = {-0.15, 0.225, -0.15, -0.2,  0.1,
                                           0.05,  -0.075, 0.225, -0.15, -0.2};
constexpr double kGoodOverlapBetaMu[10] = {0.175, 0.1,  -0.125, 0.075, -0.1,
                                           0.2,   -0.2, 0.175,  -0.1,  0.2};
constexpr double kGoodOverlapTreatCoef = 0.42585;

// Linear-outcome setting used for the fold-count study (d = 20).
constexpr double kEffectKBetaPi[20] = {-0.17, -0.06, 0.05,  0.14,  0.12,  -0.195, -0.205,
                                       0.07,  0.18,  0.14,  -0.14, 0.05,  0.01,   -0.16,
                                       -0.18, -0.1,  0.2,   0.03,  -0.16, -0.1};
constexpr double kEffectKBetaY[20] = {-0.0385, -0.0111, -0.105,  -0.0344, 0.1405,
                                      0.0550,  0.0344,  -0.0908, -0.0023, -0.0243,
                                      -0.0076, -0.0416, 0.0193,  -0.0846, 0.0582,
                                      0.0824,  0.0184,  0.0064,  -0.0895, 0.0241};
constexpr double kEffectKNoiseSd = 0.05;  // variance 0.0025

double dot(const double* beta, RowRef x) {
  double sum = 0.0;
  for (Index j = 0; j < x.size(); ++j) sum += beta[j] * x[j];
  return sum;
}

double logistic_clipped_propensity(const double* beta, RowRef x) {
  return clip(expit(0.1 + dot(beta, x)), 0.1, 0.9);
}

RowVector sample_row(int d, RngStream& rng) {
  RowVector x(d);
  for (int j = 0; j < d; ++j) x[j] = rng.next_gaussian();
  return x;
}

template <typename Propensity, typename Outcome>
Dataset generate_rows(Index n, int d, std::uint64_t seed, Propensity&& propensity,
                      Outcome&& outcome) {
  if (n < 1) throw std::invalid_argument("generator: n must be positive");
  RngStream rng = RngStream::keyed(seed, {0x67656e32ULL});
  Dataset data;
  data.covariates.resize(n, d);
  data.treatment.resize(n);
  data.outcome.resize(n);
  for (Index i = 0; i < n; ++i) {
    const RowVector x = sample_row(d, rng);
    data.covariates.row(i) = x;
    const double a = rng.next_uniform() < propensity(x) ? 1.0 : 0.0;
    data.treatment[i] = a;
    data.outcome[i] = outcome(x, a, rng);
  }
  return data;
}

}  // namespace

Dataset gen_low_overlap(Index n, std::uint64_t seed) {
  return generate_rows(
      n, 1, seed, [](RowRef x) { return low_overlap_propensity(x[0]); },
      [](RowRef x, double a, RngStream& rng) {
        return low_overlap_mean(x[0], a) + kLowOverlapNoiseSd * rng.next_gaussian();
      });
}

Dataset gen_misspecified(Index n, std::uint64_t seed) {
  return generate_rows(
      n, 2, seed, [](RowRef x) { return misspecified_propensity(x[0], x[1]); },
      [](RowRef x, double a, RngStream& rng) {
        return misspecified_baseline(x[0], x[1]) + 0.2 * a +
               kMisspecifiedNoiseSd * rng.next_gaussian();
      });
}

Dataset gen_good_overlap_binary(Index n, std::uint64_t seed) {
  return generate_rows(
      n, 10, seed,
      [](RowRef x) { return logistic_clipped_propensity(kGoodOverlapBetaPi, x); },
      [](RowRef x, double a, RngStream& rng) {
        const double p =
            expit(-0.05 + dot(kGoodOverlapBetaMu, x) + kGoodOverlapTreatCoef * a);
        return rng.next_uniform() < p ? 1.0 : 0.0;
      });
}

Dataset gen_effect_of_k(Index n, std::uint64_t seed) {
  return generate_rows(
      n, 20, seed, [](RowRef x) { return logistic_clipped_propensity(kEffectKBetaPi, x); },
      [](RowRef x, double a, RngStream& rng) {
        return -0.08 + dot(kEffectKBetaY, x) + 0.15 * a + kEffectKNoiseSd * rng.next_gaussian();
      });
}

Dataset generate(const GeneratorSpec& spec) {
  switch (spec.kind) {
    case GeneratorKind::LowOverlap: return gen_low_overlap(spec.n, spec.seed);
    case GeneratorKind::MisspecifiedTrees: return gen_misspecified(spec.n, spec.seed);
    case GeneratorKind::GoodOverlapBinary: return gen_good_overlap_binary(spec.n, spec.seed);
    case GeneratorKind::EffectOfK: return gen_effect_of_k(spec.n, spec.seed);
  }
  throw std::logic_error("unreachable generator kind");
}

OracleModel generator_oracle(GeneratorKind kind) {
  OracleModel model;
  const int d = generator_dimension(kind);
  model.sample_covariates = [d](RngStream& rng) { return sample_row(d, rng); };
  model.true_ate = generator_true_ate(kind);
  switch (kind) {
    case GeneratorKind::LowOverlap:
      model.propensity = [](RowRef x) { return low_overlap_propensity(x[0]); };
      model.mu0 = [](RowRef x) { return low_overlap_mean(x[0], 0.0); };
      model.mu1 = [](RowRef x) { return low_overlap_mean(x[0], 1.0); };
      model.sample_outcome = [](RowRef x, int arm, RngStream& rng) {
        return low_overlap_mean(x[0], arm) + kLowOverlapNoiseSd * rng.next_gaussian();
      };
      break;
    case GeneratorKind::MisspecifiedTrees:
      model.propensity = [](RowRef x) { return misspecified_propensity(x[0], x[1]); };
      model.mu0 = [](RowRef x) { return misspecified_baseline(x[0], x[1]); };
      model.mu1 = [](RowRef x) { return misspecified_baseline(x[0], x[1]) + 0.2; };
      model.sample_outcome = [](RowRef x, int arm, RngStream& rng) {
        return misspecified_baseline(x[0], x[1]) + 0.2 * arm +
               kMisspecifiedNoiseSd * rng.next_gaussian();
      };
      break;
    case GeneratorKind::GoodOverlapBinary:
      model.propensity = [](RowRef x) {
        return logistic_clipped_propensity(kGoodOverlapBetaPi, x);
      };
      model.mu0 = [](RowRef x) { return expit(-0.05 + dot(kGoodOverlapBetaMu, x)); };
      model.mu1 = [](RowRef x) {
        return expit(-0.05 + dot(kGoodOverlapBetaMu, x) + kGoodOverlapTreatCoef);
      };
      model.sample_outcome = [](RowRef x, int arm, RngStream& rng) {
        const double p =
            expit(-0.05 + dot(kGoodOverlapBetaMu, x) + kGoodOverlapTreatCoef * arm);
        return rng.next_uniform() < p ? 1.0 : 0.0;
      };
      break;
    case GeneratorKind::EffectOfK:
      model.propensity = [](RowRef x) {
        return logistic_clipped_propensity(kEffectKBetaPi, x);
      };
      model.mu0 = [](RowRef x) { return -0.08 + dot(kEffectKBetaY, x); };
      model.mu1 = [](RowRef x) { return -0.08 + dot(kEffectKBetaY, x) + 0.15; };
      model.sample_outcome = [](RowRef x, int arm, RngStream& rng) {
        return -0.08 + dot(kEffectKBetaY, x) + 0.15 * arm +
               kEffectKNoiseSd * rng.next_gaussian();
      };
      break;
  }
  return model;
}

int generator_dimension(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::LowOverlap: return 1;
    case GeneratorKind::MisspecifiedTrees: return 2;
    case GeneratorKind::GoodOverlapBinary: return 10;
    case GeneratorKind::EffectOfK: return 20;
  }
  throw std::logic_error("unreachable generator kind");
}

double generator_true_ate(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::LowOverlap: return 0.1;
    case GeneratorKind::MisspecifiedTrees: return 0.2;
    case GeneratorKind::GoodOverlapBinary: return 0.1;
    case GeneratorKind::EffectOfK: return 0.15;
  }
  throw std::logic_error("unreachable generator kind");
}

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::LowOverlap: return "low_overlap";
    case GeneratorKind::MisspecifiedTrees: return "misspecified_trees";
    case GeneratorKind::GoodOverlapBinary: return "good_overlap_binary";
    case GeneratorKind::EffectOfK: return "effect_of_k";
  }
  return "?";
}

GeneratorKind generator_kind_from_string(std::string_view name) {
  if (name == "low_overlap") return GeneratorKind::LowOverlap;
  if (name == "misspecified_trees") return GeneratorKind::MisspecifiedTrees;
  if (name == "good_overlap_binary") return GeneratorKind::GoodOverlapBinary;
  if (name == "effect_of_k") return GeneratorKind::EffectOfK;
  throw ConfigError("unknown generator '" + std::string(name) + "'");
}

}  // namespace dpcausal
