#include "dpcausal/generators.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

using namespace dpcausal;

namespace {

// Mean propensities under X ~ N(0, I), by numerical integration (mpmath).
constexpr double kLowOverlapMeanPi = 0.487319626241;
constexpr double kMisspecifiedMeanPi = 0.524505262934;
constexpr double kGoodOverlapMeanPi = 0.523503833537;
constexpr double kEffectKMeanPi = 0.523000339542;

double treated_fraction(const Dataset& d) { return d.treatment.mean(); }

void check_treated_fraction(GeneratorKind kind, double analytic_mean) {
  const Index n = 100000;
  const Dataset d = generate({kind, n, 2024});
  const double sigma = std::sqrt(analytic_mean * (1.0 - analytic_mean) / static_cast<double>(n));
  CHECK(std::abs(treated_fraction(d) - analytic_mean) < 3.0 * sigma);
}

RowVector point(std::initializer_list<double> values) {
  RowVector r(static_cast<Index>(values.size()));
  Index i = 0;
  for (double v : values) r[i++] = v;
  return r;
}

}  // namespace

TEST_CASE("generator metadata") {
  CHECK(generator_dimension(GeneratorKind::LowOverlap) == 1);
  CHECK(generator_dimension(GeneratorKind::MisspecifiedTrees) == 2);
  CHECK(generator_dimension(GeneratorKind::GoodOverlapBinary) == 10);
  CHECK(generator_dimension(GeneratorKind::EffectOfK) == 20);
  CHECK(generator_true_ate(GeneratorKind::LowOverlap) == 0.1);
  CHECK(generator_true_ate(GeneratorKind::MisspecifiedTrees) == 0.2);
  CHECK(generator_true_ate(GeneratorKind::GoodOverlapBinary) == 0.1);
  CHECK(generator_true_ate(GeneratorKind::EffectOfK) == 0.15);
}

TEST_CASE("low overlap generator") {
  const OracleModel oracle = generator_oracle(GeneratorKind::LowOverlap);
  CHECK(oracle.propensity(point({0.0})) == doctest::Approx(0.450166002688).epsilon(1e-10));
  CHECK(oracle.propensity(point({-10.0})) == 0.004);  // clip floor
  CHECK(oracle.propensity(point({10.0})) == 0.996);   // clip ceiling
  CHECK(oracle.mu1(point({0.5})) - oracle.mu0(point({0.5})) == doctest::Approx(0.1));

  const Dataset d = gen_low_overlap(5000, 7);
  CHECK(d.dim() == 1);
  CHECK(d.size() == 5000);
  check_treated_fraction(GeneratorKind::LowOverlap, kLowOverlapMeanPi);
}

TEST_CASE("misspecified generator region tables") {
  const OracleModel oracle = generator_oracle(GeneratorKind::MisspecifiedTrees);
  CHECK(oracle.propensity(point({0.2, 0.1})) == 0.75);
  CHECK(oracle.mu0(point({0.2, 0.1})) == -0.7);
  CHECK(oracle.propensity(point({-1.0, -1.0})) == 0.25);
  CHECK(oracle.mu0(point({-1.0, -1.0})) == 0.6);
  CHECK(oracle.propensity(point({0.0, 0.5})) == 0.6);   // x1 <= 0.1, x2 > 0
  CHECK(oracle.propensity(point({0.0, -0.5})) == 0.5);  // x1 >= -0.05, x2 <= 0
  CHECK(oracle.mu0(point({0.5, -0.1})) == 0.1);
  CHECK(oracle.mu0(point({-0.5, 0.1})) == -0.4);
  CHECK(oracle.mu1(point({0.5, -0.1})) == doctest::Approx(0.3));

  check_treated_fraction(GeneratorKind::MisspecifiedTrees, kMisspecifiedMeanPi);
}

TEST_CASE("good overlap binary generator") {
  const OracleModel oracle = generator_oracle(GeneratorKind::GoodOverlapBinary);
  // First propensity coefficient is -0.15: slope at the origin along e1.
  RowVector zero = RowVector::Zero(10);
  RowVector e1 = RowVector::Zero(10);
  e1[0] = 0.1;
  const double expit_at = [](double t) { return 1.0 / (1.0 + std::exp(-t)); }(0.1 - 0.015);
  CHECK(oracle.propensity(e1) == doctest::Approx(expit_at).epsilon(1e-12));
  CHECK(oracle.propensity(zero) == doctest::Approx(1.0 / (1.0 + std::exp(-0.1))));

  const Dataset d = gen_good_overlap_binary(20000, 5);
  CHECK(d.dim() == 10);
  for (Index i = 0; i < d.size(); ++i) {
    REQUIRE((d.outcome[i] == 0.0 || d.outcome[i] == 1.0));
  }
  // Propensities are clipped to [0.1, 0.9].
  RngStream rng = RngStream::keyed(5, {5});
  for (int i = 0; i < 10000; ++i) {
    const RowVector x = oracle.sample_covariates(rng);
    const double p = oracle.propensity(x);
    REQUIRE(p >= 0.1);
    REQUIRE(p <= 0.9);
  }
  check_treated_fraction(GeneratorKind::GoodOverlapBinary, kGoodOverlapMeanPi);

  // Marginal ATE of the stated coefficients is 0.1 (quadrature value
  // 0.100004526839); a Monte-Carlo average of the CATE must agree.
  double cate_sum = 0.0;
  const int draws = 200000;
  for (int i = 0; i < draws; ++i) {
    const RowVector x = oracle.sample_covariates(rng);
    cate_sum += oracle.mu1(x) - oracle.mu0(x);
  }
  CHECK(cate_sum / draws == doctest::Approx(0.100004526839).epsilon(0.01));
}

TEST_CASE("effect-of-K generator") {
  const OracleModel oracle = generator_oracle(GeneratorKind::EffectOfK);
  RowVector zero = RowVector::Zero(20);
  RowVector e1 = RowVector::Zero(20);
  e1[0] = 1.0;
  // First outcome coefficient is -0.0385.
  CHECK(oracle.mu0(e1) - oracle.mu0(zero) == doctest::Approx(-0.0385).epsilon(1e-12));
  CHECK(oracle.mu1(zero) - oracle.mu0(zero) == doctest::Approx(0.15));

  // Outcome noise standard deviation is 0.05.
  const Dataset d = gen_effect_of_k(50000, 11);
  CHECK(d.dim() == 20);
  double sum_sq = 0.0;
  for (Index i = 0; i < d.size(); ++i) {
    const double mean = d.treatment[i] == 1.0 ? oracle.mu1(d.covariates.row(i))
                                              : oracle.mu0(d.covariates.row(i));
    const double residual = d.outcome[i] - mean;
    sum_sq += residual * residual;
  }
  CHECK(std::sqrt(sum_sq / static_cast<double>(d.size())) == doctest::Approx(0.05).epsilon(0.02));
  check_treated_fraction(GeneratorKind::EffectOfK, kEffectKMeanPi);
}

TEST_CASE("generators are deterministic in the seed") {
  for (GeneratorKind kind : {GeneratorKind::LowOverlap, GeneratorKind::MisspecifiedTrees,
                             GeneratorKind::GoodOverlapBinary, GeneratorKind::EffectOfK}) {
    const Dataset a = generate({kind, 200, 42});
    const Dataset b = generate({kind, 200, 42});
    const Dataset c = generate({kind, 200, 43});
    CHECK(a.covariates == b.covariates);
    CHECK(a.treatment == b.treatment);
    CHECK(a.outcome == b.outcome);
    CHECK(a.covariates != c.covariates);
  }
}

TEST_CASE("generated csv files are byte-identical for the same seed") {
  const Dataset a = gen_low_overlap(100, 9);
  const Dataset b = gen_low_overlap(100, 9);
  save_csv(a, "dpcausal_gen_a.csv");
  save_csv(b, "dpcausal_gen_b.csv");
  std::ifstream fa("dpcausal_gen_a.csv"), fb("dpcausal_gen_b.csv");
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  CHECK(sa.str() == sb.str());
  CHECK(sa.str().substr(0, 7) == "x0,a,y\n");
  fa.close();
  fb.close();
  std::remove("dpcausal_gen_a.csv");
  std::remove("dpcausal_gen_b.csv");
}

TEST_CASE("generator names round-trip") {
  for (GeneratorKind kind : {GeneratorKind::LowOverlap, GeneratorKind::MisspecifiedTrees,
                             GeneratorKind::GoodOverlapBinary, GeneratorKind::EffectOfK}) {
    CHECK(generator_kind_from_string(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(generator_kind_from_string("nope"), ConfigError);
}
