#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <string_view>

namespace dpcausal {

using Scalar = double;
using Index = Eigen::Index;
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;
using MatrixRef = Eigen::Ref<const Matrix>;
using VectorRef = Eigen::Ref<const Vector>;
using RowRef = Eigen::Ref<const RowVector>;

enum class EstimatorKind { G, IPW, AIPW };

std::string to_string(EstimatorKind kind);
EstimatorKind estimator_kind_from_string(std::string_view name);

// Configuration problems (bad flags, malformed config file). CLI exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Data contract violations (non-binary treatment, NaN, bad CSV). CLI exit code 3.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Privacy contract violations (zero budget without non-private mode). CLI exit code 4.
struct PrivacyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Outcome bound B_mu and inverse-propensity bound B_pi. Propensity predictions
// are clipped to [1/b_pi, 1 - 1/b_pi], outcomes to [-b_mu, b_mu].
struct Bounds {
  double b_mu = 1.0;
  double b_pi = 10.0;

  double propensity_floor() const { return 1.0 / b_pi; }

  void check() const {
    if (!(b_mu > 0.0)) throw ConfigError("bounds: b_mu must be positive");
    if (!(b_pi > 1.0)) throw ConfigError("bounds: b_pi must exceed 1");
  }
};

template <typename T>
T clip(T value, T lo, T hi) {
  return value < lo ? lo : (value > hi ? hi : value);
}

}  // namespace dpcausal
