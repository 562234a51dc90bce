#include "dpcausal/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace dpcausal {

namespace {

constexpr double kRidge = 1e-8;  // rank-safety regularization for least squares

double expit(double t) { return 1.0 / (1.0 + std::exp(-t)); }

void require_rows(MatrixRef x, VectorRef y) {
  if (x.rows() < 1) throw std::invalid_argument("learner: need at least one row");
  if (x.rows() != y.size()) throw std::invalid_argument("learner: row count mismatch");
}

// Negative log-likelihood of logistic regression; written with log1p for
// stability at large |margin|.
double logistic_loss(const Vector& margins, VectorRef a) {
  double loss = 0.0;
  for (Index i = 0; i < margins.size(); ++i) {
    const double m = margins[i];
    // log(1 + e^m) - a*m, computed as softplus(m) - a*m
    const double softplus = m > 0.0 ? m + std::log1p(std::exp(-m)) : std::log1p(std::exp(m));
    loss += softplus - a[i] * m;
  }
  return loss;
}

Matrix with_intercept(MatrixRef x) {
  Matrix design(x.rows(), x.cols() + 1);
  design.col(0).setOnes();
  design.rightCols(x.cols()) = x;
  return design;
}

}  // namespace

void LearnerSpec::check() const {
  if (max_iter < 1) throw ConfigError("learner: max_iter must be positive");
  if (!(tolerance > 0.0)) throw ConfigError("learner: tolerance must be positive");
  if (max_depth < 0) throw ConfigError("learner: max_depth must be nonnegative");
  if (min_leaf < 1) throw ConfigError("learner: min_leaf must be positive");
  if (n_trees < 1) throw ConfigError("learner: n_trees must be positive");
  if (!(subsample_fraction > 0.0 && subsample_fraction <= 1.0)) {
    throw ConfigError("learner: subsample_fraction must lie in (0, 1]");
  }
}

Predictor fit_constant(VectorRef y) {
  if (y.size() < 1) throw std::invalid_argument("learner: need at least one row");
  const double value = y.mean();
  return [value](RowRef) { return value; };
}

Predictor fit_linear(MatrixRef x, VectorRef y, const LearnerSpec& spec) {
  spec.check();
  require_rows(x, y);
  const Matrix design = with_intercept(x);
  const Index p = design.cols();
  Matrix gram = design.transpose() * design;
  gram.diagonal().array() += kRidge;
  const Vector beta = gram.ldlt().solve(design.transpose() * y);
  const double intercept = beta[0];
  const Vector coef = beta.tail(p - 1);
  return [intercept, coef](RowRef row) { return intercept + coef.dot(row.transpose()); };
}

Predictor fit_logistic(MatrixRef x, VectorRef a, const LearnerSpec& spec) {
  spec.check();
  require_rows(x, a);
  const Index n = x.rows();

  const double rate = a.mean();
  if (rate == 0.0 || rate == 1.0) {
    // Single-class target: Newton would diverge. Fall back to the empirical
    // rate, pulled off the boundary.
    const double eps = 0.5 / static_cast<double>(n);
    const double p = clip(rate, eps, 1.0 - eps);
    return [p](RowRef) { return p; };
  }

  const Matrix design = with_intercept(x);
  const Index p = design.cols();
  Vector beta = Vector::Zero(p);
  Vector margins = Vector::Zero(n);
  double loss = logistic_loss(margins, a);

  for (int iter = 0; iter < spec.max_iter; ++iter) {
    Vector probs(n);
    for (Index i = 0; i < n; ++i) probs[i] = expit(margins[i]);
    const Vector grad = design.transpose() * (probs - a);
    if (grad.lpNorm<Eigen::Infinity>() < spec.tolerance) break;

    const Vector weights = probs.array() * (1.0 - probs.array());
    Matrix hessian = design.transpose() * weights.asDiagonal() * design;
    hessian.diagonal().array() += 1e-10;
    const Vector direction = hessian.ldlt().solve(grad);

    // Damped step: halve until the loss does not increase.
    double step = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving) {
      const Vector candidate = beta - step * direction;
      const Vector cand_margins = design * candidate;
      const double cand_loss = logistic_loss(cand_margins, a);
      if (cand_loss <= loss) {
        beta = candidate;
        margins = cand_margins;
        loss = cand_loss;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }

  const double intercept = beta[0];
  const Vector coef = beta.tail(p - 1);
  return [intercept, coef](RowRef row) { return expit(intercept + coef.dot(row.transpose())); };
}

RegressionTree::RegressionTree(MatrixRef x, VectorRef y, const LearnerSpec& spec) {
  require_rows(x, y);
  std::vector<int> rows(static_cast<std::size_t>(x.rows()));
  std::iota(rows.begin(), rows.end(), 0);
  build(x, y, rows, 0, static_cast<int>(rows.size()), 0, spec);
}

RegressionTree::RegressionTree(MatrixRef x, VectorRef y, std::vector<int> rows,
                               const LearnerSpec& spec) {
  if (rows.empty()) throw std::invalid_argument("tree: empty row set");
  build(x, y, rows, 0, static_cast<int>(rows.size()), 0, spec);
}

int RegressionTree::build(MatrixRef x, VectorRef y, std::vector<int>& rows, int begin, int end,
                          int depth, const LearnerSpec& spec) {
  const int count = end - begin;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = begin; i < end; ++i) {
    const double v = y[rows[static_cast<std::size_t>(i)]];
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / count;

  const int node_id = static_cast<int>(nodes_.size());
  nodes_.push_back(Node{-1, 0.0, mean, -1, -1});

  const double node_sse = sum_sq - sum * sum / count;
  if (depth >= spec.max_depth || count < 2 * spec.min_leaf || node_sse <= 0.0) {
    return node_id;
  }

  int best_feature = -1;
  double best_threshold = 0.0;
  double best_cost = node_sse;
  std::vector<int> sorted(rows.begin() + begin, rows.begin() + end);
  for (Index feature = 0; feature < x.cols(); ++feature) {
    std::sort(sorted.begin(), sorted.end(), [&](int lhs, int rhs) {
      const double xl = x(lhs, feature), xr = x(rhs, feature);
      return xl < xr || (xl == xr && lhs < rhs);
    });
    double left_sum = 0.0, left_sq = 0.0;
    for (int i = 0; i + 1 < count; ++i) {
      const double v = y[sorted[static_cast<std::size_t>(i)]];
      left_sum += v;
      left_sq += v * v;
      const int left_count = i + 1;
      const int right_count = count - left_count;
      if (left_count < spec.min_leaf || right_count < spec.min_leaf) continue;
      const double lo = x(sorted[static_cast<std::size_t>(i)], feature);
      const double hi = x(sorted[static_cast<std::size_t>(i) + 1], feature);
      if (lo == hi) continue;
      const double right_sum = sum - left_sum;
      const double right_sq = sum_sq - left_sq;
      const double cost = (left_sq - left_sum * left_sum / left_count) +
                          (right_sq - right_sum * right_sum / right_count);
      if (cost < best_cost - 1e-12 * node_sse) {
        best_cost = cost;
        best_feature = static_cast<int>(feature);
        best_threshold = 0.5 * (lo + hi);
      }
    }
  }
  if (best_feature < 0) return node_id;

  const auto mid = std::partition(rows.begin() + begin, rows.begin() + end, [&](int r) {
    return x(r, best_feature) <= best_threshold;
  });
  const int split = static_cast<int>(mid - rows.begin());
  if (split == begin || split == end) return node_id;

  nodes_[static_cast<std::size_t>(node_id)].feature = best_feature;
  nodes_[static_cast<std::size_t>(node_id)].threshold = best_threshold;
  const int left = build(x, y, rows, begin, split, depth + 1, spec);
  nodes_[static_cast<std::size_t>(node_id)].left = left;
  const int right = build(x, y, rows, split, end, depth + 1, spec);
  nodes_[static_cast<std::size_t>(node_id)].right = right;
  return node_id;
}

double RegressionTree::predict(RowRef row) const {
  int node = 0;
  for (;;) {
    const Node& nd = nodes_[static_cast<std::size_t>(node)];
    if (nd.feature < 0) return nd.value;
    node = row[nd.feature] <= nd.threshold ? nd.left : nd.right;
  }
}

RegressionForest::RegressionForest(MatrixRef x, VectorRef y, const LearnerSpec& spec,
                                   RngStream rng) {
  spec.check();
  require_rows(x, y);
  const Index n = x.rows();
  const auto sample_size = static_cast<Index>(
      clip<long long>(std::llround(spec.subsample_fraction * static_cast<double>(n)), 1, n));
  trees_.reserve(static_cast<std::size_t>(spec.n_trees));
  for (int t = 0; t < spec.n_trees; ++t) {
    std::vector<int> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    RngStream tree_rng = rng.split(static_cast<std::uint64_t>(t));
    // Partial Fisher-Yates: the first sample_size entries form the subsample.
    for (Index i = 0; i < sample_size; ++i) {
      const auto j = i + static_cast<Index>(
                             tree_rng.next_below(static_cast<std::uint64_t>(n - i)));
      std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    std::vector<int> rows(pool.begin(), pool.begin() + sample_size);
    std::sort(rows.begin(), rows.end());
    trees_.emplace_back(x, y, std::move(rows), spec);
  }
}

double RegressionForest::predict(RowRef row) const {
  double sum = 0.0;
  for (const auto& tree : trees_) sum += tree.predict(row);
  return sum / static_cast<double>(trees_.size());
}

double RegressionForest::variance_of_mean(RowRef row) const {
  const auto t = static_cast<double>(trees_.size());
  if (trees_.size() < 2) return 0.0;
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& tree : trees_) {
    const double p = tree.predict(row);
    sum += p;
    sum_sq += p * p;
  }
  const double var_between = (sum_sq - sum * sum / t) / (t - 1.0);
  return var_between / t;
}

Predictor fit_tree(MatrixRef x, VectorRef y, const LearnerSpec& spec) {
  spec.check();
  auto tree = std::make_shared<RegressionTree>(x, y, spec);
  return [tree](RowRef row) { return tree->predict(row); };
}

Predictor fit_forest(MatrixRef x, VectorRef y, const LearnerSpec& spec, RngStream rng) {
  auto forest = fit_forest_model(x, y, spec, rng);
  return [forest](RowRef row) { return forest->predict(row); };
}

std::shared_ptr<const RegressionForest> fit_forest_model(MatrixRef x, VectorRef y,
                                                         const LearnerSpec& spec, RngStream rng) {
  return std::make_shared<const RegressionForest>(x, y, spec, rng);
}

Predictor fit_learner(MatrixRef x, VectorRef y, const LearnerSpec& spec, RngStream rng) {
  switch (spec.kind) {
    case LearnerKind::Constant: return fit_constant(y);
    case LearnerKind::Linear: return fit_linear(x, y, spec);
    case LearnerKind::Logistic: return fit_logistic(x, y, spec);
    case LearnerKind::Tree: return fit_tree(x, y, spec);
    case LearnerKind::Forest: return fit_forest(x, y, spec, rng);
  }
  throw std::logic_error("unreachable learner kind");
}

Predictor clip_predictor(Predictor inner, double lo, double hi) {
  if (!(lo <= hi)) throw std::invalid_argument("clip_predictor: lo must not exceed hi");
  return [inner = std::move(inner), lo, hi](RowRef row) { return clip(inner(row), lo, hi); };
}

std::string to_string(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::Constant: return "constant";
    case LearnerKind::Linear: return "linear";
    case LearnerKind::Logistic: return "logistic";
    case LearnerKind::Tree: return "tree";
    case LearnerKind::Forest: return "forest";
  }
  return "?";
}

LearnerKind learner_kind_from_string(std::string_view name) {
  if (name == "constant") return LearnerKind::Constant;
  if (name == "linear") return LearnerKind::Linear;
  if (name == "logistic") return LearnerKind::Logistic;
  if (name == "tree") return LearnerKind::Tree;
  if (name == "forest") return LearnerKind::Forest;
  throw ConfigError("unknown learner kind '" + std::string(name) + "'");
}

}  // namespace dpcausal
