#pragma once

#include "dpcausal/rng.hpp"
#include "dpcausal/types.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace dpcausal {

enum class LearnerKind { Constant, Linear, Logistic, Tree, Forest };

std::string to_string(LearnerKind kind);
LearnerKind learner_kind_from_string(std::string_view name);

struct LearnerSpec {
  LearnerKind kind = LearnerKind::Linear;
  // logistic
  int max_iter = 100;
  double tolerance = 1e-8;
  // tree
  int max_depth = 8;
  int min_leaf = 5;
  // forest
  int n_trees = 300;
  double subsample_fraction = 0.4;

  void check() const;
};

// A fitted model is just a map from a covariate row to a prediction; any
// user-supplied callable plugs into the pipeline the same way.
using Predictor = std::function<double(RowRef)>;

// Binary regression tree with axis-aligned midpoint splits chosen by
// variance reduction.
class RegressionTree {
 public:
  RegressionTree() = default;
  RegressionTree(MatrixRef x, VectorRef y, const LearnerSpec& spec);
  RegressionTree(MatrixRef x, VectorRef y, std::vector<int> rows, const LearnerSpec& spec);

  double predict(RowRef row) const;
  int node_count() const { return static_cast<int>(nodes_.size()); }

 private:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    double value = 0.0;
    int left = -1;
    int right = -1;
  };
  int build(MatrixRef x, VectorRef y, std::vector<int>& rows, int begin, int end, int depth,
            const LearnerSpec& spec);
  std::vector<Node> nodes_;
};

// Regression forest: average of trees fit on disjointly seeded subsamples.
// Exposes the between-tree spread so callers can form crude pointwise
// variance estimates for the prediction mean.
class RegressionForest {
 public:
  RegressionForest(MatrixRef x, VectorRef y, const LearnerSpec& spec, RngStream rng);

  double predict(RowRef row) const;
  double variance_of_mean(RowRef row) const;

 private:
  std::vector<RegressionTree> trees_;
};

Predictor fit_constant(VectorRef y);
Predictor fit_linear(MatrixRef x, VectorRef y, const LearnerSpec& spec);
Predictor fit_logistic(MatrixRef x, VectorRef a, const LearnerSpec& spec);
Predictor fit_tree(MatrixRef x, VectorRef y, const LearnerSpec& spec);
Predictor fit_forest(MatrixRef x, VectorRef y, const LearnerSpec& spec, RngStream rng);

std::shared_ptr<const RegressionForest> fit_forest_model(MatrixRef x, VectorRef y,
                                                         const LearnerSpec& spec, RngStream rng);

// Dispatch on spec.kind. The stream is consumed only by forests.
Predictor fit_learner(MatrixRef x, VectorRef y, const LearnerSpec& spec, RngStream rng);

// Wraps a predictor so its outputs always lie in [lo, hi].
Predictor clip_predictor(Predictor inner, double lo, double hi);

}  // namespace dpcausal
