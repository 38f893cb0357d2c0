#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "bfd/matrix.hpp"

namespace bfd::gbdt {

/// Hyperparameters of the boosted classifier. Ranges follow the usual
/// XGBoost surface: n_estimators [1,1000], learning_rate [0.001,1],
/// max_depth [1,15], min_child_weight [1,100], colsample_bytree (0,1].
struct BoosterParams {
  int n_estimators = 100;
  double learning_rate = 0.1;
  int max_depth = 6;
  double min_child_weight = 1.0;
  double colsample_bytree = 1.0;
  double reg_lambda = 1.0;
  double reg_gamma = 0.0;
  std::uint64_t seed = 0;

  // Throws ArgumentError naming the first out-of-range field.
  void validate() const;
  friend bool operator==(const BoosterParams&, const BoosterParams&) = default;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf weight, already scaled by the learning rate

  bool is_leaf() const noexcept { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

/// Binary regression tree; node 0 is the root. Rows with x[feature] <
/// threshold go left.
class RegressionTree {
 public:
  RegressionTree() = default;
  explicit RegressionTree(std::vector<TreeNode> nodes);

  double predict(std::span<const double> row) const;
  int depth() const;  // edges on the longest root-to-leaf path
  std::size_t leaf_count() const;
  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }

  friend bool operator==(const RegressionTree&, const RegressionTree&) = default;

 private:
  std::vector<TreeNode> nodes_;
};

/// Softmax ensemble: trees[c][r] is the class-c tree of boosting round r.
struct BoostedModel {
  int class_count = 0;
  std::size_t feature_count = 0;
  BoosterParams params;
  std::vector<std::vector<RegressionTree>> trees;

  std::size_t rounds() const noexcept { return trees.empty() ? 0 : trees.front().size(); }
  friend bool operator==(const BoostedModel&, const BoostedModel&) = default;
};

/// Second-order boosting of softmax cross-entropy. Each round fits one tree
/// per class by exact greedy search over midpoints between sorted unique
/// feature values; gain ties resolve to the lowest (feature, threshold).
/// Throws ArgumentError for bad params, shape mismatch or single-class
/// labels, DataError for non-finite features.
BoostedModel train(const Matrix& features, std::span<const int> labels,
                   const BoosterParams& params);

// Per-class margin sums, n x C.
Matrix predict_margin(const BoostedModel& model, const Matrix& features);
Matrix predict_proba(const BoostedModel& model, const Matrix& features);
// Argmax of the probabilities, lowest class on ties.
std::vector<int> predict(const BoostedModel& model, const Matrix& features);

/// Softmax gradient p - y and Hessian diagonal p(1 - p) for one row of margins.
void softmax_gradients(std::span<const double> margins, int label, std::span<double> grad,
                       std::span<double> hess);

// Mean cross-entropy of the training set after 0, 1, ..., rounds() rounds.
std::vector<double> staged_loss(const BoostedModel& model, const Matrix& features,
                                std::span<const int> labels);

/// Trains with `params`, then compares the analytic gradient and Hessian at
/// the resulting margins with central finite differences of the per-row
/// loss (evaluated in extended precision). Returns the largest
/// |analytic - numeric| / max(|analytic|, |numeric|, 1e-6).
double gradient_check(const BoosterParams& params, const Matrix& features,
                      std::span<const int> labels);

inline constexpr int kModelFormatVersion = 1;

nlohmann::json to_json(const BoostedModel& model);
BoostedModel model_from_json(const nlohmann::json& j);
nlohmann::json to_json(const BoosterParams& params);
// Missing keys keep their defaults; unknown keys are rejected.
BoosterParams params_from_json(const nlohmann::json& j);

}  // namespace bfd::gbdt
