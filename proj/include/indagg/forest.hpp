#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "indagg/matrix.hpp"
#include "indagg/naive_bayes.hpp"

namespace indagg {

/// Binary split node: rows with bit 0 at split_col go left, bit 1 go right.
/// split_col == -1 marks a leaf. Every node keeps its bootstrap class counts;
/// internal-node counts feed the Gini importance, leaf counts the votes.
struct TreeNode {
  std::int32_t split_col = -1;
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::array<std::int32_t, kNumClasses> counts{};
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
};

struct ForestParams {
  int n_trees = 500;
  int mtry = 0;  // 0 resolves to floor(sqrt(#columns))
  std::uint64_t seed = 0;
  int jobs = 1;
};

struct ForestModel {
  std::vector<std::string> indicator_ids;
  std::vector<Tree> trees;
  int mtry = 0;
  std::uint64_t seed = 0;
  double oob_accuracy = 0.0;

  /// Majority vote across trees; per_class_score holds vote fractions and
  /// ties resolve toward the lower class code.
  Prediction predict(std::span<const std::uint8_t> bits) const;
};

/// Breiman-style forest on binary features: each tree is grown to purity on a
/// bootstrap sample (n draws with replacement) from its own stream
/// derive_seed(seed, tree), choosing at every node the best Gini split among
/// mtry columns sampled without replacement (leaf when no candidate separates
/// the node). The out-of-bag accuracy is the majority vote of the trees not
/// containing each row, over rows that are out of bag at least once.
ForestModel rf_train(const IndicatorMatrix& matrix, const ForestParams& params);

/// Mean decrease in Gini impurity: per tree, the impurity decrease of every
/// split (weighted by the node's share of the bootstrap sample) is credited
/// to the split column; credits are averaged over trees. The matrix is only
/// checked for column compatibility. Columns never split on score 0.
std::vector<double> rf_variable_importance(const ForestModel& model,
                                           const IndicatorMatrix& matrix);

void write_forest_model(const std::filesystem::path& path, const ForestModel& model);
ForestModel read_forest_model(const std::filesystem::path& path);

}  // namespace indagg
