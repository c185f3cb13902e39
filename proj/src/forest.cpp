#include "indagg/forest.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "indagg/io_util.hpp"
#include "indagg/parallel.hpp"
#include "indagg/rng.hpp"

namespace indagg {

namespace {

double gini(const std::array<std::int32_t, kNumClasses>& counts, std::int32_t total) {
  if (total == 0) return 0.0;
  double sum_sq = 0.0;
  for (int c = 0; c < kNumClasses; ++c) {
    const double p = static_cast<double>(counts[c]) / static_cast<double>(total);
    sum_sq += p * p;
  }
  return 1.0 - sum_sq;
}

int majority_class(const std::array<std::int32_t, kNumClasses>& counts) {
  int best = 0;
  for (int c = 1; c < kNumClasses; ++c) {
    if (counts[c] > counts[best]) best = c;
  }
  return best;
}

struct TreeBuilder {
  const IndicatorMatrix& matrix;
  Rng rng;
  Tree tree;
  std::vector<std::uint32_t> sample;     // bootstrap row indices, permuted in place
  std::vector<std::uint32_t> col_order;  // scratch for mtry sampling
  int mtry;

  TreeBuilder(const IndicatorMatrix& m, std::uint64_t seed, int mtry_)
      : matrix(m), rng(seed), mtry(mtry_) {
    col_order.resize(m.cols());
    std::iota(col_order.begin(), col_order.end(), 0);
  }

  void bootstrap(std::vector<std::uint8_t>& in_bag) {
    const std::size_t n = matrix.rows();
    sample.resize(n);
    in_bag.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto r = static_cast<std::uint32_t>(rng.below(n));
      sample[i] = r;
      in_bag[r] = 1;
    }
  }

  void grow() {
    tree.nodes.clear();
    build_node(0, sample.size());
  }

  // Builds the node over sample[begin, end) and returns its index.
  std::int32_t build_node(std::size_t begin, std::size_t end) {
    std::array<std::int32_t, kNumClasses> counts{};
    for (std::size_t i = begin; i < end; ++i) {
      ++counts[static_cast<int>(matrix.labels[sample[i]])];
    }
    const auto total = static_cast<std::int32_t>(end - begin);
    const double node_gini = gini(counts, total);

    const std::int32_t node_index = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.push_back(TreeNode{-1, -1, -1, counts});
    if (node_gini <= 0.0 || total < 2) return node_index;

    // mtry distinct candidate columns via partial Fisher-Yates
    const std::size_t p = matrix.cols();
    for (int j = 0; j < mtry; ++j) {
      const std::size_t swap_with = j + rng.below(p - static_cast<std::size_t>(j));
      std::swap(col_order[j], col_order[swap_with]);
    }

    std::int32_t best_col = -1;
    double best_gain = 1e-12;
    std::array<std::int32_t, kNumClasses> best_right{};
    for (int j = 0; j < mtry; ++j) {
      const std::uint32_t col = col_order[j];
      std::array<std::int32_t, kNumClasses> right{};
      std::int32_t n_right = 0;
      for (std::size_t i = begin; i < end; ++i) {
        if (matrix.at(sample[i], col) != 0) {
          ++right[static_cast<int>(matrix.labels[sample[i]])];
          ++n_right;
        }
      }
      if (n_right == 0 || n_right == total) continue;
      std::array<std::int32_t, kNumClasses> left{};
      for (int c = 0; c < kNumClasses; ++c) left[c] = counts[c] - right[c];
      const std::int32_t n_left = total - n_right;
      const double child_gini = (static_cast<double>(n_left) * gini(left, n_left) +
                                 static_cast<double>(n_right) * gini(right, n_right)) /
                                static_cast<double>(total);
      const double gain = node_gini - child_gini;
      if (gain > best_gain || (gain == best_gain && best_col >= 0 &&
                               static_cast<std::int32_t>(col) < best_col)) {
        best_col = static_cast<std::int32_t>(col);
        best_gain = gain;
        best_right = right;
      }
    }
    if (best_col < 0) return node_index;  // nothing separates this node

    const auto mid = std::partition(sample.begin() + static_cast<std::ptrdiff_t>(begin),
                                    sample.begin() + static_cast<std::ptrdiff_t>(end),
                                    [&](std::uint32_t row) {
                                      return matrix.at(row, static_cast<std::size_t>(best_col)) == 0;
                                    });
    const std::size_t split = static_cast<std::size_t>(mid - sample.begin());
    const std::int32_t left_child = build_node(begin, split);
    const std::int32_t right_child = build_node(split, end);
    tree.nodes[node_index].split_col = best_col;
    tree.nodes[node_index].left = left_child;
    tree.nodes[node_index].right = right_child;
    return node_index;
  }
};

const TreeNode& route_to_leaf(const Tree& tree, std::span<const std::uint8_t> bits) {
  const TreeNode* node = &tree.nodes[0];
  while (node->split_col >= 0) {
    node = bits[static_cast<std::size_t>(node->split_col)] != 0
               ? &tree.nodes[static_cast<std::size_t>(node->right)]
               : &tree.nodes[static_cast<std::size_t>(node->left)];
  }
  return *node;
}

}  // namespace

Prediction ForestModel::predict(std::span<const std::uint8_t> bits) const {
  if (bits.size() != indicator_ids.size()) {
    throw std::invalid_argument("rf_predict: expected " + std::to_string(indicator_ids.size()) +
                                " bits, got " + std::to_string(bits.size()));
  }
  std::array<std::int32_t, kNumClasses> votes{};
  for (const Tree& tree : trees) {
    ++votes[majority_class(route_to_leaf(tree, bits).counts)];
  }
  Prediction prediction;
  for (int c = 0; c < kNumClasses; ++c) {
    prediction.per_class_score[c] =
        static_cast<double>(votes[c]) / static_cast<double>(trees.size());
  }
  prediction.label = static_cast<ClassLabel>(majority_class(votes));
  return prediction;
}

ForestModel rf_train(const IndicatorMatrix& matrix, const ForestParams& params) {
  if (matrix.rows() == 0 || matrix.cols() == 0) {
    throw std::invalid_argument("rf_train: empty matrix");
  }
  if (params.n_trees < 1) throw std::invalid_argument("rf_train: need at least one tree");
  int mtry = params.mtry;
  if (mtry == 0) mtry = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(matrix.cols()))));
  if (mtry < 1 || static_cast<std::size_t>(mtry) > matrix.cols()) {
    throw std::invalid_argument("rf_train: mtry out of range");
  }

  ForestModel model;
  model.indicator_ids = matrix.columns;
  model.mtry = mtry;
  model.seed = params.seed;
  model.trees.resize(static_cast<std::size_t>(params.n_trees));

  std::vector<std::vector<std::uint8_t>> in_bag(model.trees.size());
  parallel_for(model.trees.size(), params.jobs, [&](std::size_t t) {
    TreeBuilder builder(matrix, derive_seed(params.seed, t), mtry);
    builder.bootstrap(in_bag[t]);
    builder.grow();
    model.trees[t] = std::move(builder.tree);
  });

  // out-of-bag majority vote, rows never out of bag excluded
  std::vector<std::array<std::int32_t, kNumClasses>> oob_votes(matrix.rows());
  for (std::size_t t = 0; t < model.trees.size(); ++t) {
    for (std::size_t r = 0; r < matrix.rows(); ++r) {
      if (!in_bag[t][r]) {
        ++oob_votes[r][majority_class(route_to_leaf(model.trees[t], matrix.row(r)).counts)];
      }
    }
  }
  std::int64_t covered = 0, correct = 0;
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    std::int32_t total = 0;
    for (int c = 0; c < kNumClasses; ++c) total += oob_votes[r][c];
    if (total == 0) continue;
    ++covered;
    if (majority_class(oob_votes[r]) == static_cast<int>(matrix.labels[r])) ++correct;
  }
  model.oob_accuracy =
      covered == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(covered);
  return model;
}

std::vector<double> rf_variable_importance(const ForestModel& model,
                                           const IndicatorMatrix& matrix) {
  if (matrix.columns != model.indicator_ids) {
    throw std::invalid_argument("rf_variable_importance: matrix columns do not match the model");
  }
  std::vector<double> importance(model.indicator_ids.size(), 0.0);
  for (const Tree& tree : model.trees) {
    if (tree.nodes.empty()) continue;
    std::int32_t n_root = 0;
    for (int c = 0; c < kNumClasses; ++c) n_root += tree.nodes[0].counts[c];
    for (const TreeNode& node : tree.nodes) {
      if (node.split_col < 0) continue;
      const TreeNode& left = tree.nodes[static_cast<std::size_t>(node.left)];
      const TreeNode& right = tree.nodes[static_cast<std::size_t>(node.right)];
      std::int32_t n = 0, nl = 0, nr = 0;
      for (int c = 0; c < kNumClasses; ++c) {
        n += node.counts[c];
        nl += left.counts[c];
        nr += right.counts[c];
      }
      const double decrease = (static_cast<double>(n) * gini(node.counts, n) -
                               static_cast<double>(nl) * gini(left.counts, nl) -
                               static_cast<double>(nr) * gini(right.counts, nr)) /
                              static_cast<double>(n_root);
      importance[static_cast<std::size_t>(node.split_col)] += decrease;
    }
  }
  for (double& v : importance) v /= static_cast<double>(model.trees.size());
  return importance;
}

void write_forest_model(const std::filesystem::path& path, const ForestModel& model) {
  nlohmann::json doc;
  doc["kind"] = "random_forest";
  doc["seed"] = model.seed;
  doc["mtry"] = model.mtry;
  doc["oob_accuracy"] = model.oob_accuracy;
  doc["indicator_ids"] = model.indicator_ids;
  nlohmann::json trees = nlohmann::json::array();
  for (const Tree& tree : model.trees) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const TreeNode& node : tree.nodes) {
      nodes.push_back({node.split_col, node.left, node.right, node.counts[0], node.counts[1],
                       node.counts[2], node.counts[3]});
    }
    trees.push_back(std::move(nodes));
  }
  doc["trees"] = std::move(trees);
  write_file_atomic(path, doc.dump() + "\n");
}

ForestModel read_forest_model(const std::filesystem::path& path) {
  nlohmann::json doc = nlohmann::json::parse(read_file(path), nullptr, false);
  if (doc.is_discarded()) throw InputError(path.string() + ": invalid JSON");
  try {
    if (doc.at("kind").get<std::string>() != "random_forest") {
      throw InputError(path.string() + ": not a random_forest model file");
    }
    ForestModel model;
    model.seed = doc.at("seed").get<std::uint64_t>();
    model.mtry = doc.at("mtry").get<int>();
    model.oob_accuracy = doc.at("oob_accuracy").get<double>();
    model.indicator_ids = doc.at("indicator_ids").get<std::vector<std::string>>();
    for (const auto& tree_doc : doc.at("trees")) {
      Tree tree;
      for (const auto& node_doc : tree_doc) {
        TreeNode node;
        node.split_col = node_doc.at(0).get<std::int32_t>();
        node.left = node_doc.at(1).get<std::int32_t>();
        node.right = node_doc.at(2).get<std::int32_t>();
        for (int c = 0; c < kNumClasses; ++c) {
          node.counts[c] = node_doc.at(3 + c).get<std::int32_t>();
        }
        tree.nodes.push_back(node);
      }
      model.trees.push_back(std::move(tree));
    }
    return model;
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

}  // namespace indagg
