#include <doctest.h>

#include <cmath>
#include <sstream>

#include "indagg/forest.hpp"
#include "indagg/naive_bayes.hpp"
#include "indagg/rng.hpp"

using namespace indagg;

namespace {

IndicatorMatrix make_matrix(std::vector<ClassLabel> labels,
                            std::vector<std::vector<std::uint8_t>> rows) {
  IndicatorMatrix matrix;
  matrix.labels = std::move(labels);
  REQUIRE(rows.size() == matrix.labels.size());
  matrix.signal_ids.resize(matrix.labels.size());
  for (std::size_t i = 0; i < matrix.signal_ids.size(); ++i) {
    matrix.signal_ids[i] = static_cast<std::int64_t>(i);
  }
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  for (std::size_t c = 0; c < cols; ++c) matrix.columns.push_back("col" + std::to_string(c));
  for (const auto& row : rows) {
    REQUIRE(row.size() == cols);
    matrix.bits.insert(matrix.bits.end(), row.begin(), row.end());
  }
  return matrix;
}

// four-class matrix encoding the class in two perfectly informative bits
IndicatorMatrix separable_matrix(std::size_t per_class) {
  std::vector<ClassLabel> labels;
  std::vector<std::vector<std::uint8_t>> rows;
  for (std::size_t i = 0; i < per_class; ++i) {
    for (int c = 0; c < kNumClasses; ++c) {
      labels.push_back(static_cast<ClassLabel>(c));
      rows.push_back({static_cast<std::uint8_t>(c >> 1), static_cast<std::uint8_t>(c & 1)});
    }
  }
  return make_matrix(std::move(labels), std::move(rows));
}

}  // namespace

TEST_CASE("nb_train: smoothing arithmetic and priors") {
  // class 0 has three rows with the indicator always on; the other classes
  // have one row each with it off
  const auto matrix = make_matrix(
      {ClassLabel::none, ClassLabel::none, ClassLabel::none, ClassLabel::variance,
       ClassLabel::mean, ClassLabel::trend},
      {{1}, {1}, {1}, {0}, {0}, {0}});
  const auto model = nb_train(matrix);
  CHECK(model.theta[0][0] == doctest::Approx(4.0 / 5.0).epsilon(1e-15));
  CHECK(model.theta[0][1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(model.class_priors[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(model.class_priors[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));

  double prior_sum = 0.0;
  for (double p : model.class_priors) prior_sum += p;
  CHECK(prior_sum == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& row : model.theta) {
    for (double t : row) {
      CHECK(t > 0.0);
      CHECK(t < 1.0);
    }
  }
}

TEST_CASE("nb_train: balanced classes give flat priors and the smoothing floor holds") {
  const std::size_t per_class = 250;
  std::vector<ClassLabel> labels;
  std::vector<std::vector<std::uint8_t>> rows;
  for (int c = 0; c < kNumClasses; ++c) {
    for (std::size_t i = 0; i < per_class; ++i) {
      labels.push_back(static_cast<ClassLabel>(c));
      rows.push_back({static_cast<std::uint8_t>(c == 2), 0});  // second column constant 0
    }
  }
  const auto model = nb_train(make_matrix(std::move(labels), std::move(rows)));
  for (double p : model.class_priors) CHECK(p == doctest::Approx(0.25).epsilon(1e-15));
  for (int c = 0; c < kNumClasses; ++c) {
    CHECK(model.theta[1][c] == doctest::Approx(1.0 / 252.0).epsilon(1e-15));
  }
  CHECK(model.theta[0][2] == doctest::Approx(251.0 / 252.0).epsilon(1e-15));
}

TEST_CASE("nb_train: missing class is an error naming the class") {
  const auto matrix = make_matrix({ClassLabel::none, ClassLabel::variance, ClassLabel::mean},
                                  {{1}, {0}, {1}});
  try {
    nb_train(matrix);
    FAIL("expected an exception");
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find("trend") != std::string::npos);
  }
}

TEST_CASE("nb_predict: symmetric model ties break to the lowest class code") {
  NaiveBayesModel model;
  model.class_priors = {0.25, 0.25, 0.25, 0.25};
  model.indicator_ids = {"a", "b"};
  model.theta = {{0.3, 0.3, 0.3, 0.3}, {0.7, 0.7, 0.7, 0.7}};
  const std::vector<std::uint8_t> bits{1, 0};
  const auto prediction = model.predict(bits);
  CHECK(prediction.label == ClassLabel::none);
  for (double s : prediction.per_class_score) CHECK(s == doctest::Approx(0.25).epsilon(1e-12));

  CHECK_THROWS(model.predict(std::vector<std::uint8_t>{1}));
}

TEST_CASE("nb_predict: posterior matches direct Bayes arithmetic") {
  // one row per class, single indicator: theta = 2/3 for classes 0 and 2
  // (bit on), 1/3 for classes 1 and 3
  const auto matrix = make_matrix(
      {ClassLabel::none, ClassLabel::variance, ClassLabel::mean, ClassLabel::trend},
      {{1}, {0}, {1}, {0}});
  const auto model = nb_train(matrix);
  const auto on = model.predict(std::vector<std::uint8_t>{1});
  // posterior for bit=1: (2/3) / (2/3 + 1/3 + 2/3 + 1/3) = 1/3 for classes 0, 2
  CHECK(on.per_class_score[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(on.per_class_score[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(on.per_class_score[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(on.per_class_score[3] == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(on.label == ClassLabel::none);  // tie with class 2

  // richer two-indicator check against hand-multiplied products
  const auto matrix2 = make_matrix(
      {ClassLabel::none, ClassLabel::none, ClassLabel::none, ClassLabel::variance,
       ClassLabel::variance, ClassLabel::mean, ClassLabel::trend},
      {{1, 0}, {1, 1}, {0, 0}, {0, 1}, {0, 1}, {1, 1}, {0, 0}});
  const auto model2 = nb_train(matrix2);
  const std::vector<std::uint8_t> probe{1, 1};
  const auto prediction = model2.predict(probe);
  std::array<double, 4> expected{};
  double norm = 0.0;
  for (int c = 0; c < 4; ++c) {
    expected[c] = model2.class_priors[c] * model2.theta[0][c] * model2.theta[1][c];
    norm += expected[c];
  }
  for (int c = 0; c < 4; ++c) {
    CHECK(prediction.per_class_score[c] == doctest::Approx(expected[c] / norm).epsilon(1e-12));
  }
}

TEST_CASE("nb posterior sums to one and survives column permutation") {
  Rng rng(90);
  const std::size_t n = 120, p = 12;
  std::vector<ClassLabel> labels(n);
  std::vector<std::vector<std::uint8_t>> rows(n, std::vector<std::uint8_t>(p));
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = static_cast<ClassLabel>(i % 4);
    for (auto& b : rows[i]) b = rng.below(2) != 0;
  }
  const auto matrix = make_matrix(labels, rows);
  const auto model = nb_train(matrix);

  // permuted copy: reverse column order
  IndicatorMatrix reversed = matrix;
  std::reverse(reversed.columns.begin(), reversed.columns.end());
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < p; ++c) {
      reversed.bits[r * p + c] = matrix.at(r, p - 1 - c);
    }
  }
  const auto reversed_model = nb_train(reversed);

  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::uint8_t> bits(p);
    for (auto& b : bits) b = rng.below(2) != 0;
    const auto prediction = model.predict(bits);
    double sum = 0.0;
    for (double s : prediction.per_class_score) sum += s;
    CHECK(std::fabs(sum - 1.0) < 1e-12);

    std::vector<std::uint8_t> reversed_bits(bits.rbegin(), bits.rend());
    CHECK(reversed_model.predict(reversed_bits).label == prediction.label);
  }
}

TEST_CASE("nb decisions are stable under training-set duplication") {
  Rng rng(91);
  const std::size_t n = 160, p = 10;
  std::vector<ClassLabel> labels(n);
  std::vector<std::vector<std::uint8_t>> rows(n, std::vector<std::uint8_t>(p));
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = static_cast<ClassLabel>(i % 4);
    for (std::size_t c = 0; c < p; ++c) {
      rows[i][c] = ((i % 4) + rng.below(3)) % 4 >= 2;
    }
  }
  const auto matrix = make_matrix(labels, rows);

  auto doubled_labels = labels;
  doubled_labels.insert(doubled_labels.end(), labels.begin(), labels.end());
  auto doubled_rows = rows;
  doubled_rows.insert(doubled_rows.end(), rows.begin(), rows.end());
  const auto doubled = make_matrix(doubled_labels, doubled_rows);

  const auto model = nb_train(matrix);
  const auto doubled_model = nb_train(doubled);
  // theta moves from (k+1)/(n+2) to (2k+1)/(2n+2); decisions agree wherever
  // the posterior margin is not razor thin
  int compared = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::uint8_t> bits(p);
    for (auto& b : bits) b = rng.below(2) != 0;
    const auto a = model.predict(bits);
    double best = 0.0, second = 0.0;
    for (double s : a.per_class_score) {
      if (s > best) {
        second = best;
        best = s;
      } else if (s > second) {
        second = s;
      }
    }
    if (best - second > 1e-6) {
      CHECK(doubled_model.predict(bits).label == a.label);
      ++compared;
    }
  }
  CHECK(compared > 100);
}

TEST_CASE("rf_train: separable data is learned almost perfectly out of bag") {
  const auto matrix = separable_matrix(100);
  ForestParams params;
  params.n_trees = 100;
  params.seed = 7;
  const auto model = rf_train(matrix, params);
  CHECK(model.oob_accuracy >= 0.95);
  // in-sample predictions are exact
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    CHECK(model.predict(matrix.row(r)).label == matrix.labels[r]);
  }
}

TEST_CASE("rf_train: single-tree OOB coverage is about 1/e") {
  Rng rng(92);
  const std::size_t n = 1000;
  std::vector<ClassLabel> labels(n);
  std::vector<std::vector<std::uint8_t>> rows(n, std::vector<std::uint8_t>(3));
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = static_cast<ClassLabel>(i % 4);
    for (auto& b : rows[i]) b = rng.below(2) != 0;
  }
  const auto matrix = make_matrix(labels, rows);
  ForestParams params;
  params.n_trees = 1;
  params.seed = 3;
  const auto model = rf_train(matrix, params);

  // count rows out of bag by replaying the tree's bootstrap stream
  Rng replay(derive_seed(params.seed, 0));
  std::vector<bool> in_bag(n, false);
  for (std::size_t i = 0; i < n; ++i) in_bag[replay.below(n)] = true;
  std::size_t oob = 0;
  for (bool b : in_bag) oob += !b;
  const double coverage = static_cast<double>(oob) / static_cast<double>(n);
  CHECK(std::fabs(coverage - std::exp(-1.0)) < 0.05);
}

TEST_CASE("rf_train is reproducible bit for bit") {
  const auto matrix = separable_matrix(50);
  ForestParams params;
  params.n_trees = 20;
  params.seed = 11;
  const auto a = rf_train(matrix, params);
  const auto b = rf_train(matrix, params);
  CHECK(a.oob_accuracy == b.oob_accuracy);
  REQUIRE(a.trees.size() == b.trees.size());
  for (std::size_t t = 0; t < a.trees.size(); ++t) {
    REQUIRE(a.trees[t].nodes.size() == b.trees[t].nodes.size());
    for (std::size_t k = 0; k < a.trees[t].nodes.size(); ++k) {
      CHECK(a.trees[t].nodes[k].split_col == b.trees[t].nodes[k].split_col);
      CHECK(a.trees[t].nodes[k].counts == b.trees[t].nodes[k].counts);
    }
  }
  // parallel growth must give the same forest
  ForestParams par = params;
  par.jobs = 4;
  const auto c = rf_train(matrix, par);
  CHECK(c.oob_accuracy == a.oob_accuracy);
}

TEST_CASE("rf_predict: votes, tie-break, and single-tree behavior") {
  // hand-built forest: tree 0 votes class 1, tree 1 votes class 3
  ForestModel model;
  model.indicator_ids = {"a"};
  Tree t0;
  t0.nodes.push_back(TreeNode{-1, -1, -1, {0, 5, 0, 0}});
  Tree t1;
  t1.nodes.push_back(TreeNode{-1, -1, -1, {0, 0, 0, 5}});
  model.trees = {t0, t1};
  const std::vector<std::uint8_t> bits{0};
  const auto prediction = model.predict(bits);
  CHECK(prediction.label == ClassLabel::variance);  // 50/50 between 1 and 3 -> lower code
  CHECK(prediction.per_class_score[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(prediction.per_class_score[3] == doctest::Approx(0.5).epsilon(1e-15));

  // all trees voting the same class give a unit score
  model.trees = {t1, t1, t1};
  const auto unanimous = model.predict(bits);
  CHECK(unanimous.label == ClassLabel::trend);
  CHECK(unanimous.per_class_score[3] == doctest::Approx(1.0).epsilon(1e-15));

  // a single-tree forest predicts that tree's leaf majority
  const auto matrix = separable_matrix(30);
  ForestParams params;
  params.n_trees = 1;
  params.seed = 19;
  const auto single = rf_train(matrix, params);
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    const auto p = single.predict(matrix.row(r));
    bool unit = false;
    for (double s : p.per_class_score) unit |= s == 1.0;
    CHECK(unit);
  }

  CHECK_THROWS(single.predict(std::vector<std::uint8_t>{0, 1, 0}));
}

TEST_CASE("rf_variable_importance: discriminative columns dominate, unused are zero") {
  // col0 perfectly separates class >= 2; col1 is pure noise; col2 constant
  Rng rng(93);
  const std::size_t n = 400;
  std::vector<ClassLabel> labels(n);
  std::vector<std::vector<std::uint8_t>> rows(n, std::vector<std::uint8_t>(3));
  for (std::size_t i = 0; i < n; ++i) {
    const int c = static_cast<int>(i % 4);
    labels[i] = static_cast<ClassLabel>(c);
    rows[i] = {static_cast<std::uint8_t>(c >= 2), static_cast<std::uint8_t>(rng.below(2)), 0};
  }
  const auto matrix = make_matrix(labels, rows);
  ForestParams params;
  params.n_trees = 60;
  params.seed = 29;
  const auto model = rf_train(matrix, params);
  const auto importance = rf_variable_importance(model, matrix);
  REQUIRE(importance.size() == 3);
  CHECK(importance[0] > importance[1]);
  CHECK(importance[2] == 0.0);  // constant column can never split
  for (double v : importance) CHECK(v >= 0.0);

  IndicatorMatrix renamed = matrix;
  renamed.columns[0] = "other";
  CHECK_THROWS(rf_variable_importance(model, renamed));
}
