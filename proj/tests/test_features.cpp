#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "indagg/features.hpp"
#include "indagg/rng.hpp"

using namespace indagg;

namespace {

IndicatorMatrix make_matrix(std::vector<ClassLabel> labels,
                            std::vector<std::vector<std::uint8_t>> columns) {
  IndicatorMatrix matrix;
  matrix.labels = std::move(labels);
  matrix.signal_ids.resize(matrix.labels.size());
  for (std::size_t i = 0; i < matrix.signal_ids.size(); ++i) {
    matrix.signal_ids[i] = static_cast<std::int64_t>(i);
  }
  for (std::size_t c = 0; c < columns.size(); ++c) {
    matrix.columns.push_back("col" + std::to_string(c));
    REQUIRE(columns[c].size() == matrix.labels.size());
  }
  matrix.bits.resize(matrix.rows() * matrix.cols());
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    for (std::size_t c = 0; c < matrix.cols(); ++c) {
      matrix.bits[r * matrix.cols() + c] = columns[c][r];
    }
  }
  return matrix;
}

double entropy_of_column(std::span<const std::uint8_t> v, int card) {
  std::vector<double> counts(static_cast<std::size_t>(card), 0.0);
  for (auto x : v) counts[x] += 1.0;
  double h = 0.0;
  for (double c : counts) {
    if (c > 0.0) {
      const double p = c / static_cast<double>(v.size());
      h -= p * std::log(p);
    }
  }
  return h;
}

// Plain restatement of the greedy rule for cross-checking: no caching, every
// mutual information recomputed from scratch each step.
std::vector<std::size_t> brute_force_greedy(const IndicatorMatrix& matrix, std::size_t count) {
  const std::size_t p = matrix.cols();
  const std::size_t n = matrix.rows();
  std::vector<std::vector<std::uint8_t>> cols(p, std::vector<std::uint8_t>(n));
  std::vector<std::uint8_t> y(n);
  for (std::size_t r = 0; r < n; ++r) {
    y[r] = static_cast<std::uint8_t>(matrix.labels[r]);
    for (std::size_t c = 0; c < p; ++c) cols[c][r] = matrix.at(r, c);
  }
  std::vector<std::size_t> order;
  std::vector<bool> used(p, false);
  for (std::size_t step = 0; step < count; ++step) {
    double best_score = -1e300;
    std::size_t best = p;
    for (std::size_t c = 0; c < p; ++c) {
      if (used[c]) continue;
      double score = mutual_information(cols[c], y, 4);
      if (!order.empty()) {
        double red = 0.0;
        for (std::size_t s : order) red += mutual_information(cols[c], cols[s], 2);
        score -= red / static_cast<double>(order.size());
      }
      if (score > best_score) {
        best_score = score;
        best = c;
      }
    }
    used[best] = true;
    order.push_back(best);
  }
  return order;
}

}  // namespace

TEST_CASE("mutual information: frozen values") {
  // constant column carries nothing
  std::vector<std::uint8_t> zeros(80, 0);
  std::vector<std::uint8_t> y(80);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = static_cast<std::uint8_t>(i % 4);
  CHECK(mutual_information(zeros, y, 4) == 0.0);

  // x = indicator(y == 2) on a balanced 4-class y:
  // I = (1/4) ln 4 + (3/4) ln(4/3)
  std::vector<std::uint8_t> hit(80);
  for (std::size_t i = 0; i < y.size(); ++i) hit[i] = y[i] == 2 ? 1 : 0;
  const double expected = 0.25 * std::log(4.0) + 0.75 * std::log(4.0 / 3.0);
  CHECK(mutual_information(hit, y, 4) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(0.5623).epsilon(1e-3));

  // parity over two balanced classes is fully informative: I = ln 2
  std::vector<std::uint8_t> y2(60), x2(60);
  for (std::size_t i = 0; i < y2.size(); ++i) {
    y2[i] = static_cast<std::uint8_t>(i % 2);
    x2[i] = y2[i];
  }
  CHECK(mutual_information(x2, y2, 2) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("mutual information: symmetry, relabeling, entropy bound") {
  Rng rng(51);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 40 + rng.below(60);
    std::vector<std::uint8_t> x(n), y(n);
    for (auto& v : x) v = rng.below(2) != 0;
    for (auto& v : y) v = static_cast<std::uint8_t>(rng.below(4));

    const double ixy = mutual_information(x, y, 4);
    CHECK(ixy >= 0.0);
    CHECK(ixy <= std::min(entropy_of_column(x, 2), entropy_of_column(y, 4)) + 1e-12);

    // binary-binary symmetry
    std::vector<std::uint8_t> yb(n);
    for (std::size_t i = 0; i < n; ++i) yb[i] = y[i] % 2;
    CHECK(mutual_information(x, yb, 2) == doctest::Approx(mutual_information(yb, x, 2)).epsilon(1e-12));

    // invariance under category relabeling of y (here: reversal 3 - y)
    std::vector<std::uint8_t> relabeled(n);
    for (std::size_t i = 0; i < n; ++i) relabeled[i] = static_cast<std::uint8_t>(3 - y[i]);
    CHECK(mutual_information(x, relabeled, 4) == doctest::Approx(ixy).epsilon(1e-12));
  }
}

TEST_CASE("mrmr: perfect feature first, duplicate punished behind an independent one") {
  // y balanced over 4 classes; f0 = (y != 0), f1 = duplicate of f0,
  // f2 = (y == 1): same relevance as f0 but only mildly redundant with it
  const std::size_t n = 400;
  std::vector<ClassLabel> labels(n);
  std::vector<std::uint8_t> f0(n), f1(n), f2(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int c = static_cast<int>(i % 4);
    labels[i] = static_cast<ClassLabel>(c);
    f0[i] = c != 0;
    f1[i] = f0[i];
    f2[i] = c == 1;
  }
  const auto matrix = make_matrix(labels, {f0, f1, f2});
  const auto ranking = mrmr_rank(matrix, 3);
  REQUIRE(ranking.size() == 3);
  CHECK(ranking.ordered_ids[0] == "col0");  // tie with col2 broken by index
  CHECK(ranking.ordered_ids[1] == "col2");  // duplicate loses to the independent feature
  CHECK(ranking.ordered_ids[2] == "col1");
  CHECK(ranking.redundancy[0] == 0.0);
  // duplicate's score at selection: relevance - I(f1; f0)/2 ... computed when picked 3rd
  CHECK(ranking.score[2] < ranking.score[1]);
}

TEST_CASE("mrmr: all-constant columns rank by index with zero scores") {
  const std::size_t n = 40;
  std::vector<ClassLabel> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<ClassLabel>(i % 4);
  const std::vector<std::uint8_t> c0(n, 0), c1(n, 1), c2(n, 0);
  const auto matrix = make_matrix(labels, {c0, c1, c2});
  const auto ranking = mrmr_rank(matrix, 3);
  CHECK(ranking.ordered_ids == std::vector<std::string>{"col0", "col1", "col2"});
  for (double s : ranking.score) CHECK(s == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("mrmr: full-length ranking is a permutation") {
  Rng rng(61);
  const std::size_t n = 60, p = 9;
  std::vector<ClassLabel> labels(n);
  std::vector<std::vector<std::uint8_t>> cols(p, std::vector<std::uint8_t>(n));
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<ClassLabel>(rng.below(4));
  for (auto& col : cols) {
    for (auto& v : col) v = rng.below(2) != 0;
  }
  const auto matrix = make_matrix(labels, cols);
  const auto ranking = mrmr_rank(matrix, p);
  auto sorted = ranking.ordered_ids;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == matrix.columns);
}

TEST_CASE("mrmr greedy equals the brute-force restatement on small matrices") {
  Rng rng(71);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 50 + rng.below(50);
    const std::size_t p = 5 + rng.below(8);  // up to 12 columns
    std::vector<ClassLabel> labels(n);
    for (auto& l : labels) l = static_cast<ClassLabel>(rng.below(4));
    std::vector<std::vector<std::uint8_t>> cols(p, std::vector<std::uint8_t>(n));
    for (std::size_t c = 0; c < p; ++c) {
      for (std::size_t i = 0; i < n; ++i) {
        // correlate some columns with the class, duplicate a few exactly
        if (c >= 2 && c % 3 == 2) {
          cols[c][i] = cols[c - 1][i];
        } else {
          cols[c][i] = (static_cast<std::uint8_t>(labels[i]) + rng.below(3)) % 4 >= 2;
        }
      }
    }
    const auto matrix = make_matrix(labels, cols);
    const auto expected = brute_force_greedy(matrix, p);
    const auto ranking = mrmr_rank(matrix, p, /*jobs=*/3);
    REQUIRE(ranking.column_index.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
      CHECK(ranking.column_index[i] == expected[i]);
    }
  }
}

TEST_CASE("mrmr: parallel evaluation does not change the ranking") {
  Rng rng(81);
  const std::size_t n = 200, p = 30;
  std::vector<ClassLabel> labels(n);
  for (auto& l : labels) l = static_cast<ClassLabel>(rng.below(4));
  std::vector<std::vector<std::uint8_t>> cols(p, std::vector<std::uint8_t>(n));
  for (auto& col : cols) {
    for (std::size_t i = 0; i < n; ++i) col[i] = (static_cast<int>(labels[i]) + static_cast<int>(rng.below(4))) % 4 == 0;
  }
  const auto matrix = make_matrix(labels, cols);
  const auto serial = mrmr_rank(matrix, p, 1);
  const auto threaded = mrmr_rank(matrix, p, 4);
  CHECK(serial.ordered_ids == threaded.ordered_ids);
  for (std::size_t i = 0; i < p; ++i) {
    CHECK(serial.score[i] == threaded.score[i]);
  }
}

TEST_CASE("mrmr argument validation") {
  const auto matrix = make_matrix({ClassLabel::none, ClassLabel::mean},
                                  {{0, 1}});
  CHECK_THROWS(mrmr_rank(matrix, 2));
  CHECK(mrmr_rank(matrix, 0).size() == 0);
}
