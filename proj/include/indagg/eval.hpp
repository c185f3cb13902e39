#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "indagg/features.hpp"
#include "indagg/forest.hpp"
#include "indagg/matrix.hpp"
#include "indagg/naive_bayes.hpp"

namespace indagg {

struct SplitSpec {
  int learn_per_class = 250;
  int test_subsets = 10;
  int subset_size = 500;  // balanced: subset_size / kNumClasses rows per class
  std::uint64_t seed = 0;
};

/// learn_rows / test_rows index into the matrix the split was made from;
/// subsets index into test_rows (positions within the test set). Subsets are
/// drawn without replacement within a subset and independently across
/// subsets.
struct SplitResult {
  std::vector<std::size_t> learn_rows;
  std::vector<std::size_t> test_rows;
  std::vector<std::vector<std::size_t>> subsets;
};

/// Class-balanced learning split: exactly learn_per_class rows per class,
/// sampled without replacement; the rest is the test set (original order).
/// Throws with the per-class deficit when infeasible.
SplitResult split(std::span<const ClassLabel> labels, const SplitSpec& spec);

struct EvalReport {
  double train_accuracy = 0.0;
  double test_mean_accuracy = 0.0;  // mean over the balanced subsets
  double test_accuracy_sd = 0.0;    // sample sd over the subsets
  double test_full_accuracy = 0.0;  // fraction correct on the whole test set
  std::vector<double> subset_accuracies;
  std::optional<double> oob_accuracy;
  std::array<std::array<std::int64_t, kNumClasses>, kNumClasses> confusion{};  // [true][pred]
  std::array<double, kNumClasses> per_class_error{};
};

/// Accuracy / confusion report for any model with indicator_ids and
/// predict(bits). Columns of both matrices must match the model.
template <class Model>
EvalReport evaluate(const Model& model, const IndicatorMatrix& learn, const IndicatorMatrix& test,
                    const std::vector<std::vector<std::size_t>>& subsets);

enum class ClassifierKind { naive_bayes, random_forest };

const char* to_string(ClassifierKind kind);
ClassifierKind classifier_from_string(const std::string& name);  // "nb" | "rf"

struct SweepRecord {
  int n_indicators = 0;
  double train_acc = 0.0;
  std::vector<double> subset_accs;
  double test_mean = 0.0;
  double test_sd = 0.0;
  double test_full = 0.0;
  std::optional<double> oob;
  std::array<double, kNumClasses> per_class_error{};
};

struct SweepResult {
  ClassifierKind classifier = ClassifierKind::naive_bayes;
  std::vector<SweepRecord> records;  // m = 1..max_count in order
};

struct SweepParams {
  int n_trees = 500;
  std::uint64_t seed = 0;  // forest m gets stream derive_seed(seed, m)
  int jobs = 1;
};

/// For each m in 1..max_count, trains the classifier on the first m ranked
/// indicators and evaluates it. Iterations are independent and run on `jobs`
/// threads; records land in slot m-1, so the result does not depend on
/// scheduling.
SweepResult forward_sweep(const IndicatorMatrix& learn, const IndicatorMatrix& test,
                          const std::vector<std::vector<std::size_t>>& subsets,
                          const RankingResult& ranking, int max_count, ClassifierKind kind,
                          const SweepParams& params);

/// The m <= max_allowed maximizing training accuracy (Naive Bayes sweeps) or
/// the out-of-bag accuracy (forest sweeps); ties go to the smallest m.
int select_optimal(const SweepResult& sweep, int max_allowed);

struct ConditionalProbabilityTable {
  std::vector<std::string> ids;                              // selection order
  std::vector<std::array<double, kNumClasses>> rates;        // model theta rows
};

/// Rows are the model's smoothed P(bit = 1 | class) for the requested ids, in
/// the given order. Unknown id => error.
ConditionalProbabilityTable conditional_probability_report(const NaiveBayesModel& model,
                                                           std::span<const std::string> ids);

// --- file formats ---------------------------------------------------------

void write_split_json(const std::filesystem::path& path, const SplitResult& split_result,
                      const IndicatorMatrix& matrix);
/// Resolves the stored signal ids against `matrix` row order.
SplitResult read_split_json(const std::filesystem::path& path, const IndicatorMatrix& matrix);

void write_report_json(const std::filesystem::path& path, const EvalReport& report);

/// Wide CSV: one row per m with train/oob/test stats, per-class errors and
/// the subset accuracies.
void write_sweep_csv(const std::filesystem::path& path, const SweepResult& sweep);
SweepResult read_sweep_csv(const std::filesystem::path& path);

/// Plot-ready flat CSV: one row per (m, subset) accuracy.
void write_sweep_points_csv(const std::filesystem::path& path, const SweepResult& sweep);

/// CSV: rank,indicator_id,p_none,p_variance,p_mean,p_trend.
void write_probability_table_csv(const std::filesystem::path& path,
                                 const ConditionalProbabilityTable& table);

// --- implementation -------------------------------------------------------

namespace detail {
EvalReport evaluate_predictions(std::span<const ClassLabel> learn_labels,
                                std::span<const ClassLabel> learn_pred,
                                std::span<const ClassLabel> test_labels,
                                std::span<const ClassLabel> test_pred,
                                const std::vector<std::vector<std::size_t>>& subsets);
}  // namespace detail

template <class Model>
EvalReport evaluate(const Model& model, const IndicatorMatrix& learn, const IndicatorMatrix& test,
                    const std::vector<std::vector<std::size_t>>& subsets) {
  if (learn.columns != model.indicator_ids || test.columns != model.indicator_ids) {
    throw std::invalid_argument("evaluate: matrix columns do not match the model");
  }
  std::vector<ClassLabel> learn_pred(learn.rows());
  for (std::size_t r = 0; r < learn.rows(); ++r) learn_pred[r] = model.predict(learn.row(r)).label;
  std::vector<ClassLabel> test_pred(test.rows());
  for (std::size_t r = 0; r < test.rows(); ++r) test_pred[r] = model.predict(test.row(r)).label;
  return detail::evaluate_predictions(learn.labels, learn_pred, test.labels, test_pred, subsets);
}

}  // namespace indagg
