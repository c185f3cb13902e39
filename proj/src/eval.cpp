#include "indagg/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "indagg/io_util.hpp"
#include "indagg/parallel.hpp"
#include "indagg/rng.hpp"
#include "indagg/sim.hpp"

namespace indagg {

namespace {

// Fisher-Yates with the stream's own generator; used for all sampling below.
void shuffle_indices(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rng.below(i)]);
  }
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

const char* to_string(ClassifierKind kind) {
  return kind == ClassifierKind::naive_bayes ? "nb" : "rf";
}

ClassifierKind classifier_from_string(const std::string& name) {
  if (name == "nb") return ClassifierKind::naive_bayes;
  if (name == "rf") return ClassifierKind::random_forest;
  throw std::invalid_argument("unknown classifier (expected nb or rf): " + name);
}

SplitResult split(std::span<const ClassLabel> labels, const SplitSpec& spec) {
  if (spec.subset_size % kNumClasses != 0) {
    throw std::invalid_argument("subset_size must be a multiple of " +
                                std::to_string(kNumClasses));
  }
  std::array<std::vector<std::size_t>, kNumClasses> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    by_class[static_cast<int>(labels[i])].push_back(i);
  }
  for (int c = 0; c < kNumClasses; ++c) {
    if (by_class[c].size() < static_cast<std::size_t>(spec.learn_per_class)) {
      throw std::invalid_argument(
          std::string("split: class ") + to_string(static_cast<ClassLabel>(c)) + " has " +
          std::to_string(by_class[c].size()) + " rows, needs " +
          std::to_string(spec.learn_per_class) + " (short by " +
          std::to_string(spec.learn_per_class - static_cast<int>(by_class[c].size())) + ")");
    }
  }

  SplitResult result;
  std::vector<bool> in_learn(labels.size(), false);
  for (int c = 0; c < kNumClasses; ++c) {
    std::vector<std::size_t> rows = by_class[c];
    Rng rng(derive_seed(spec.seed, 1, static_cast<std::uint64_t>(c)));
    shuffle_indices(rows, rng);
    for (int i = 0; i < spec.learn_per_class; ++i) in_learn[rows[i]] = true;
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    (in_learn[i] ? result.learn_rows : result.test_rows).push_back(i);
  }

  // per-class positions within the test set
  std::array<std::vector<std::size_t>, kNumClasses> test_by_class;
  for (std::size_t pos = 0; pos < result.test_rows.size(); ++pos) {
    test_by_class[static_cast<int>(labels[result.test_rows[pos]])].push_back(pos);
  }
  const int per_class = spec.subset_size / kNumClasses;
  for (int c = 0; c < kNumClasses; ++c) {
    if (test_by_class[c].size() < static_cast<std::size_t>(per_class)) {
      throw std::invalid_argument(std::string("split: test set class ") +
                                  to_string(static_cast<ClassLabel>(c)) +
                                  " too small for balanced subsets");
    }
  }
  for (int s = 0; s < spec.test_subsets; ++s) {
    std::vector<std::size_t> subset;
    subset.reserve(static_cast<std::size_t>(spec.subset_size));
    for (int c = 0; c < kNumClasses; ++c) {
      std::vector<std::size_t> rows = test_by_class[c];
      Rng rng(derive_seed(spec.seed, 2 + static_cast<std::uint64_t>(s),
                          static_cast<std::uint64_t>(c)));
      shuffle_indices(rows, rng);
      subset.insert(subset.end(), rows.begin(), rows.begin() + per_class);
    }
    std::sort(subset.begin(), subset.end());
    result.subsets.push_back(std::move(subset));
  }
  return result;
}

namespace detail {

EvalReport evaluate_predictions(std::span<const ClassLabel> learn_labels,
                                std::span<const ClassLabel> learn_pred,
                                std::span<const ClassLabel> test_labels,
                                std::span<const ClassLabel> test_pred,
                                const std::vector<std::vector<std::size_t>>& subsets) {
  EvalReport report;
  std::int64_t correct = 0;
  for (std::size_t i = 0; i < learn_labels.size(); ++i) {
    if (learn_labels[i] == learn_pred[i]) ++correct;
  }
  report.train_accuracy =
      learn_labels.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(learn_labels.size());

  correct = 0;
  for (std::size_t i = 0; i < test_labels.size(); ++i) {
    ++report.confusion[static_cast<int>(test_labels[i])][static_cast<int>(test_pred[i])];
    if (test_labels[i] == test_pred[i]) ++correct;
  }
  report.test_full_accuracy =
      test_labels.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(test_labels.size());
  for (int c = 0; c < kNumClasses; ++c) {
    std::int64_t row_total = 0;
    for (int d = 0; d < kNumClasses; ++d) row_total += report.confusion[c][d];
    report.per_class_error[c] =
        row_total == 0
            ? 0.0
            : 1.0 - static_cast<double>(report.confusion[c][c]) / static_cast<double>(row_total);
  }

  report.subset_accuracies.reserve(subsets.size());
  for (const auto& subset : subsets) {
    std::int64_t sub_correct = 0;
    for (std::size_t pos : subset) {
      if (test_labels[pos] == test_pred[pos]) ++sub_correct;
    }
    report.subset_accuracies.push_back(subset.empty() ? 0.0
                                                      : static_cast<double>(sub_correct) /
                                                            static_cast<double>(subset.size()));
  }
  const auto& accs = report.subset_accuracies;
  if (!accs.empty()) {
    const double mean = std::accumulate(accs.begin(), accs.end(), 0.0) /
                        static_cast<double>(accs.size());
    report.test_mean_accuracy = mean;
    if (accs.size() > 1) {
      double ss = 0.0;
      for (double a : accs) ss += (a - mean) * (a - mean);
      report.test_accuracy_sd = std::sqrt(ss / static_cast<double>(accs.size() - 1));
    }
  }
  return report;
}

}  // namespace detail

SweepResult forward_sweep(const IndicatorMatrix& learn, const IndicatorMatrix& test,
                          const std::vector<std::vector<std::size_t>>& subsets,
                          const RankingResult& ranking, int max_count, ClassifierKind kind,
                          const SweepParams& params) {
  if (max_count < 1 || static_cast<std::size_t>(max_count) > ranking.size()) {
    throw std::invalid_argument("forward_sweep: max_count out of range");
  }
  SweepResult sweep;
  sweep.classifier = kind;
  sweep.records.resize(static_cast<std::size_t>(max_count));

  parallel_for(static_cast<std::size_t>(max_count), params.jobs, [&](std::size_t idx) {
    const int m = static_cast<int>(idx) + 1;
    const std::span<const std::string> ids(ranking.ordered_ids.data(), static_cast<std::size_t>(m));
    const IndicatorMatrix learn_m = select_columns(learn, ids);
    const IndicatorMatrix test_m = select_columns(test, ids);

    EvalReport report;
    if (kind == ClassifierKind::naive_bayes) {
      const NaiveBayesModel model = nb_train(learn_m);
      report = evaluate(model, learn_m, test_m, subsets);
    } else {
      ForestParams forest_params;
      forest_params.n_trees = params.n_trees;
      forest_params.seed = derive_seed(params.seed, static_cast<std::uint64_t>(m));
      const ForestModel model = rf_train(learn_m, forest_params);
      report = evaluate(model, learn_m, test_m, subsets);
      report.oob_accuracy = model.oob_accuracy;
    }

    SweepRecord& record = sweep.records[idx];
    record.n_indicators = m;
    record.train_acc = report.train_accuracy;
    record.test_mean = report.test_mean_accuracy;
    record.test_sd = report.test_accuracy_sd;
    record.test_full = report.test_full_accuracy;
    record.oob = report.oob_accuracy;
    record.per_class_error = report.per_class_error;
    record.subset_accs = report.subset_accuracies;
  });
  return sweep;
}

int select_optimal(const SweepResult& sweep, int max_allowed) {
  if (sweep.records.empty()) throw std::invalid_argument("select_optimal: empty sweep");
  if (max_allowed < 1 || static_cast<std::size_t>(max_allowed) > sweep.records.size()) {
    throw std::invalid_argument("select_optimal: max_allowed out of range");
  }
  int best_m = 1;
  double best = -1.0;
  for (int m = 1; m <= max_allowed; ++m) {
    const SweepRecord& record = sweep.records[static_cast<std::size_t>(m - 1)];
    const double value = sweep.classifier == ClassifierKind::naive_bayes
                             ? record.train_acc
                             : record.oob.value_or(0.0);
    if (value > best) {
      best = value;
      best_m = m;
    }
  }
  return best_m;
}

ConditionalProbabilityTable conditional_probability_report(const NaiveBayesModel& model,
                                                           std::span<const std::string> ids) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t j = 0; j < model.indicator_ids.size(); ++j) {
    index.emplace(model.indicator_ids[j], j);
  }
  ConditionalProbabilityTable table;
  for (const auto& id : ids) {
    const auto it = index.find(id);
    if (it == index.end()) {
      throw std::invalid_argument("conditional_probability_report: unknown indicator id: " + id);
    }
    table.ids.push_back(id);
    table.rates.push_back(model.theta[it->second]);
  }
  return table;
}

void write_split_json(const std::filesystem::path& path, const SplitResult& split_result,
                      const IndicatorMatrix& matrix) {
  nlohmann::json doc;
  auto ids_of = [&](const std::vector<std::size_t>& rows) {
    std::vector<std::int64_t> ids;
    ids.reserve(rows.size());
    for (std::size_t r : rows) ids.push_back(matrix.signal_ids[r]);
    return ids;
  };
  doc["learn"] = ids_of(split_result.learn_rows);
  doc["test"] = ids_of(split_result.test_rows);
  nlohmann::json subsets = nlohmann::json::array();
  for (const auto& subset : split_result.subsets) {
    std::vector<std::int64_t> ids;
    ids.reserve(subset.size());
    for (std::size_t pos : subset) {
      ids.push_back(matrix.signal_ids[split_result.test_rows[pos]]);
    }
    subsets.push_back(std::move(ids));
  }
  doc["subsets"] = std::move(subsets);
  write_file_atomic(path, doc.dump() + "\n");
}

SplitResult read_split_json(const std::filesystem::path& path, const IndicatorMatrix& matrix) {
  nlohmann::json doc = nlohmann::json::parse(read_file(path), nullptr, false);
  if (doc.is_discarded()) throw InputError(path.string() + ": invalid JSON");
  std::unordered_map<std::int64_t, std::size_t> row_of;
  for (std::size_t r = 0; r < matrix.rows(); ++r) row_of.emplace(matrix.signal_ids[r], r);
  auto rows_of = [&](const nlohmann::json& ids) {
    std::vector<std::size_t> rows;
    rows.reserve(ids.size());
    for (const auto& id : ids) {
      const auto it = row_of.find(id.get<std::int64_t>());
      if (it == row_of.end()) {
        throw InputError(path.string() + ": signal id " + id.dump() + " not present in matrix");
      }
      rows.push_back(it->second);
    }
    return rows;
  };
  try {
    SplitResult result;
    result.learn_rows = rows_of(doc.at("learn"));
    result.test_rows = rows_of(doc.at("test"));
    std::unordered_map<std::int64_t, std::size_t> test_pos;
    for (std::size_t pos = 0; pos < result.test_rows.size(); ++pos) {
      test_pos.emplace(matrix.signal_ids[result.test_rows[pos]], pos);
    }
    for (const auto& subset_ids : doc.at("subsets")) {
      std::vector<std::size_t> subset;
      for (const auto& id : subset_ids) {
        const auto it = test_pos.find(id.get<std::int64_t>());
        if (it == test_pos.end()) {
          throw InputError(path.string() + ": subset id " + id.dump() + " not in test set");
        }
        subset.push_back(it->second);
      }
      result.subsets.push_back(std::move(subset));
    }
    return result;
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_report_json(const std::filesystem::path& path, const EvalReport& report) {
  nlohmann::json doc;
  doc["train_accuracy"] = report.train_accuracy;
  doc["test_mean_accuracy"] = report.test_mean_accuracy;
  doc["test_accuracy_sd"] = report.test_accuracy_sd;
  doc["test_full_accuracy"] = report.test_full_accuracy;
  if (report.oob_accuracy) doc["oob_accuracy"] = *report.oob_accuracy;
  doc["confusion"] = report.confusion;
  doc["per_class_error"] = report.per_class_error;
  write_file_atomic(path, doc.dump(2) + "\n");
}

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& sweep) {
  const std::size_t n_subsets =
      sweep.records.empty() ? 0 : sweep.records.front().subset_accs.size();
  std::string out = "classifier,m,train_acc,oob,test_mean,test_sd,test_full";
  for (int c = 0; c < kNumClasses; ++c) {
    out += ",err_";
    out += to_string(static_cast<ClassLabel>(c));
  }
  for (std::size_t s = 0; s < n_subsets; ++s) out += ",subset" + std::to_string(s + 1);
  out += '\n';
  for (const SweepRecord& record : sweep.records) {
    out += to_string(sweep.classifier);
    out += ',';
    out += std::to_string(record.n_indicators);
    out += ',';
    out += format_double(record.train_acc);
    out += ',';
    out += record.oob ? format_double(*record.oob) : std::string("");
    out += ',';
    out += format_double(record.test_mean);
    out += ',';
    out += format_double(record.test_sd);
    out += ',';
    out += format_double(record.test_full);
    for (int c = 0; c < kNumClasses; ++c) {
      out += ',';
      out += format_double(record.per_class_error[c]);
    }
    for (double a : record.subset_accs) {
      out += ',';
      out += format_double(a);
    }
    out += '\n';
  }
  write_file_atomic(path, out);
}

SweepResult read_sweep_csv(const std::filesystem::path& path) {
  const std::string data = read_file(path);
  SweepResult sweep;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  std::size_t n_subsets = 0;
  while (pos < data.size()) {
    const std::size_t end = data.find('\n', pos);
    const std::size_t stop = end == std::string::npos ? data.size() : end;
    const std::string line = data.substr(pos, stop - pos);
    pos = stop + 1;
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (start <= line.size()) {
      const std::size_t comma = line.find(',', start);
      const std::size_t fstop = comma == std::string::npos ? line.size() : comma;
      fields.push_back(line.substr(start, fstop - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (line_no == 1) {
      if (fields.size() < 11 || fields[0] != "classifier") {
        throw InputError(path.string() + ": unexpected sweep header");
      }
      n_subsets = fields.size() - 11;
      continue;
    }
    const std::string where = path.string() + ": line " + std::to_string(line_no);
    if (fields.size() != 11 + n_subsets) throw InputError(where + ": wrong field count");
    try {
      sweep.classifier = classifier_from_string(fields[0]);
      SweepRecord record;
      record.n_indicators = std::stoi(fields[1]);
      record.train_acc = std::stod(fields[2]);
      if (!fields[3].empty()) record.oob = std::stod(fields[3]);
      record.test_mean = std::stod(fields[4]);
      record.test_sd = std::stod(fields[5]);
      record.test_full = std::stod(fields[6]);
      for (int c = 0; c < kNumClasses; ++c) {
        record.per_class_error[c] = std::stod(fields[7 + static_cast<std::size_t>(c)]);
      }
      for (std::size_t s = 0; s < n_subsets; ++s) {
        record.subset_accs.push_back(std::stod(fields[11 + s]));
      }
      sweep.records.push_back(std::move(record));
    } catch (const std::exception& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  if (sweep.records.empty()) throw InputError(path.string() + ": empty sweep file");
  return sweep;
}

void write_sweep_points_csv(const std::filesystem::path& path, const SweepResult& sweep) {
  std::string out = "m,subset,accuracy\n";
  for (const SweepRecord& record : sweep.records) {
    for (std::size_t s = 0; s < record.subset_accs.size(); ++s) {
      out += std::to_string(record.n_indicators);
      out += ',';
      out += std::to_string(s + 1);
      out += ',';
      out += format_double(record.subset_accs[s]);
      out += '\n';
    }
  }
  write_file_atomic(path, out);
}

void write_probability_table_csv(const std::filesystem::path& path,
                                 const ConditionalProbabilityTable& table) {
  std::string out = "rank,indicator_id,p_none,p_variance,p_mean,p_trend\n";
  for (std::size_t i = 0; i < table.ids.size(); ++i) {
    out += std::to_string(i + 1);
    out += ',';
    out += table.ids[i];
    for (int c = 0; c < kNumClasses; ++c) {
      out += ',';
      out += format_double(table.rates[i][c]);
    }
    out += '\n';
  }
  write_file_atomic(path, out);
}

}  // namespace indagg
