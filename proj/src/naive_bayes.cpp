#include "indagg/naive_bayes.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "indagg/io_util.hpp"
#include "indagg/sim.hpp"

namespace indagg {

Prediction NaiveBayesModel::predict(std::span<const std::uint8_t> bits) const {
  if (bits.size() != theta.size()) {
    throw std::invalid_argument("nb_predict: expected " + std::to_string(theta.size()) +
                                " bits, got " + std::to_string(bits.size()));
  }
  std::array<double, kNumClasses> log_post{};
  for (int c = 0; c < kNumClasses; ++c) log_post[c] = std::log(class_priors[c]);
  for (std::size_t j = 0; j < theta.size(); ++j) {
    for (int c = 0; c < kNumClasses; ++c) {
      log_post[c] += bits[j] ? std::log(theta[j][c]) : std::log1p(-theta[j][c]);
    }
  }
  double max_log = log_post[0];
  for (int c = 1; c < kNumClasses; ++c) max_log = std::max(max_log, log_post[c]);
  double norm = 0.0;
  Prediction prediction;
  for (int c = 0; c < kNumClasses; ++c) {
    prediction.per_class_score[c] = std::exp(log_post[c] - max_log);
    norm += prediction.per_class_score[c];
  }
  int best = 0;
  for (int c = 0; c < kNumClasses; ++c) {
    prediction.per_class_score[c] /= norm;
    if (prediction.per_class_score[c] > prediction.per_class_score[best]) best = c;
  }
  prediction.label = static_cast<ClassLabel>(best);
  return prediction;
}

NaiveBayesModel nb_train(const IndicatorMatrix& matrix) {
  if (matrix.rows() == 0) throw std::invalid_argument("nb_train: empty matrix");
  std::array<std::int64_t, kNumClasses> class_counts{};
  for (ClassLabel label : matrix.labels) ++class_counts[static_cast<int>(label)];
  for (int c = 0; c < kNumClasses; ++c) {
    if (class_counts[c] == 0) {
      throw std::invalid_argument(std::string("nb_train: no training example for class ") +
                                  to_string(static_cast<ClassLabel>(c)));
    }
  }

  NaiveBayesModel model;
  model.indicator_ids = matrix.columns;
  model.theta.assign(matrix.cols(), {});

  std::vector<std::array<std::int64_t, kNumClasses>> ones(matrix.cols());
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    const int c = static_cast<int>(matrix.labels[r]);
    const auto row = matrix.row(r);
    for (std::size_t j = 0; j < matrix.cols(); ++j) {
      ones[j][c] += row[j];
    }
  }
  for (int c = 0; c < kNumClasses; ++c) {
    model.class_priors[c] =
        static_cast<double>(class_counts[c]) / static_cast<double>(matrix.rows());
    for (std::size_t j = 0; j < matrix.cols(); ++j) {
      model.theta[j][c] = (static_cast<double>(ones[j][c]) + 1.0) /
                          (static_cast<double>(class_counts[c]) + 2.0);
    }
  }
  return model;
}

void write_nb_model(const std::filesystem::path& path, const NaiveBayesModel& model) {
  nlohmann::json doc;
  doc["kind"] = "naive_bayes";
  doc["class_priors"] = model.class_priors;
  doc["indicator_ids"] = model.indicator_ids;
  nlohmann::json theta = nlohmann::json::array();
  for (const auto& row : model.theta) theta.push_back(row);
  doc["theta"] = std::move(theta);
  write_file_atomic(path, doc.dump(2) + "\n");
}

NaiveBayesModel read_nb_model(const std::filesystem::path& path) {
  nlohmann::json doc = nlohmann::json::parse(read_file(path), nullptr, false);
  if (doc.is_discarded()) throw InputError(path.string() + ": invalid JSON");
  try {
    if (doc.at("kind").get<std::string>() != "naive_bayes") {
      throw InputError(path.string() + ": not a naive_bayes model file");
    }
    NaiveBayesModel model;
    model.class_priors = doc.at("class_priors").get<std::array<double, kNumClasses>>();
    model.indicator_ids = doc.at("indicator_ids").get<std::vector<std::string>>();
    for (const auto& row : doc.at("theta")) {
      model.theta.push_back(row.get<std::array<double, kNumClasses>>());
    }
    if (model.theta.size() != model.indicator_ids.size()) {
      throw InputError(path.string() + ": theta/indicator_ids size mismatch");
    }
    return model;
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

}  // namespace indagg
