#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "indagg/matrix.hpp"

namespace indagg {

struct Prediction {
  ClassLabel label = ClassLabel::none;
  std::array<double, kNumClasses> per_class_score{};  // sums to 1
};

/// Bernoulli Naive Bayes over binary indicators. theta[j][c] is the smoothed
/// estimate P(bit_j = 1 | class c) = (count + 1) / (n_c + 2), so every rate
/// stays inside (0, 1).
struct NaiveBayesModel {
  std::array<double, kNumClasses> class_priors{};
  std::vector<std::string> indicator_ids;
  std::vector<std::array<double, kNumClasses>> theta;

  /// Posterior class scores via log-sum-exp; ties resolve toward the lower
  /// class code. Throws on dimension mismatch.
  Prediction predict(std::span<const std::uint8_t> bits) const;
};

/// Priors are empirical class frequencies. Throws (naming the class) when a
/// class has no training example.
NaiveBayesModel nb_train(const IndicatorMatrix& matrix);

void write_nb_model(const std::filesystem::path& path, const NaiveBayesModel& model);
NaiveBayesModel read_nb_model(const std::filesystem::path& path);

}  // namespace indagg
