#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace indagg {

/// Signal classes. The integer codes are fixed contract: they order the rows
/// and columns of every confusion matrix and the class axis of model files.
enum class ClassLabel : int {
  none = 0,
  variance = 1,  // variance shift after the change point
  mean = 2,      // mean shift
  trend = 3,     // linear trend starting at the change point
};

inline constexpr int kNumClasses = 4;

const char* to_string(ClassLabel label);

/// Throws std::invalid_argument for codes outside 0..3.
ClassLabel label_from_int(int code);

/// One univariate series. `change_point` is the 1-based index k of the last
/// pre-change observation (values[1..k] pre, values[k+1..n] post, in 1-based
/// terms); it and `shift_param` (sigma, mu or slope) are present exactly when
/// label != none.
struct Signal {
  std::int64_t id = 0;
  std::vector<double> values;
  ClassLabel label = ClassLabel::none;
  std::optional<int> change_point;
  std::optional<double> shift_param;

  int n() const { return static_cast<int>(values.size()); }
};

}  // namespace indagg
