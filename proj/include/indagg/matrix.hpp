#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "indagg/indicators.hpp"
#include "indagg/signal.hpp"

namespace indagg {

/// Binary indicator matrix: one row per signal, one column per indicator id,
/// bits stored row-major. Column order is the grid order that produced it.
struct IndicatorMatrix {
  std::vector<std::int64_t> signal_ids;
  std::vector<ClassLabel> labels;
  std::vector<std::string> columns;
  std::vector<std::uint8_t> bits;

  std::size_t rows() const { return signal_ids.size(); }
  std::size_t cols() const { return columns.size(); }
  std::uint8_t at(std::size_t row, std::size_t col) const { return bits[row * cols() + col]; }
  std::span<const std::uint8_t> row(std::size_t r) const {
    return {bits.data() + r * cols(), cols()};
  }
};

/// Evaluates the grid on every signal; parallel across signals.
/// `progress`, when set, is called with the number of finished signals.
IndicatorMatrix featurize(std::span<const Signal> signals, const IndicatorGrid& grid, int jobs = 1,
                          GridDiagnostics* diagnostics = nullptr,
                          const std::function<void(std::size_t)>& progress = {});

/// New matrix keeping the named columns, in the given order. Unknown id => error.
IndicatorMatrix select_columns(const IndicatorMatrix& matrix,
                               std::span<const std::string> column_ids);

/// New matrix keeping the given rows, in the given order.
IndicatorMatrix select_rows(const IndicatorMatrix& matrix, std::span<const std::size_t> row_indices);

/// CSV with header "signal_id,label,<indicator ids...>"; one row per signal,
/// bits as 0/1. Reading validates shape and bit values and reports the
/// offending 1-based line on failure.
void write_matrix_csv(const std::filesystem::path& path, const IndicatorMatrix& matrix);
IndicatorMatrix read_matrix_csv(const std::filesystem::path& path);

}  // namespace indagg
