#include "indagg/matrix.hpp"

#include <charconv>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "indagg/io_util.hpp"
#include "indagg/parallel.hpp"
#include "indagg/sim.hpp"

namespace indagg {

IndicatorMatrix featurize(std::span<const Signal> signals, const IndicatorGrid& grid, int jobs,
                          GridDiagnostics* diagnostics,
                          const std::function<void(std::size_t)>& progress) {
  IndicatorMatrix matrix;
  matrix.columns = grid.ids();
  matrix.signal_ids.resize(signals.size());
  matrix.labels.resize(signals.size());
  matrix.bits.resize(signals.size() * grid.size());

  std::mutex mutex;  // guards diagnostics + progress
  std::size_t done = 0;
  parallel_for(signals.size(), jobs, [&](std::size_t i) {
    const Signal& signal = signals[i];
    GridDiagnostics local;
    const std::vector<std::uint8_t> bits =
        evaluate_grid(signal, grid, diagnostics != nullptr ? &local : nullptr);
    matrix.signal_ids[i] = signal.id;
    matrix.labels[i] = signal.label;
    std::copy(bits.begin(), bits.end(), matrix.bits.begin() + static_cast<std::ptrdiff_t>(i * grid.size()));
    if (diagnostics != nullptr || progress) {
      std::lock_guard<std::mutex> lock(mutex);
      if (diagnostics != nullptr) {
        diagnostics->scan_errors += local.scan_errors;
        for (auto& m : local.messages) {
          if (diagnostics->messages.size() < 20) diagnostics->messages.push_back(std::move(m));
        }
      }
      if (progress) progress(++done);
    }
  });
  return matrix;
}

IndicatorMatrix select_columns(const IndicatorMatrix& matrix,
                               std::span<const std::string> column_ids) {
  std::unordered_map<std::string, std::size_t> index;
  index.reserve(matrix.cols());
  for (std::size_t c = 0; c < matrix.cols(); ++c) index.emplace(matrix.columns[c], c);

  std::vector<std::size_t> picks;
  picks.reserve(column_ids.size());
  for (const auto& id : column_ids) {
    const auto it = index.find(id);
    if (it == index.end()) throw InputError("unknown indicator id: " + id);
    picks.push_back(it->second);
  }

  IndicatorMatrix out;
  out.signal_ids = matrix.signal_ids;
  out.labels = matrix.labels;
  out.columns.assign(column_ids.begin(), column_ids.end());
  out.bits.resize(matrix.rows() * picks.size());
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    const auto row = matrix.row(r);
    for (std::size_t c = 0; c < picks.size(); ++c) {
      out.bits[r * picks.size() + c] = row[picks[c]];
    }
  }
  return out;
}

IndicatorMatrix select_rows(const IndicatorMatrix& matrix,
                            std::span<const std::size_t> row_indices) {
  IndicatorMatrix out;
  out.columns = matrix.columns;
  out.signal_ids.reserve(row_indices.size());
  out.labels.reserve(row_indices.size());
  out.bits.reserve(row_indices.size() * matrix.cols());
  for (std::size_t r : row_indices) {
    if (r >= matrix.rows()) throw std::out_of_range("row index out of range");
    out.signal_ids.push_back(matrix.signal_ids[r]);
    out.labels.push_back(matrix.labels[r]);
    const auto row = matrix.row(r);
    out.bits.insert(out.bits.end(), row.begin(), row.end());
  }
  return out;
}

void write_matrix_csv(const std::filesystem::path& path, const IndicatorMatrix& matrix) {
  std::string out;
  out.reserve(matrix.rows() * (matrix.cols() * 2 + 24) + matrix.cols() * 24);
  out += "signal_id,label";
  for (const auto& id : matrix.columns) {
    out += ',';
    out += id;
  }
  out += '\n';
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    out += std::to_string(matrix.signal_ids[r]);
    out += ',';
    out += std::to_string(static_cast<int>(matrix.labels[r]));
    const auto row = matrix.row(r);
    for (std::size_t c = 0; c < matrix.cols(); ++c) {
      out += ',';
      out += row[c] ? '1' : '0';
    }
    out += '\n';
  }
  write_file_atomic(path, out);
}

IndicatorMatrix read_matrix_csv(const std::filesystem::path& path) {
  const std::string data = read_file(path);
  IndicatorMatrix matrix;
  std::size_t pos = 0;
  std::size_t line_no = 0;

  auto next_line = [&](std::string_view& line) {
    if (pos >= data.size()) return false;
    const std::size_t end = data.find('\n', pos);
    const std::size_t stop = end == std::string::npos ? data.size() : end;
    line = std::string_view(data).substr(pos, stop - pos);
    pos = stop + 1;
    ++line_no;
    return true;
  };

  std::string_view header;
  if (!next_line(header)) throw InputError(path.string() + ": empty matrix file");
  {
    std::size_t field_start = 0;
    int field_idx = 0;
    while (field_start <= header.size()) {
      const std::size_t comma = header.find(',', field_start);
      const std::size_t stop = comma == std::string_view::npos ? header.size() : comma;
      const std::string_view field = header.substr(field_start, stop - field_start);
      if (field_idx == 0) {
        if (field != "signal_id")
          throw InputError(path.string() + ": line 1: header must start with signal_id,label");
      } else if (field_idx == 1) {
        if (field != "label")
          throw InputError(path.string() + ": line 1: header must start with signal_id,label");
      } else {
        matrix.columns.emplace_back(field);
      }
      ++field_idx;
      if (comma == std::string_view::npos) break;
      field_start = comma + 1;
    }
  }
  if (matrix.columns.empty()) throw InputError(path.string() + ": line 1: no indicator columns");

  std::string_view line;
  while (next_line(line)) {
    if (line.empty()) continue;
    const std::string where = path.string() + ": line " + std::to_string(line_no);
    std::size_t field_start = 0;
    std::size_t field_idx = 0;
    const std::size_t expected = matrix.cols() + 2;
    while (field_start <= line.size()) {
      const std::size_t comma = line.find(',', field_start);
      const std::size_t stop = comma == std::string_view::npos ? line.size() : comma;
      const std::string_view field = line.substr(field_start, stop - field_start);
      if (field_idx >= expected) throw InputError(where + ": too many fields");
      if (field_idx == 0) {
        std::int64_t id = 0;
        const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), id);
        if (ec != std::errc{} || ptr != field.data() + field.size())
          throw InputError(where + ": bad signal_id '" + std::string(field) + "'");
        matrix.signal_ids.push_back(id);
      } else if (field_idx == 1) {
        int code = -1;
        const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), code);
        if (ec != std::errc{} || ptr != field.data() + field.size() || code < 0 ||
            code >= kNumClasses)
          throw InputError(where + ": bad label '" + std::string(field) + "'");
        matrix.labels.push_back(static_cast<ClassLabel>(code));
      } else {
        if (field != "0" && field != "1")
          throw InputError(where + ": bit must be 0 or 1, got '" + std::string(field) + "'");
        matrix.bits.push_back(field[0] == '1' ? 1 : 0);
      }
      ++field_idx;
      if (comma == std::string_view::npos) break;
      field_start = comma + 1;
    }
    if (field_idx != expected) {
      throw InputError(where + ": expected " + std::to_string(expected) + " fields, got " +
                       std::to_string(field_idx));
    }
  }
  return matrix;
}

}  // namespace indagg
