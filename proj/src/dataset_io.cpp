#include "indagg/dataset_io.hpp"

#include <cmath>
#include <string>

#include <json.hpp>

#include "indagg/io_util.hpp"
#include "indagg/sim.hpp"

namespace indagg {

void write_dataset_jsonl(const std::filesystem::path& path, std::span<const Signal> signals) {
  std::string out;
  out.reserve(signals.size() * 1024);
  for (const Signal& signal : signals) {
    nlohmann::json record;
    record["id"] = signal.id;
    record["label"] = static_cast<int>(signal.label);
    if (signal.label != ClassLabel::none) {
      record["change_point"] = *signal.change_point;
      record["shift_param"] = *signal.shift_param;
    }
    record["values"] = signal.values;
    out += record.dump();
    out += '\n';
  }
  write_file_atomic(path, out);
}

std::vector<Signal> read_dataset_jsonl(const std::filesystem::path& path) {
  const std::string data = read_file(path);
  std::vector<Signal> signals;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < data.size()) {
    const std::size_t end = data.find('\n', pos);
    const std::size_t stop = end == std::string::npos ? data.size() : end;
    const std::string_view line = std::string_view(data).substr(pos, stop - pos);
    pos = stop + 1;
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path.string() + ": line " + std::to_string(line_no);
    nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
    if (record.is_discarded()) throw InputError(where + ": invalid JSON");
    try {
      Signal signal;
      signal.id = record.at("id").get<std::int64_t>();
      signal.label = label_from_int(record.at("label").get<int>());
      signal.values = record.at("values").get<std::vector<double>>();
      if (signal.label != ClassLabel::none) {
        signal.change_point = record.at("change_point").get<int>();
        signal.shift_param = record.at("shift_param").get<double>();
      } else if (record.contains("change_point") || record.contains("shift_param")) {
        throw InputError(where + ": normal signal must not carry change-point fields");
      }
      for (double v : signal.values) {
        if (!std::isfinite(v)) throw InputError(where + ": non-finite value");
      }
      if (signal.change_point) {
        const int n = signal.n();
        const int k = *signal.change_point;
        if (k < change_point_min(n) || k > change_point_max(n)) {
          throw InputError(where + ": change_point " + std::to_string(k) +
                           " outside [ceil(2n/10), floor(8n/10)] for n=" + std::to_string(n));
        }
      }
      signals.push_back(std::move(signal));
    } catch (const InputError&) {
      throw;
    } catch (const std::exception& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  return signals;
}

}  // namespace indagg
