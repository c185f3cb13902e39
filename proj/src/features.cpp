#include "indagg/features.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "indagg/io_util.hpp"
#include "indagg/parallel.hpp"

namespace indagg {

double mutual_information(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y,
                          int y_card) {
  if (x.size() != y.size() || x.empty()) {
    throw std::invalid_argument("mutual_information: columns must have equal nonzero length");
  }
  if (y_card < 1 || y_card > 4) {
    throw std::invalid_argument("mutual_information: y must take at most 4 values");
  }
  std::array<std::array<double, 4>, 2> joint{};
  for (std::size_t i = 0; i < x.size(); ++i) {
    joint[x[i]][y[i]] += 1.0;
  }
  const double n = static_cast<double>(x.size());
  std::array<double, 2> px{};
  std::array<double, 4> py{};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < y_card; ++b) {
      px[a] += joint[a][b];
      py[b] += joint[a][b];
    }
  }
  double info = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < y_card; ++b) {
      const double pab = joint[a][b];
      if (pab > 0.0) {
        info += pab / n * std::log(pab * n / (px[a] * py[b]));
      }
    }
  }
  return std::max(info, 0.0);
}

RankingResult mrmr_rank(const IndicatorMatrix& matrix, std::size_t count, int jobs) {
  const std::size_t p = matrix.cols();
  const std::size_t n = matrix.rows();
  if (n == 0) throw std::invalid_argument("mrmr_rank: empty matrix");
  if (count > p) throw std::invalid_argument("mrmr_rank: count exceeds column count");

  // column-major copy for cache-friendly MI passes
  std::vector<std::uint8_t> col_bits(p * n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = matrix.row(r);
    for (std::size_t c = 0; c < p; ++c) col_bits[c * n + r] = row[c];
  }
  auto column = [&](std::size_t c) {
    return std::span<const std::uint8_t>(col_bits.data() + c * n, n);
  };
  std::vector<std::uint8_t> label_codes(n);
  for (std::size_t r = 0; r < n; ++r) label_codes[r] = static_cast<std::uint8_t>(matrix.labels[r]);

  std::vector<double> relevance(p);
  parallel_for(p, jobs, [&](std::size_t c) {
    relevance[c] = mutual_information(column(c), label_codes, kNumClasses);
  });

  RankingResult result;
  std::vector<bool> selected(p, false);
  std::vector<double> redundancy_sum(p, 0.0);

  for (std::size_t step = 0; step < count; ++step) {
    const double inv_s = step == 0 ? 0.0 : 1.0 / static_cast<double>(step);
    std::size_t best = p;
    double best_score = 0.0;
    for (std::size_t c = 0; c < p; ++c) {
      if (selected[c]) continue;
      const double score = relevance[c] - redundancy_sum[c] * inv_s;
      if (best == p || score > best_score) {
        best = c;
        best_score = score;
      }
    }
    selected[best] = true;
    result.ordered_ids.push_back(matrix.columns[best]);
    result.column_index.push_back(best);
    result.relevance.push_back(relevance[best]);
    result.redundancy.push_back(redundancy_sum[best] * inv_s);
    result.score.push_back(best_score);

    if (step + 1 < count) {
      std::vector<std::size_t> remaining;
      remaining.reserve(p);
      for (std::size_t c = 0; c < p; ++c) {
        if (!selected[c]) remaining.push_back(c);
      }
      parallel_for(remaining.size(), jobs, [&](std::size_t i) {
        const std::size_t c = remaining[i];
        redundancy_sum[c] += mutual_information(column(c), column(best), 2);
      });
    }
  }
  return result;
}

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_ranking_csv(const std::filesystem::path& path, const RankingResult& ranking) {
  std::string out = "rank,indicator_id,relevance,redundancy,score\n";
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    out += std::to_string(i + 1);
    out += ',';
    out += ranking.ordered_ids[i];
    out += ',';
    out += format_double(ranking.relevance[i]);
    out += ',';
    out += format_double(ranking.redundancy[i]);
    out += ',';
    out += format_double(ranking.score[i]);
    out += '\n';
  }
  write_file_atomic(path, out);
}

RankingResult read_ranking_csv(const std::filesystem::path& path) {
  const std::string data = read_file(path);
  RankingResult ranking;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (pos < data.size()) {
    const std::size_t end = data.find('\n', pos);
    const std::size_t stop = end == std::string::npos ? data.size() : end;
    const std::string line = data.substr(pos, stop - pos);
    pos = stop + 1;
    ++line_no;
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "rank,indicator_id,relevance,redundancy,score") {
        throw InputError(path.string() + ": line 1: unexpected ranking header");
      }
      header_seen = true;
      continue;
    }
    const std::string where = path.string() + ": line " + std::to_string(line_no);
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (start <= line.size()) {
      const std::size_t comma = line.find(',', start);
      const std::size_t fstop = comma == std::string::npos ? line.size() : comma;
      fields.push_back(line.substr(start, fstop - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 5) throw InputError(where + ": expected 5 fields");
    try {
      ranking.ordered_ids.push_back(fields[1]);
      ranking.column_index.push_back(ranking.ordered_ids.size() - 1);
      ranking.relevance.push_back(std::stod(fields[2]));
      ranking.redundancy.push_back(std::stod(fields[3]));
      ranking.score.push_back(std::stod(fields[4]));
    } catch (const std::exception&) {
      throw InputError(where + ": malformed numeric field");
    }
  }
  if (!header_seen) throw InputError(path.string() + ": empty ranking file");
  return ranking;
}

}  // namespace indagg
