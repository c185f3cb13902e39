#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "indagg/matrix.hpp"

namespace indagg {

/// Forward-selection order with the per-step bookkeeping: relevance is
/// I(feature; class), redundancy is the mean mutual information against the
/// features already selected (0 for the first pick), score = relevance -
/// redundancy at selection time.
struct RankingResult {
  std::vector<std::string> ordered_ids;
  std::vector<std::size_t> column_index;  // index into the source matrix
  std::vector<double> relevance;
  std::vector<double> redundancy;
  std::vector<double> score;

  std::size_t size() const { return ordered_ids.size(); }
};

/// Plug-in mutual information in nats between a binary column and a discrete
/// column with values in [0, y_card), y_card <= 4. Empty cells contribute 0.
double mutual_information(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y,
                          int y_card);

/// Greedy mRMR forward ranking with the difference objective: each step picks
/// the unselected column maximizing I(f; class) - mean_{s in S} I(f; s); the
/// first pick maximizes relevance alone. Ties break toward the lower column
/// index. Pairwise feature MIs accumulate incrementally (each is computed
/// once, when its partner enters the selected set). Candidate scoring may run
/// on `jobs` threads; the selected sequence does not depend on it.
RankingResult mrmr_rank(const IndicatorMatrix& matrix, std::size_t count, int jobs = 1);

/// CSV: rank,indicator_id,relevance,redundancy,score (rank is 1-based).
void write_ranking_csv(const std::filesystem::path& path, const RankingResult& ranking);
RankingResult read_ranking_csv(const std::filesystem::path& path);

}  // namespace indagg
