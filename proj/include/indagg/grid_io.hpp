#pragma once

#include <filesystem>

#include "indagg/indicators.hpp"

namespace indagg {

/// Grid config files are JSON:
///   {"specs": [{"test": "u"|"ks"|"f",
///               "window": 30|50|"adaptive",
///               "level": number in (0,1),
///               "family": "rate"|"longest_run"|"k_of_n",
///               "beta": number (rate / longest_run),
///               "k": int, "n_windows": int (k_of_n),
///               "overlap": "full"|5|10,
///               "smoothed": bool}, ...]}
/// Spec order in the file is column order. The default grid serializes to
/// this schema and loads back identically.
void write_grid_json(const std::filesystem::path& path, const IndicatorGrid& grid);
IndicatorGrid read_grid_json(const std::filesystem::path& path);

}  // namespace indagg
