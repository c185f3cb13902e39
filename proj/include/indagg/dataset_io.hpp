#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "indagg/signal.hpp"

namespace indagg {

/// Dataset files are JSON Lines: one object per signal with fields
///   id            integer
///   label         integer class code 0..3
///   change_point  1-based index, present iff label != 0
///   shift_param   sigma / mu / slope, present iff label != 0
///   values        array of doubles
/// Doubles are serialized with shortest round-trip precision, so a
/// write/read cycle reproduces every value bit for bit.
void write_dataset_jsonl(const std::filesystem::path& path, std::span<const Signal> signals);

/// Validates invariants per record and reports the 1-based line number of the
/// first offending record.
std::vector<Signal> read_dataset_jsonl(const std::filesystem::path& path);

}  // namespace indagg
