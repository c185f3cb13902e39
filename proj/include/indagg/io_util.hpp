#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace indagg {

/// Raised for malformed or inconsistent input files; the CLI maps it to its
/// own exit code, distinct from usage errors and internal failures.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Writes content to a temporary file in the target directory and renames it
/// over `path`, so readers never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

/// FNV-1a 64-bit digest of a file's bytes, as 16 hex characters. Used by run
/// manifests to tie outputs to inputs; not a cryptographic hash.
std::string fnv1a64_file(const std::filesystem::path& path);

}  // namespace indagg
