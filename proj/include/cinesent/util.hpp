#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cinesent {

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);
std::string to_lower_ascii(std::string_view s);
std::string join(std::span<const std::string> parts, std::string_view sep);

// Whole-file read; throws IoError.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

// Fixed-precision rendering used by every report writer so outputs stay
// byte-stable across runs.
std::string format_real(double value, int decimals = 6);

// Round-trippable rendering for persisted model parameters.
std::string format_exact(double value);

// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view data);

// One CSV record per call; handles RFC 4180 quoting including embedded
// newlines. Returns false at end of input.
class CsvReader {
 public:
  explicit CsvReader(std::string_view text);
  bool next(std::vector<std::string>& fields);
  std::size_t line() const noexcept { return line_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 0;
};

std::string csv_escape(std::string_view field);
std::string csv_row(std::span<const std::string> fields);

// Seeded Fisher-Yates. Uses raw engine output rather than a standard
// distribution so that permutations are identical across standard libraries.
template <typename T>
void seeded_shuffle(std::vector<T>& items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace cinesent
