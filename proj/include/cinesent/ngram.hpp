#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cinesent/textprep.hpp"

namespace cinesent {

/// Counts of word n-grams. Keys are the n tokens joined by single spaces;
/// tokens never contain whitespace, so the join is lossless.
class NgramTable {
 public:
  explicit NgramTable(int n);

  int n() const noexcept { return n_; }
  std::uint64_t total() const noexcept { return total_; }
  std::size_t size() const noexcept { return counts_.size(); }
  const std::map<std::string, std::uint64_t>& counts() const noexcept { return counts_; }
  std::uint64_t count(const std::string& key) const;

  void add(const std::string& key, std::uint64_t count = 1);
  /// Sums `other` into this table; both must have the same n.
  void merge(const NgramTable& other);

 private:
  int n_;
  std::uint64_t total_ = 0;
  std::map<std::string, std::uint64_t> counts_;
};

using RankedNgram = std::pair<std::string, std::uint64_t>;

/// Sliding-window counts over one token sequence (one cue). n must be 2 or 3.
NgramTable extract_ngrams(const TokenSequence& tokens, int n);

/// Adds the windows of every cue separately; n-grams never span cues.
void accumulate_ngrams(NgramTable& table, std::span<const TokenSequence> cues);

/// Descending by count, ties broken by the joined key.
std::vector<RankedNgram> top_k(const NgramTable& table, std::size_t k);

struct YearRange {
  int first = 0;
  int last = 0;  // inclusive
  std::string label() const;
  bool contains(int year) const noexcept { return year >= first && year <= last; }
};

/// The four twenty-year panels 1950-1969 ... 2010-2024.
std::vector<YearRange> default_eras();

struct FilmTokens {
  std::string film_id;
  int year = 0;
  std::vector<TokenSequence> cues;
};

/// Merged table over every film whose year falls in `era`. Throws
/// EmptySelectionError when no film qualifies.
NgramTable era_table(std::span<const FilmTokens> films, const YearRange& era, int n);
std::vector<RankedNgram> era_top_k(std::span<const FilmTokens> films, const YearRange& era, int n, std::size_t k);

/// `rank,ngram,count`
std::string ngram_csv(std::span<const RankedNgram> ranked);

}  // namespace cinesent
