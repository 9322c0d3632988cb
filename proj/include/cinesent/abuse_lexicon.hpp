#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>

#include "cinesent/corpus.hpp"
#include "cinesent/textprep.hpp"

namespace cinesent {

/// Lowercase unigram and bigram look-up list with an optional category per
/// term (profanity, insult, ...).
class AbuseLexicon {
 public:
  AbuseLexicon(std::string name, std::string version);

  const std::string& name() const noexcept { return name_; }
  const std::string& version() const noexcept { return version_; }
  std::size_t size() const noexcept { return unigrams_.size() + bigrams_.size(); }
  bool empty() const noexcept { return size() == 0; }

  /// `term` is one token or two space-separated tokens.
  void add(std::string_view term, std::string_view category = {});
  bool has_unigram(const std::string& token) const { return unigrams_.contains(token); }
  bool has_bigram(const std::string& first, const std::string& second) const;
  std::string_view category(const std::string& term) const;

 private:
  std::string name_;
  std::string version_;
  std::set<std::string> unigrams_;
  std::set<std::string> bigrams_;
  std::map<std::string, std::string> categories_;
};

/// First non-comment line must be `version=<string>`; then one term per line,
/// optionally followed by a tab and a category.
AbuseLexicon parse_lexicon(std::string_view text, std::string name);
AbuseLexicon load_lexicon(const std::filesystem::path& path);

struct AbuseCount {
  std::uint64_t abusive = 0;
  std::uint64_t total = 0;

  AbuseCount& operator+=(const AbuseCount& o) {
    abusive += o.abusive;
    total += o.total;
    return *this;
  }
  friend bool operator==(const AbuseCount&, const AbuseCount&) = default;
};

/// Counts lexicon hits among `tokens`. Matches never overlap: a token used by
/// a bigram hit is not counted again as a unigram. The count is the largest
/// number of non-overlapping hits, so extending the lexicon never lowers it.
/// Throws std::invalid_argument for an empty lexicon.
AbuseCount count_abusive(const TokenSequence& tokens, const AbuseLexicon& lexicon);

struct AbusiveTime {
  std::int64_t abusive_ms = 0;
  std::int64_t dialogue_ms = 0;  // latest cue end time
};

using CuePredicate = std::function<bool(std::size_t cue_index, const SubtitleCue&)>;

/// Summed duration of the cues the predicate flags.
AbusiveTime abusive_time(const SubtitleDocument& doc, const CuePredicate& flagged);

}  // namespace cinesent
