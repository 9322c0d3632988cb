#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace cinesent {

/// Ordered lowercase word tokens. No token is empty or contains whitespace.
using TokenSequence = std::vector<std::string>;

/// Removes hashtags, URLs, emoji/pictographic symbols (including the musical
/// note markers subtitle files use for lyrics) and control characters, then
/// lowercases and collapses whitespace. Idempotent.
std::string clean_text(std::string_view raw);

/// Splits on anything that is not a letter or digit. An apostrophe between
/// two word characters stays inside the token (`don't`, `that's`).
TokenSequence tokenize(std::string_view clean);

/// Splits the enclitics 's 're 'll 've 'd 'm off their host word
/// (`let's` -> `let`, `s`). Used ahead of n-gram counting so that the
/// n-gram stopword profile can drop the fragment.
TokenSequence split_clitics(const TokenSequence& tokens);

class StopwordSet {
 public:
  StopwordSet() = default;
  StopwordSet(std::string name, std::initializer_list<std::string_view> words);
  StopwordSet(std::string name, const std::vector<std::string>& words);

  const std::string& name() const noexcept { return name_; }
  bool contains(std::string_view token) const { return words_.contains(std::string(token)); }
  std::size_t size() const noexcept { return words_.size(); }
  bool empty() const noexcept { return words_.empty(); }

  /// Function words only; keeps interjections and forms of address such as
  /// "yes", "sir", "oh", "go" so that colloquial n-grams survive.
  static const StopwordSet& ngram_profile();
  /// Larger list for classifier input; keeps negations.
  static const StopwordSet& classify_profile();

 private:
  std::string name_;
  std::unordered_set<std::string> words_;
};

/// One token per line, `#` starts a comment. Entries are lowercased.
StopwordSet load_stopwords(const std::filesystem::path& path, std::string name);
StopwordSet parse_stopwords(std::string_view text, std::string name);

TokenSequence remove_stopwords(const TokenSequence& tokens, const StopwordSet& profile);

}  // namespace cinesent
