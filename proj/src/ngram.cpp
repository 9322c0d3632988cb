#include "cinesent/ngram.hpp"

#include <algorithm>

#include "cinesent/errors.hpp"
#include "cinesent/util.hpp"

namespace cinesent {
namespace {

void check_order(int n) {
  if (n != 2 && n != 3) throw std::invalid_argument("n-gram order must be 2 or 3, got " + std::to_string(n));
}

void add_windows(NgramTable& table, const TokenSequence& tokens) {
  const auto n = static_cast<std::size_t>(table.n());
  if (tokens.size() < n) return;
  std::string key;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    key = tokens[i];
    for (std::size_t k = 1; k < n; ++k) {
      key += ' ';
      key += tokens[i + k];
    }
    table.add(key);
  }
}

}  // namespace

NgramTable::NgramTable(int n) : n_(n) { check_order(n); }

std::uint64_t NgramTable::count(const std::string& key) const {
  const auto it = counts_.find(key);
  return it == counts_.end() ? 0 : it->second;
}

void NgramTable::add(const std::string& key, std::uint64_t count) {
  if (count == 0) return;
  counts_[key] += count;
  total_ += count;
}

void NgramTable::merge(const NgramTable& other) {
  if (other.n_ != n_) throw std::invalid_argument("cannot merge n-gram tables of different order");
  for (const auto& [key, c] : other.counts_) add(key, c);
}

NgramTable extract_ngrams(const TokenSequence& tokens, int n) {
  NgramTable table(n);
  add_windows(table, tokens);
  return table;
}

void accumulate_ngrams(NgramTable& table, std::span<const TokenSequence> cues) {
  for (const auto& cue : cues) add_windows(table, cue);
}

std::vector<RankedNgram> top_k(const NgramTable& table, std::size_t k) {
  if (k == 0) throw std::invalid_argument("top_k requires k >= 1");
  std::vector<RankedNgram> ranked(table.counts().begin(), table.counts().end());
  const auto order = [](const RankedNgram& a, const RankedNgram& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  };
  const std::size_t keep = std::min(k, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep), ranked.end(), order);
  ranked.resize(keep);
  return ranked;
}

std::string YearRange::label() const { return std::to_string(first) + "-" + std::to_string(last); }

std::vector<YearRange> default_eras() { return {{1950, 1969}, {1970, 1989}, {1990, 2009}, {2010, 2024}}; }

NgramTable era_table(std::span<const FilmTokens> films, const YearRange& era, int n) {
  if (era.first > era.last) throw std::invalid_argument("empty era range " + era.label());
  NgramTable table(n);
  bool any = false;
  for (const auto& film : films) {
    if (!era.contains(film.year)) continue;
    any = true;
    accumulate_ngrams(table, film.cues);
  }
  if (!any) throw EmptySelectionError("no films in era " + era.label());
  return table;
}

std::vector<RankedNgram> era_top_k(std::span<const FilmTokens> films, const YearRange& era, int n,
                                   std::size_t k) {
  return top_k(era_table(films, era, n), k);
}

std::string ngram_csv(std::span<const RankedNgram> ranked) {
  std::string out = "rank,ngram,count\n";
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const std::vector<std::string> row = {std::to_string(i + 1), ranked[i].first, std::to_string(ranked[i].second)};
    out += csv_row(row);
  }
  return out;
}

}  // namespace cinesent
