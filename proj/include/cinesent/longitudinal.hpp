#pragma once

#include <array>
#include <bitset>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cinesent/abuse_lexicon.hpp"
#include "cinesent/corpus.hpp"
#include "cinesent/sentiment.hpp"

namespace cinesent {

using LabelFlags = std::bitset<kSentimentLabelCount>;
using CooccurrenceMatrix = std::array<std::array<std::uint64_t, kSentimentLabelCount>, kSentimentLabelCount>;

/// Entry (a, b) counts items with both labels set; the diagonal counts items
/// with the label set.
CooccurrenceMatrix cooccurrence(std::span<const LabelFlags> items);
std::string cooccurrence_csv(const CooccurrenceMatrix& m);

enum class Grouping { Corpus, Genre };

struct LabeledFilm {
  std::string film_id;
  std::optional<Genre> genre;
  LabelFlags labels;
};

using EmotionCounts = std::array<std::uint64_t, kSentimentLabelCount>;

/// Positive-label counts per group ("all" for Corpus, genre names for Genre).
/// Throws UnknownGroupError for a film without a genre under Genre grouping.
std::map<std::string, EmotionCounts> emotion_counts(std::span<const LabeledFilm> films, Grouping grouping);
std::string emotion_counts_csv(const std::map<std::string, EmotionCounts>& counts);

/// How a series cell turns into its reported value. Sum and Mean cells merge
/// by adding (sum, n); Value cells hold a derived figure and do not merge.
enum class Statistic { Sum, Mean, Value };

struct TrendCell {
  double sum = 0.0;
  std::size_t n = 0;
};

class TrendSeries {
 public:
  using Key = std::vector<std::string>;

  TrendSeries(std::vector<std::string> key_columns, std::string value_column, Statistic statistic);

  const std::vector<std::string>& key_columns() const noexcept { return key_columns_; }
  const std::string& value_column() const noexcept { return value_column_; }
  Statistic statistic() const noexcept { return statistic_; }
  const std::map<Key, TrendCell>& cells() const noexcept { return cells_; }
  std::size_t size() const noexcept { return cells_.size(); }

  /// Adds one observation (Sum/Mean) or sets the cell (Value).
  void add(const Key& key, double value, std::size_t n = 1);
  void merge(const TrendSeries& other);

  double value(const Key& key) const;
  std::size_t group_size(const Key& key) const;

  /// `key columns..., value, n`
  std::string to_csv() const;

 private:
  std::vector<std::string> key_columns_;
  std::string value_column_;
  Statistic statistic_;
  std::map<Key, TrendCell> cells_;
};

/// Per-film figures the corpus aggregations work from.
struct FilmRecord {
  std::string film_id;
  int year = 0;
  AwardClass award_class = AwardClass::Oscar;
  Genre genre = Genre::Action;
  AbuseCount words;
  double mean_abuse_probability = 0.0;
  AbusiveTime time;
};

std::string decade_label(int year);

/// Abusive word totals per (year, award class).
TrendSeries abuse_trend(std::span<const FilmRecord> films);

/// Mean of per-film abuse probability per (year, award class).
TrendSeries abuse_probability_yearly(std::span<const FilmRecord> films);

/// Yearly means smoothed with a trailing window over the years that have
/// data: the value at year y averages the yearly means within
/// [y - window + 1, y] for the same award class.
TrendSeries abuse_probability_by_year(std::span<const FilmRecord> films, int window_years = 10);
TrendSeries trailing_moving_average(const TrendSeries& yearly, int window_years);

struct NormalizedAbuse {
  TrendSeries series;
  std::vector<std::string> warnings;
};

/// Mean per-film abusive/total word ratio per (genre, decade). Films without
/// tokens are skipped with a warning.
NormalizedAbuse normalized_abuse_by_genre(std::span<const FilmRecord> films);

struct WordsPerDecade {
  TrendSeries total;
  TrendSeries abusive;
  std::string to_csv() const;
};

WordsPerDecade words_per_decade(std::span<const FilmRecord> films);

struct TimePerDecade {
  TrendSeries dialogue_minutes;
  TrendSeries abusive_minutes;
  std::string to_csv() const;
};

/// Mean film dialogue time and mean abusive time per decade, in minutes.
TimePerDecade abusive_time_by_decade(std::span<const FilmRecord> films);

}  // namespace cinesent
