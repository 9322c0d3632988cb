#include "cinesent/longitudinal.hpp"

#include <stdexcept>

#include "cinesent/errors.hpp"
#include "cinesent/util.hpp"

namespace cinesent {

CooccurrenceMatrix cooccurrence(std::span<const LabelFlags> items) {
  CooccurrenceMatrix m{};
  for (const auto& flags : items) {
    for (std::size_t a = 0; a < kSentimentLabelCount; ++a) {
      if (!flags[a]) continue;
      for (std::size_t b = 0; b < kSentimentLabelCount; ++b) m[a][b] += flags[b];
    }
  }
  return m;
}

std::string cooccurrence_csv(const CooccurrenceMatrix& m) {
  std::string out = "label";
  for (auto name : kSentimentLabelNames) out += "," + std::string(name);
  out += '\n';
  for (std::size_t a = 0; a < kSentimentLabelCount; ++a) {
    out += kSentimentLabelNames[a];
    for (std::size_t b = 0; b < kSentimentLabelCount; ++b) out += "," + std::to_string(m[a][b]);
    out += '\n';
  }
  return out;
}

std::map<std::string, EmotionCounts> emotion_counts(std::span<const LabeledFilm> films, Grouping grouping) {
  std::map<std::string, EmotionCounts> out;
  for (const auto& f : films) {
    std::string key = "all";
    if (grouping == Grouping::Genre) {
      if (!f.genre) throw UnknownGroupError("film '" + f.film_id + "' has no genre");
      key = std::string(to_string(*f.genre));
    }
    auto& counts = out[key];
    for (std::size_t l = 0; l < kSentimentLabelCount; ++l) counts[l] += f.labels[l];
  }
  return out;
}

std::string emotion_counts_csv(const std::map<std::string, EmotionCounts>& counts) {
  std::string out = "group,label,count\n";
  for (const auto& [group, c] : counts) {
    for (std::size_t l = 0; l < kSentimentLabelCount; ++l) {
      const std::vector<std::string> row = {group, std::string(kSentimentLabelNames[l]), std::to_string(c[l])};
      out += csv_row(row);
    }
  }
  return out;
}

TrendSeries::TrendSeries(std::vector<std::string> key_columns, std::string value_column, Statistic statistic)
    : key_columns_(std::move(key_columns)), value_column_(std::move(value_column)), statistic_(statistic) {}

void TrendSeries::add(const Key& key, double value, std::size_t n) {
  if (key.size() != key_columns_.size()) throw std::invalid_argument("trend key has wrong arity");
  if (n == 0) throw std::invalid_argument("trend group size must be positive");
  auto& cell = cells_[key];
  if (statistic_ == Statistic::Value) {
    cell = {value, n};
  } else {
    cell.sum += value;
    cell.n += n;
  }
}

void TrendSeries::merge(const TrendSeries& other) {
  if (statistic_ == Statistic::Value || other.statistic_ != statistic_ || other.key_columns_ != key_columns_) {
    throw std::invalid_argument("trend series are not mergeable");
  }
  for (const auto& [key, cell] : other.cells_) {
    auto& mine = cells_[key];
    mine.sum += cell.sum;
    mine.n += cell.n;
  }
}

double TrendSeries::value(const Key& key) const {
  const auto& cell = cells_.at(key);
  return statistic_ == Statistic::Mean ? cell.sum / static_cast<double>(cell.n) : cell.sum;
}

std::size_t TrendSeries::group_size(const Key& key) const { return cells_.at(key).n; }

std::string TrendSeries::to_csv() const {
  std::vector<std::string> header = key_columns_;
  header.push_back(value_column_);
  header.emplace_back("n");
  std::string out = csv_row(header);
  for (const auto& [key, cell] : cells_) {
    std::vector<std::string> row = key;
    row.push_back(format_real(value(key)));
    row.push_back(std::to_string(cell.n));
    out += csv_row(row);
  }
  return out;
}

std::string decade_label(int year) { return std::to_string(decade_of(year)) + "s"; }

TrendSeries abuse_trend(std::span<const FilmRecord> films) {
  TrendSeries s({"year", "award_class"}, "abusive_words", Statistic::Sum);
  for (const auto& f : films) {
    s.add({std::to_string(f.year), std::string(to_string(f.award_class))}, static_cast<double>(f.words.abusive));
  }
  return s;
}

TrendSeries abuse_probability_yearly(std::span<const FilmRecord> films) {
  TrendSeries s({"year", "award_class"}, "mean_abuse_probability", Statistic::Mean);
  for (const auto& f : films) {
    s.add({std::to_string(f.year), std::string(to_string(f.award_class))}, f.mean_abuse_probability);
  }
  return s;
}

TrendSeries trailing_moving_average(const TrendSeries& yearly, int window_years) {
  if (window_years < 1) throw std::invalid_argument("moving-average window must be >= 1");
  if (yearly.key_columns() != std::vector<std::string>{"year", "award_class"}) {
    throw std::invalid_argument("moving average expects a (year, award_class) series");
  }
  // award class -> year -> (yearly mean, films)
  std::map<std::string, std::map<int, std::pair<double, std::size_t>>> by_class;
  for (const auto& [key, cell] : yearly.cells()) {
    by_class[key[1]][std::stoi(key[0])] = {yearly.value(key), cell.n};
  }
  TrendSeries out({"year", "award_class"}, yearly.value_column() + "_ma" + std::to_string(window_years),
                  Statistic::Value);
  for (const auto& [cls, years] : by_class) {
    for (auto it = years.begin(); it != years.end(); ++it) {
      const int year = it->first;
      double sum = 0.0;
      std::size_t points = 0;
      std::size_t films = 0;
      for (auto jt = years.lower_bound(year - window_years + 1); jt != std::next(it); ++jt) {
        sum += jt->second.first;
        films += jt->second.second;
        ++points;
      }
      out.add({std::to_string(year), cls}, sum / static_cast<double>(points), films);
    }
  }
  return out;
}

TrendSeries abuse_probability_by_year(std::span<const FilmRecord> films, int window_years) {
  return trailing_moving_average(abuse_probability_yearly(films), window_years);
}

NormalizedAbuse normalized_abuse_by_genre(std::span<const FilmRecord> films) {
  NormalizedAbuse out{TrendSeries({"genre", "decade"}, "normalized_abuse", Statistic::Mean), {}};
  for (const auto& f : films) {
    if (f.words.total == 0) {
      out.warnings.push_back("film '" + f.film_id + "' has no tokens; excluded from normalised abuse");
      continue;
    }
    out.series.add({std::string(to_string(f.genre)), decade_label(f.year)},
                   static_cast<double>(f.words.abusive) / static_cast<double>(f.words.total));
  }
  return out;
}

namespace {
std::string paired_csv(const TrendSeries& a, const TrendSeries& b) {
  std::vector<std::string> header = a.key_columns();
  header.push_back(a.value_column());
  header.push_back(b.value_column());
  header.emplace_back("n");
  std::string out = csv_row(header);
  for (const auto& [key, cell] : a.cells()) {
    std::vector<std::string> row = key;
    row.push_back(format_real(a.value(key)));
    row.push_back(format_real(b.cells().contains(key) ? b.value(key) : 0.0));
    row.push_back(std::to_string(cell.n));
    out += csv_row(row);
  }
  return out;
}
}  // namespace

std::string WordsPerDecade::to_csv() const { return paired_csv(total, abusive); }

WordsPerDecade words_per_decade(std::span<const FilmRecord> films) {
  WordsPerDecade out{TrendSeries({"decade"}, "total_words", Statistic::Sum),
                     TrendSeries({"decade"}, "abusive_words", Statistic::Sum)};
  for (const auto& f : films) {
    out.total.add({decade_label(f.year)}, static_cast<double>(f.words.total));
    out.abusive.add({decade_label(f.year)}, static_cast<double>(f.words.abusive));
  }
  return out;
}

std::string TimePerDecade::to_csv() const { return paired_csv(dialogue_minutes, abusive_minutes); }

TimePerDecade abusive_time_by_decade(std::span<const FilmRecord> films) {
  TimePerDecade out{TrendSeries({"decade"}, "mean_dialogue_minutes", Statistic::Mean),
                    TrendSeries({"decade"}, "mean_abusive_minutes", Statistic::Mean)};
  for (const auto& f : films) {
    out.dialogue_minutes.add({decade_label(f.year)}, static_cast<double>(f.time.dialogue_ms) / 60'000.0);
    out.abusive_minutes.add({decade_label(f.year)}, static_cast<double>(f.time.abusive_ms) / 60'000.0);
  }
  return out;
}

}  // namespace cinesent
