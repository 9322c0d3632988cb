#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cinesent/corpus.hpp"

namespace cinesent {

inline constexpr std::size_t kSentimentLabelCount = 10;

// Index order is shared by every label vector in the system.
enum class SentimentLabel {
  Optimistic,
  Thankful,
  Empathetic,
  Pessimistic,
  Anxious,
  Sad,
  Annoyed,
  Denial,
  OfficialReport,
  Joking,
};

inline constexpr std::array<std::string_view, kSentimentLabelCount> kSentimentLabelNames = {
    "optimistic", "thankful", "empathetic", "pessimistic", "anxious",
    "sad",        "annoyed",  "denial",     "official_report", "joking"};

using LabelValues = std::array<double, kSentimentLabelCount>;

inline constexpr std::size_t index_of(SentimentLabel l) { return static_cast<std::size_t>(l); }

/// Canonical names plus the dataset and figure spellings ("gratitude",
/// "Official report", "Humour", ...). Case and separators are ignored.
std::optional<SentimentLabel> resolve_sentiment_label(std::string_view name);

inline constexpr double kMinSentimentWeight = -4.0;
inline constexpr double kMaxSentimentWeight = 3.0;

class SentimentWeights {
 public:
  /// Throws ConfigError if any weight lies outside [-4, 3].
  SentimentWeights(std::string profile, const LabelValues& weights);

  const std::string& profile() const noexcept { return profile_; }
  const LabelValues& values() const noexcept { return weights_; }
  double operator[](SentimentLabel l) const { return weights_[index_of(l)]; }

  /// Positive weights on optimistic, thankful, empathetic and joking;
  /// negative on pessimistic, anxious, sad, annoyed and denial;
  /// official_report neutral.
  static const SentimentWeights& defaults();

 private:
  std::string profile_;
  LabelValues weights_;
};

/// Ten `label=value` lines, `#` comments. Unknown or repeated labels, missing
/// labels and out-of-range values are rejected.
SentimentWeights parse_weights(std::string_view text, std::string profile);
SentimentWeights load_weights(const std::filesystem::path& path);

enum class Polarity { Negative, Neutral, Positive };
std::string_view to_string(Polarity p);

struct PolarityResult {
  double score = 0.0;
  Polarity sign = Polarity::Neutral;
};

Polarity polarity_of(double score);

/// Dot product of per-label values in [0, 1] with the weights.
PolarityResult weighted_score(const LabelValues& values, const SentimentWeights& weights);

/// Mean of per-cue weighted scores. Throws NoScoredContentError when empty.
double film_score(std::span<const LabelValues> cue_values, const SentimentWeights& weights);

struct GroupStats {
  double mean = 0.0;
  double stddev = 0.0;  // divisor N
  std::size_t n = 0;
};

GroupStats mean_and_stddev(std::span<const double> values);

inline constexpr int decade_of(int year) { return year / 10 * 10; }

struct ScoredFilm {
  int year = 0;
  AwardClass award_class = AwardClass::Oscar;
  double score = 0.0;
};

using DecadeClassKey = std::pair<int, AwardClass>;

/// Mean and population standard deviation of film scores per
/// (decade, award class).
std::map<DecadeClassKey, GroupStats> decade_average(std::span<const ScoredFilm> films);

}  // namespace cinesent
