#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cinesent/corpus.hpp"
#include "cinesent/sentiment.hpp"

namespace cinesent {

struct TimelineWindow {
  int start_minute = 0;
  std::size_t cue_count = 0;
  std::optional<double> mean_polarity;          // absent for empty windows
  std::size_t abuse_count = 0;                  // cues with probability >= 0.5
  std::optional<double> mean_abuse_probability; // absent for empty windows
};

struct TimelineSeries {
  int window_minutes = 5;
  std::vector<TimelineWindow> windows;

  /// `window_start_min,cue_count,mean_polarity,abuse_count,mean_abuse_probability`
  std::string to_csv() const;
};

inline constexpr int kDefaultWindowMinutes = 5;

/// Buckets cues by start time into fixed windows spanning the film's running
/// time (latest cue end). `cue_polarity` and `cue_abuse` are indexed like
/// `doc.cues`; a NaN polarity marks a cue without a score.
///
/// Throws NoScoredContentError for a document without cues.
TimelineSeries film_timeline(const SubtitleDocument& doc, std::span<const double> cue_polarity,
                             std::span<const double> cue_abuse, int window_minutes = kDefaultWindowMinutes);

enum class AbusiveLevel { Low, Medium, High };
std::string_view to_string(AbusiveLevel level);

/// Tertiles of the abuse probability: [0, 1/3) Low, [1/3, 2/3) Medium,
/// [2/3, 1] High.
AbusiveLevel abusive_level(double probability);

struct CueReportRow {
  std::string start_time;
  std::string end_time;
  std::string text;
  Polarity sentiment = Polarity::Neutral;
  AbusiveLevel abusive_level = AbusiveLevel::Low;
};

/// `Start Time,End Time,Text,Sentiment,Abusive Level`
std::string cue_report_csv(std::span<const CueReportRow> rows);

}  // namespace cinesent
