#include "cinesent/timeline.hpp"

#include <cmath>
#include <stdexcept>

#include "cinesent/errors.hpp"
#include "cinesent/util.hpp"

namespace cinesent {

TimelineSeries film_timeline(const SubtitleDocument& doc, std::span<const double> cue_polarity,
                             std::span<const double> cue_abuse, int window_minutes) {
  if (window_minutes < 1) throw std::invalid_argument("window length must be at least one minute");
  if (doc.cues.empty()) throw NoScoredContentError("film '" + doc.film_id + "' has no cues");
  if (cue_polarity.size() != doc.cues.size() || cue_abuse.size() != doc.cues.size()) {
    throw DimensionMismatchError("per-cue scores do not match the cue count");
  }
  const std::int64_t window_ms = static_cast<std::int64_t>(window_minutes) * 60'000;
  std::int64_t length = 0;
  for (const auto& c : doc.cues) length = std::max(length, c.end_ms);
  const auto count = static_cast<std::size_t>((length + window_ms - 1) / window_ms);

  TimelineSeries series;
  series.window_minutes = window_minutes;
  series.windows.resize(count);
  std::vector<double> polarity_sum(count, 0.0), abuse_sum(count, 0.0);
  std::vector<std::size_t> polarity_n(count, 0);
  for (std::size_t w = 0; w < count; ++w) series.windows[w].start_minute = static_cast<int>(w) * window_minutes;

  for (std::size_t i = 0; i < doc.cues.size(); ++i) {
    const auto w = static_cast<std::size_t>(doc.cues[i].start_ms / window_ms);
    auto& win = series.windows[w];
    ++win.cue_count;
    if (!std::isnan(cue_polarity[i])) {
      polarity_sum[w] += cue_polarity[i];
      ++polarity_n[w];
    }
    abuse_sum[w] += cue_abuse[i];
    if (cue_abuse[i] >= 0.5) ++win.abuse_count;
  }
  for (std::size_t w = 0; w < count; ++w) {
    auto& win = series.windows[w];
    if (polarity_n[w] > 0) win.mean_polarity = polarity_sum[w] / static_cast<double>(polarity_n[w]);
    if (win.cue_count > 0) win.mean_abuse_probability = abuse_sum[w] / static_cast<double>(win.cue_count);
  }
  return series;
}

std::string TimelineSeries::to_csv() const {
  std::string out = "window_start_min,cue_count,mean_polarity,abuse_count,mean_abuse_probability\n";
  for (const auto& w : windows) {
    out += std::to_string(w.start_minute) + "," + std::to_string(w.cue_count) + ",";
    if (w.mean_polarity) out += format_real(*w.mean_polarity);
    out += "," + std::to_string(w.abuse_count) + ",";
    if (w.mean_abuse_probability) out += format_real(*w.mean_abuse_probability);
    out += '\n';
  }
  return out;
}

std::string_view to_string(AbusiveLevel level) {
  switch (level) {
    case AbusiveLevel::Low: return "Low";
    case AbusiveLevel::Medium: return "Medium";
    case AbusiveLevel::High: return "High";
  }
  return "?";
}

AbusiveLevel abusive_level(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("abuse probability outside [0, 1]");
  if (p < 1.0 / 3.0) return AbusiveLevel::Low;
  if (p < 2.0 / 3.0) return AbusiveLevel::Medium;
  return AbusiveLevel::High;
}

std::string cue_report_csv(std::span<const CueReportRow> rows) {
  std::string out = "Start Time,End Time,Text,Sentiment,Abusive Level\n";
  for (const auto& r : rows) {
    const std::vector<std::string> row = {r.start_time, r.end_time, r.text, std::string(to_string(r.sentiment)),
                                          std::string(to_string(r.abusive_level))};
    out += csv_row(row);
  }
  return out;
}

}  // namespace cinesent
