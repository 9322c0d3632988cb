#include <gtest/gtest.h>

#include <cmath>

#include "cinesent/errors.hpp"
#include "cinesent/timeline.hpp"
#include "generators.hpp"

using namespace cinesent;

namespace {

SubtitleCue cue(int index, std::int64_t start_ms, std::int64_t end_ms) {
  return {index, start_ms, end_ms, {"line"}};
}

}  // namespace

TEST(Timeline, TwoWindows) {
  SubtitleDocument doc;
  doc.cues = {cue(1, 2 * 60'000, 2 * 60'000 + 1500), cue(2, 7 * 60'000, 7 * 60'000 + 1500)};
  const std::vector<double> pol = {0.5, -1.0};
  const std::vector<double> ab = {0.1, 0.8};
  const auto t = film_timeline(doc, pol, ab, 5);
  ASSERT_EQ(t.windows.size(), 2u);
  EXPECT_EQ(t.windows[0].start_minute, 0);
  EXPECT_EQ(t.windows[1].start_minute, 5);
  EXPECT_EQ(t.windows[0].cue_count, 1u);
  EXPECT_EQ(t.windows[1].cue_count, 1u);
  EXPECT_EQ(*t.windows[0].mean_polarity, 0.5);
  EXPECT_EQ(t.windows[1].abuse_count, 1u);
  EXPECT_EQ(t.windows[0].abuse_count, 0u);
  EXPECT_EQ(t.to_csv(),
            "window_start_min,cue_count,mean_polarity,abuse_count,mean_abuse_probability\n"
            "0,1,0.500000,0,0.100000\n"
            "5,1,-1.000000,1,0.800000\n");
}

TEST(Timeline, SingleWindowRestEmpty) {
  SubtitleDocument doc;
  doc.cues = {cue(1, 1000, 2000), cue(2, 3000, 4000), cue(3, 20 * 60'000, 20 * 60'000 + 10)};
  const std::vector<double> pol = {1.0, NAN, 0.0};
  const std::vector<double> ab = {0.5, 0.2, 0.0};
  const auto t = film_timeline(doc, pol, ab, 5);
  ASSERT_EQ(t.windows.size(), 5u);
  EXPECT_EQ(t.windows[0].cue_count, 2u);
  EXPECT_EQ(*t.windows[0].mean_polarity, 1.0);  // NaN cue excluded from the mean
  EXPECT_NEAR(*t.windows[0].mean_abuse_probability, 0.35, 1e-15);
  EXPECT_EQ(t.windows[0].abuse_count, 1u);  // p = 0.5 counts
  for (std::size_t w = 1; w < 4; ++w) {
    EXPECT_EQ(t.windows[w].cue_count, 0u);
    EXPECT_FALSE(t.windows[w].mean_polarity.has_value());
    EXPECT_FALSE(t.windows[w].mean_abuse_probability.has_value());
  }
  EXPECT_EQ(t.windows[4].cue_count, 1u);
  EXPECT_NE(t.to_csv().find("\n5,0,,0,\n"), std::string::npos);
}

TEST(Timeline, Errors) {
  SubtitleDocument empty;
  EXPECT_THROW(film_timeline(empty, {}, {}, 5), NoScoredContentError);
  SubtitleDocument doc;
  doc.cues = {cue(1, 0, 10)};
  const std::vector<double> one = {0.0};
  const std::vector<double> two = {0.0, 0.0};
  EXPECT_THROW(film_timeline(doc, two, one, 5), DimensionMismatchError);
  EXPECT_THROW(film_timeline(doc, one, one, 0), std::invalid_argument);
}

TEST(Timeline, CountsPreservedAndWindowsCoverRuntime) {
  gen::Rng rng(31);
  for (int i = 0; i < 200; ++i) {
    const auto doc = gen::srt_document(rng);
    if (doc.cues.empty()) continue;
    std::vector<double> pol(doc.cues.size()), ab(doc.cues.size());
    for (std::size_t k = 0; k < pol.size(); ++k) {
      pol[k] = -4 + 7 * gen::unit(rng);
      ab[k] = gen::unit(rng);
    }
    const int minutes = static_cast<int>(gen::uniform(rng, 1, 30));
    const auto t = film_timeline(doc, pol, ab, minutes);
    std::size_t total = 0;
    for (const auto& w : t.windows) total += w.cue_count;
    ASSERT_EQ(total, doc.cues.size());
    ASSERT_GE(static_cast<std::int64_t>(t.windows.size()) * minutes * 60'000, doc.cues.back().end_ms);
  }
}

TEST(AbusiveLevel, Tertiles) {
  EXPECT_EQ(abusive_level(0.0), AbusiveLevel::Low);
  EXPECT_EQ(abusive_level(0.5), AbusiveLevel::Medium);
  EXPECT_EQ(abusive_level(0.9), AbusiveLevel::High);
  EXPECT_EQ(abusive_level(1.0 / 3.0), AbusiveLevel::Medium);
  EXPECT_EQ(abusive_level(2.0 / 3.0), AbusiveLevel::High);
  EXPECT_EQ(abusive_level(1.0), AbusiveLevel::High);
  EXPECT_THROW(abusive_level(1.1), std::invalid_argument);
}

TEST(CueReport, Schema) {
  const std::vector<CueReportRow> rows = {
      {"00:27:32,684", "00:27:34,777", "Yeah, that's right, fancy.", Polarity::Positive, AbusiveLevel::Low}};
  EXPECT_EQ(cue_report_csv(rows),
            "Start Time,End Time,Text,Sentiment,Abusive Level\n"
            "\"00:27:32,684\",\"00:27:34,777\",\"Yeah, that's right, fancy.\",Positive,Low\n");
}
