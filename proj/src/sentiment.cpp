#include "cinesent/sentiment.hpp"

#include <cmath>
#include <unordered_map>

#include "cinesent/errors.hpp"
#include "cinesent/util.hpp"

namespace cinesent {
namespace {

std::string normalise_name(std::string_view name) {
  std::string out;
  for (char c : trim(name)) {
    if (c == ' ' || c == '-' || c == '_') {
      if (!out.empty() && out.back() != '_') out += '_';
    } else {
      out += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
    }
  }
  return out;
}

}  // namespace

std::optional<SentimentLabel> resolve_sentiment_label(std::string_view name) {
  static const std::unordered_map<std::string, SentimentLabel> aliases = {
      {"optimistic", SentimentLabel::Optimistic},     {"optimism", SentimentLabel::Optimistic},
      {"thankful", SentimentLabel::Thankful},         {"gratitude", SentimentLabel::Thankful},
      {"empathetic", SentimentLabel::Empathetic},     {"compassion", SentimentLabel::Empathetic},
      {"empathy", SentimentLabel::Empathetic},        {"pessimistic", SentimentLabel::Pessimistic},
      {"pessimism", SentimentLabel::Pessimistic},     {"anxious", SentimentLabel::Anxious},
      {"anxiety", SentimentLabel::Anxious},           {"sad", SentimentLabel::Sad},
      {"sadness", SentimentLabel::Sad},               {"annoyed", SentimentLabel::Annoyed},
      {"anger", SentimentLabel::Annoyed},             {"denial", SentimentLabel::Denial},
      {"official_report", SentimentLabel::OfficialReport}, {"official_reports", SentimentLabel::OfficialReport},
      {"joking", SentimentLabel::Joking},             {"jokes", SentimentLabel::Joking},
      {"joke", SentimentLabel::Joking},               {"humour", SentimentLabel::Joking},
      {"humor", SentimentLabel::Joking},
  };
  const auto it = aliases.find(normalise_name(name));
  if (it == aliases.end()) return std::nullopt;
  return it->second;
}

SentimentWeights::SentimentWeights(std::string profile, const LabelValues& weights)
    : profile_(std::move(profile)), weights_(weights) {
  for (std::size_t l = 0; l < kSentimentLabelCount; ++l) {
    const double w = weights_[l];
    if (!std::isfinite(w) || w < kMinSentimentWeight || w > kMaxSentimentWeight) {
      throw ConfigError("weight for " + std::string(kSentimentLabelNames[l]) + " outside [-4, 3]");
    }
  }
}

const SentimentWeights& SentimentWeights::defaults() {
  // optimistic thankful empathetic pessimistic anxious sad annoyed denial official_report joking
  static const SentimentWeights w("default-v1", {2.0, 3.0, 1.0, -3.0, -2.0, -3.0, -4.0, -1.0, 0.0, 1.0});
  return w;
}

SentimentWeights parse_weights(std::string_view text, std::string profile) {
  LabelValues values{};
  std::array<bool, kSentimentLabelCount> seen{};
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "weights line " + std::to_string(line_no);
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected label=value");
    const std::string key(trim(line.substr(0, eq)));
    const auto label = resolve_sentiment_label(key);
    if (!label) throw ConfigError(where + ": unknown label '" + key + "'");
    const auto idx = index_of(*label);
    if (seen[idx]) throw ConfigError(where + ": label '" + key + "' given twice");
    const std::string value(trim(line.substr(eq + 1)));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size()) throw ConfigError(where + ": malformed value '" + value + "'");
    if (v < kMinSentimentWeight || v > kMaxSentimentWeight) {
      throw ConfigError(where + ": weight " + value + " outside [-4, 3]");
    }
    values[idx] = v;
    seen[idx] = true;
  }
  for (std::size_t l = 0; l < kSentimentLabelCount; ++l) {
    if (!seen[l]) throw ConfigError("weights file is missing label '" + std::string(kSentimentLabelNames[l]) + "'");
  }
  return SentimentWeights(std::move(profile), values);
}

SentimentWeights load_weights(const std::filesystem::path& path) {
  return parse_weights(read_file(path), path.stem().string());
}

std::string_view to_string(Polarity p) {
  switch (p) {
    case Polarity::Negative: return "Negative";
    case Polarity::Neutral: return "Neutral";
    case Polarity::Positive: return "Positive";
  }
  return "?";
}

Polarity polarity_of(double score) {
  if (score > 0.0) return Polarity::Positive;
  if (score < 0.0) return Polarity::Negative;
  return Polarity::Neutral;
}

PolarityResult weighted_score(const LabelValues& values, const SentimentWeights& weights) {
  double s = 0.0;
  for (std::size_t l = 0; l < kSentimentLabelCount; ++l) {
    if (!(values[l] >= 0.0 && values[l] <= 1.0)) {
      throw std::invalid_argument("label value for " + std::string(kSentimentLabelNames[l]) + " outside [0, 1]");
    }
    s += weights.values()[l] * values[l];
  }
  return {s, polarity_of(s)};
}

double film_score(std::span<const LabelValues> cue_values, const SentimentWeights& weights) {
  if (cue_values.empty()) throw NoScoredContentError("film has no scored cues");
  double sum = 0.0;
  for (const auto& v : cue_values) sum += weighted_score(v, weights).score;
  return sum / static_cast<double>(cue_values.size());
}

GroupStats mean_and_stddev(std::span<const double> values) {
  GroupStats g;
  g.n = values.size();
  if (values.empty()) return g;
  double sum = 0.0;
  for (double v : values) sum += v;
  g.mean = sum / static_cast<double>(g.n);
  double sq = 0.0;
  for (double v : values) sq += (v - g.mean) * (v - g.mean);
  g.stddev = std::sqrt(sq / static_cast<double>(g.n));
  return g;
}

std::map<DecadeClassKey, GroupStats> decade_average(std::span<const ScoredFilm> films) {
  std::map<DecadeClassKey, std::vector<double>> groups;
  for (const auto& f : films) groups[{decade_of(f.year), f.award_class}].push_back(f.score);
  std::map<DecadeClassKey, GroupStats> out;
  for (const auto& [key, scores] : groups) out.emplace(key, mean_and_stddev(scores));
  return out;
}

}  // namespace cinesent
