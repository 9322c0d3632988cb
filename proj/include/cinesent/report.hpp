#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cinesent/abuse_lexicon.hpp"
#include "cinesent/corpus.hpp"
#include "cinesent/eval.hpp"
#include "cinesent/inference_client.hpp"
#include "cinesent/labels.hpp"
#include "cinesent/linear_model.hpp"
#include "cinesent/longitudinal.hpp"
#include "cinesent/sentiment.hpp"
#include "cinesent/textprep.hpp"
#include "cinesent/timeline.hpp"
#include "cinesent/vectorizer.hpp"

namespace cinesent {

enum class AbuseTimePredicate { LexiconHit, ClassifierPositive };

/// Flat `key=value` run configuration. Relative paths resolve against the
/// directory of the config file.
struct RunConfig {
  std::filesystem::path corpus_root;
  std::filesystem::path catalog;
  std::filesystem::path output_dir = "out";
  /// Where `train` writes and native inference reads models; defaults to
  /// `<output_dir>/models`.
  std::optional<std::filesystem::path> models_dir;
  std::optional<std::filesystem::path> ngram_stopwords;
  std::optional<std::filesystem::path> classify_stopwords;
  bool classify_remove_stopwords = false;
  std::optional<std::filesystem::path> lexicon;
  std::optional<std::filesystem::path> weights;
  std::optional<std::filesystem::path> sentiment_data;
  std::optional<std::filesystem::path> abuse_data;
  BackendSelection backend;
  std::uint64_t seed = kDefaultSeed;
  TrainConfig train;
  std::size_t max_features = 50'000;
  std::size_t ngram_top_k = 20;
  std::size_t jobs = 1;
  int window_minutes = kDefaultWindowMinutes;
  double threshold = 0.5;
  AbuseTimePredicate abuse_time = AbuseTimePredicate::LexiconHit;
  /// Score cues from thresholded 0/1 labels instead of probabilities.
  bool binary_sentiment_values = false;

  /// The key=value pairs as written, used for hashing.
  std::map<std::string, std::string> raw;

  std::string hash() const;
};

RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// `# config_hash=<h> lexicon=<name>@<version> weights=<profile> backend=<kind>`,
/// the first line of every output file.
std::string provenance_line(const RunConfig& config);

/// A rectangular table that renders identically as CSV and inside the JSON
/// report bundle.
struct ReportTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const;
  static ReportTable from_csv(std::string name, std::string_view csv);
};

// Training data

struct SentimentDataset {
  std::vector<std::string> texts;
  LabelMatrix labels;
  std::vector<std::string> warnings;
};

/// CSV with a text column (`text` or `tweet`) and one 0/1 column per
/// sentiment label under any recognised alias. Other columns are ignored.
SentimentDataset load_sentiment_dataset(const std::filesystem::path& path);

struct AbuseDataset {
  std::vector<std::string> texts;
  std::vector<std::uint8_t> labels;
};

/// CSV with `text` and `label` columns; label is 0/1 or a word such as
/// abusive/not.
AbuseDataset load_abuse_dataset(const std::filesystem::path& path);

/// clean -> tokenize -> optional stopword removal.
TokenSequence classifier_tokens(const std::string& text, const StopwordSet* stopwords);

enum class Task { Sentiment, Abuse };
std::string_view to_string(Task task);

struct TrainedBaseline {
  std::string name;  // "TF-IDF + LR", "TF-IDF + SVM"
  LinearModel model;
  std::optional<MultilabelMetrics> multilabel;
  std::optional<BinaryMetrics> binary;
};

struct TrainOutcome {
  Task task = Task::Sentiment;
  SplitAssignment split;
  Vocabulary vocabulary;
  std::vector<TrainedBaseline> baselines;
  std::filesystem::path report_path;
};

/// Split, fit TF-IDF on the training part, train logistic and hinge
/// baselines, evaluate on the test part, and write model, vocabulary and
/// metric files to the models directory.
TrainOutcome cmd_train(const RunConfig& config, Task task);

// Ingest

struct ManifestFilm {
  FilmCatalogEntry entry;
  std::filesystem::path subtitle_path;
  std::size_t cues = 0;
  std::size_t skipped_blocks = 0;
  std::vector<std::string> warnings;
};

struct CorpusManifest {
  std::vector<ManifestFilm> films;
  std::vector<std::string> missing_subtitles;
  std::vector<std::string> unparseable_subtitles;
  std::vector<std::string> orphan_subtitles;
  std::vector<std::string> catalog_warnings;
};

/// Parses `<corpus_root>/<film_id>.srt` for every catalog film. Catalog and
/// corpus mismatches are listed, not fatal.
CorpusManifest scan_corpus(const RunConfig& config);
std::string manifest_json(const CorpusManifest& manifest, const std::string& generated_at,
                          const std::string& provenance);

/// scan_corpus plus `<output_dir>/manifest.json`. The `generated_at` field
/// sits alone on the second line; it honours SOURCE_DATE_EPOCH.
CorpusManifest cmd_ingest(const RunConfig& config);

// Analyze

struct CueAnalysis {
  bool scored = false;
  LabelValues sentiment{};
  double polarity = 0.0;
  double abuse_probability = 0.0;
  AbuseCount words;
  TokenSequence ngram_tokens;
};

struct FilmAnalysis {
  SubtitleDocument document;
  FilmRecord record;
  LabelFlags labels;
  std::optional<double> sentiment_score;
  std::vector<CueAnalysis> cues;
};

/// Loaded lexicon, weights, stopword profiles and inference client for one run.
class AnalysisContext {
 public:
  /// Builds the backend from the config; native models are read from the
  /// models directory.
  explicit AnalysisContext(const RunConfig& config);
  AnalysisContext(const RunConfig& config, std::shared_ptr<Transport> transport);

  const RunConfig& config() const noexcept { return config_; }
  const AbuseLexicon& lexicon() const noexcept { return lexicon_; }
  const SentimentWeights& weights() const noexcept { return weights_; }
  InferenceClient& client() noexcept { return *client_; }

  FilmAnalysis analyze_film(const ManifestFilm& film);

 private:
  RunConfig config_;
  AbuseLexicon lexicon_;
  SentimentWeights weights_;
  StopwordSet ngram_stopwords_;
  std::unique_ptr<InferenceClient> client_;
};

struct CorpusReport {
  std::vector<ReportTable> tables;
  std::vector<std::string> warnings;
  std::filesystem::path directory;
};

enum class AnalyzeScope { Corpus, Film };

/// Corpus scope writes n-gram era tables, emotion counts, co-occurrence and
/// every trend series to `<output_dir>/report`. Film scope writes the
/// windowed timeline and the per-cue table to `<output_dir>/films/<id>`.
/// Throws std::invalid_argument for an unknown film id.
CorpusReport cmd_analyze(const RunConfig& config, AnalyzeScope scope, const std::string& film_id = {},
                         std::shared_ptr<Transport> transport = nullptr);

/// Rewrites every table of `<output_dir>/report/report.json` as CSV in `dir`.
std::vector<std::filesystem::path> cmd_export(const RunConfig& config, const std::filesystem::path& dir);

}  // namespace cinesent
