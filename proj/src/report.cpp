#include "cinesent/report.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <future>
#include <limits>
#include <set>

#include <json.hpp>

#include "cinesent/errors.hpp"
#include "cinesent/ngram.hpp"
#include "cinesent/util.hpp"

namespace cinesent {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

// ---------------------------------------------------------------- config

namespace {

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) throw ConfigError("invalid value for '" + key + "': " + value);
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  const auto v = to_lower_ascii(value);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("invalid value for '" + key + "': " + value);
}

fs::path resolve(const fs::path& base, const std::string& value) {
  fs::path p(value);
  if (p.is_relative() && !base.empty()) p = base / p;
  return p.lexically_normal();
}

fs::path existing(const std::string& key, const fs::path& p) {
  if (!fs::exists(p)) throw ConfigError(key + " does not exist: " + p.string());
  return p;
}

std::string strip_provenance(std::string text) {
  while (text.starts_with("# config_hash=")) {
    const auto nl = text.find('\n');
    text.erase(0, nl == std::string::npos ? text.size() : nl + 1);
  }
  return text;
}

void write_with_provenance(const fs::path& path, const std::string& provenance, const std::string& body) {
  write_file(path, provenance + "\n" + body);
}

}  // namespace

RunConfig parse_run_config(std::string_view text, const fs::path& base_dir) {
  RunConfig c;
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    const auto key = to_lower_ascii(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (!c.raw.emplace(key, value).second) throw ConfigError("duplicate config key '" + key + "'");
  }

  for (const auto& [key, value] : c.raw) {
    if (key == "corpus_root") {
      c.corpus_root = existing(key, resolve(base_dir, value));
    } else if (key == "catalog") {
      c.catalog = existing(key, resolve(base_dir, value));
    } else if (key == "output_dir") {
      c.output_dir = resolve(base_dir, value);
    } else if (key == "models_dir") {
      c.models_dir = resolve(base_dir, value);
    } else if (key == "ngram_stopwords") {
      c.ngram_stopwords = existing(key, resolve(base_dir, value));
    } else if (key == "classify_stopwords") {
      c.classify_stopwords = existing(key, resolve(base_dir, value));
    } else if (key == "classify_remove_stopwords") {
      c.classify_remove_stopwords = parse_bool(key, value);
    } else if (key == "lexicon") {
      c.lexicon = existing(key, resolve(base_dir, value));
    } else if (key == "weights") {
      c.weights = existing(key, resolve(base_dir, value));
    } else if (key == "sentiment_data") {
      c.sentiment_data = existing(key, resolve(base_dir, value));
    } else if (key == "abuse_data") {
      c.abuse_data = existing(key, resolve(base_dir, value));
    } else if (key == "backend") {
      c.backend.kind = parse_backend_kind(value);
    } else if (key == "endpoint") {
      c.backend.endpoint = value;
    } else if (key == "timeout_ms") {
      c.backend.timeout_ms = parse_number<int>(key, value);
    } else if (key == "max_batch") {
      c.backend.max_batch = parse_number<std::size_t>(key, value);
    } else if (key == "max_in_flight") {
      c.backend.max_in_flight = parse_number<std::size_t>(key, value);
    } else if (key == "seed") {
      c.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "learning_rate") {
      c.train.learning_rate = parse_number<double>(key, value);
    } else if (key == "epochs") {
      c.train.epochs = parse_number<std::size_t>(key, value);
    } else if (key == "batch_size") {
      c.train.batch_size = parse_number<std::size_t>(key, value);
    } else if (key == "l2") {
      c.train.l2 = parse_number<double>(key, value);
    } else if (key == "max_features") {
      c.max_features = parse_number<std::size_t>(key, value);
    } else if (key == "ngram_top_k") {
      c.ngram_top_k = parse_number<std::size_t>(key, value);
    } else if (key == "jobs") {
      c.jobs = parse_number<std::size_t>(key, value);
    } else if (key == "window_minutes") {
      c.window_minutes = parse_number<int>(key, value);
    } else if (key == "threshold") {
      c.threshold = parse_number<double>(key, value);
    } else if (key == "abuse_time_predicate") {
      const auto v = to_lower_ascii(value);
      if (v == "lexicon") {
        c.abuse_time = AbuseTimePredicate::LexiconHit;
      } else if (v == "classifier") {
        c.abuse_time = AbuseTimePredicate::ClassifierPositive;
      } else {
        throw ConfigError("abuse_time_predicate must be lexicon or classifier");
      }
    } else if (key == "sentiment_values") {
      const auto v = to_lower_ascii(value);
      if (v != "probabilities" && v != "binary") throw ConfigError("sentiment_values must be probabilities or binary");
      c.binary_sentiment_values = v == "binary";
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }

  c.train.seed = c.seed;
  c.backend.validate();
  c.train.validate();
  if (c.window_minutes < 1) throw ConfigError("window_minutes must be >= 1");
  if (c.max_features < 1) throw ConfigError("max_features must be >= 1");
  if (c.ngram_top_k < 1) throw ConfigError("ngram_top_k must be >= 1");
  if (c.jobs < 1) throw ConfigError("jobs must be >= 1");
  if (!(c.threshold > 0.0 && c.threshold < 1.0)) throw ConfigError("threshold must lie in (0, 1)");
  return c;
}

RunConfig load_run_config(const fs::path& path) {
  return parse_run_config(read_file(path), path.parent_path());
}

std::string RunConfig::hash() const {
  std::string canonical;
  for (const auto& [k, v] : raw) canonical += k + "=" + v + "\n";
  return fnv1a_hex(canonical);
}

namespace {

AbuseLexicon lexicon_for(const RunConfig& c) {
  if (!c.lexicon) throw ConfigError("no lexicon configured");
  return load_lexicon(*c.lexicon);
}

SentimentWeights weights_for(const RunConfig& c) {
  return c.weights ? load_weights(*c.weights) : SentimentWeights::defaults();
}

StopwordSet classify_stopwords_for(const RunConfig& c) {
  return c.classify_stopwords ? load_stopwords(*c.classify_stopwords, "classify") : StopwordSet::classify_profile();
}

std::string provenance(const RunConfig& c, const std::string& lexicon, const std::string& weights) {
  return "# config_hash=" + c.hash() + " lexicon=" + lexicon + " weights=" + weights +
         " backend=" + std::string(to_string(c.backend.kind));
}

}  // namespace

std::string provenance_line(const RunConfig& config) {
  std::string lexicon = "none";
  if (config.lexicon) {
    const auto lex = load_lexicon(*config.lexicon);
    lexicon = lex.name() + "@" + lex.version();
  }
  return provenance(config, lexicon, weights_for(config).profile());
}

// ---------------------------------------------------------------- tables

std::string ReportTable::to_csv() const {
  std::string out = csv_row(columns);
  for (const auto& row : rows) out += csv_row(row);
  return out;
}

ReportTable ReportTable::from_csv(std::string name, std::string_view csv) {
  ReportTable t;
  t.name = std::move(name);
  CsvReader reader(csv);
  std::vector<std::string> fields;
  if (!reader.next(t.columns)) return t;
  while (reader.next(fields)) {
    if (fields.size() != t.columns.size()) {
      throw FormatError("table " + t.name + " line " + std::to_string(reader.line()) + ": expected " +
                        std::to_string(t.columns.size()) + " fields");
    }
    t.rows.push_back(fields);
  }
  return t;
}

namespace {

ojson table_json(const ReportTable& t) {
  return ojson{{"columns", t.columns}, {"rows", t.rows}};
}

}  // namespace

// ---------------------------------------------------------------- datasets

namespace {

std::optional<bool> parse_flag(std::string_view raw) {
  const auto v = to_lower_ascii(trim(raw));
  if (v == "1" || v == "1.0" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "0.0" || v == "false" || v == "no" || v.empty()) return false;
  return std::nullopt;
}

std::optional<bool> parse_abuse_label(std::string_view raw) {
  const auto v = to_lower_ascii(trim(raw));
  if (v == "abusive" || v == "abu" || v == "off" || v == "offensive") return true;
  if (v == "not" || v == "not_abusive" || v == "non-abusive" || v == "non_abusive" || v == "normal") return false;
  if (v.empty()) return std::nullopt;
  return parse_flag(v);
}

std::optional<std::size_t> find_column(const std::vector<std::string>& header,
                                       std::initializer_list<std::string_view> names) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto h = to_lower_ascii(trim(header[i]));
    for (auto n : names) {
      if (h == n) return i;
    }
  }
  return std::nullopt;
}

}  // namespace

SentimentDataset load_sentiment_dataset(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("sentiment dataset not found: " + path.string());
  const auto text = read_file(path);
  CsvReader reader(text);
  std::vector<std::string> header;
  if (!reader.next(header)) throw FormatError(path.string() + ": empty dataset");

  const auto text_col = find_column(header, {"text", "tweet", "tweets", "sentence"});
  if (!text_col) throw FormatError(path.string() + ": no text column");

  std::array<std::optional<std::size_t>, kSentimentLabelCount> label_cols{};
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i == *text_col) continue;
    if (auto label = resolve_sentiment_label(header[i])) {
      auto& slot = label_cols[index_of(*label)];
      if (slot) throw FormatError(path.string() + ": duplicate column for " + header[i]);
      slot = i;
    }
  }
  for (std::size_t l = 0; l < kSentimentLabelCount; ++l) {
    if (!label_cols[l]) {
      throw FormatError(path.string() + ": missing label column " + std::string(kSentimentLabelNames[l]));
    }
  }

  SentimentDataset ds;
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    if (fields.size() != header.size()) {
      ds.warnings.push_back("line " + std::to_string(reader.line()) + ": wrong field count, skipped");
      continue;
    }
    std::vector<std::uint8_t> row(kSentimentLabelCount);
    bool ok = true;
    for (std::size_t l = 0; l < kSentimentLabelCount && ok; ++l) {
      const auto flag = parse_flag(fields[*label_cols[l]]);
      if (!flag) ok = false;
      else row[l] = *flag ? 1 : 0;
    }
    if (!ok) {
      ds.warnings.push_back("line " + std::to_string(reader.line()) + ": bad label value, skipped");
      continue;
    }
    if (clean_text(fields[*text_col]).empty()) {
      ds.warnings.push_back("line " + std::to_string(reader.line()) + ": empty text, skipped");
      continue;
    }
    ds.texts.push_back(fields[*text_col]);
    ds.labels.push_row(row);
  }
  if (ds.texts.empty()) throw FormatError(path.string() + ": no usable rows");
  return ds;
}

AbuseDataset load_abuse_dataset(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("abuse dataset not found: " + path.string());
  const auto text = read_file(path);
  CsvReader reader(text);
  std::vector<std::string> header;
  if (!reader.next(header)) throw FormatError(path.string() + ": empty dataset");
  const auto text_col = find_column(header, {"text", "tweet", "comment", "sentence"});
  const auto label_col = find_column(header, {"label", "abusive", "class"});
  if (!text_col || !label_col) throw FormatError(path.string() + ": expected text and label columns");

  AbuseDataset ds;
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    if (fields.size() != header.size()) continue;
    const auto label = parse_abuse_label(fields[*label_col]);
    if (!label) {
      throw FormatError(path.string() + " line " + std::to_string(reader.line()) + ": bad label '" +
                        fields[*label_col] + "'");
    }
    if (clean_text(fields[*text_col]).empty()) continue;
    ds.texts.push_back(fields[*text_col]);
    ds.labels.push_back(*label ? 1 : 0);
  }
  if (ds.texts.empty()) throw FormatError(path.string() + ": no usable rows");
  return ds;
}

TokenSequence classifier_tokens(const std::string& text, const StopwordSet* stopwords) {
  auto tokens = tokenize(clean_text(text));
  return stopwords ? remove_stopwords(tokens, *stopwords) : tokens;
}

// ---------------------------------------------------------------- train

std::string_view to_string(Task task) { return task == Task::Sentiment ? "sentiment" : "abuse"; }

namespace {

fs::path models_dir(const RunConfig& c) { return c.models_dir ? *c.models_dir : c.output_dir / "models"; }

template <typename T>
std::vector<T> pick(const std::vector<T>& items, const std::vector<std::size_t>& rows) {
  std::vector<T> out;
  out.reserve(rows.size());
  for (auto r : rows) out.push_back(items[r]);
  return out;
}

ojson multilabel_json(const MultilabelMetrics& m) {
  return ojson{{"accuracy", m.subset_accuracy},
               {"precision", m.micro_precision},
               {"recall", m.micro_recall},
               {"micro_f1", m.micro_f1},
               {"hamming_loss", m.hamming_loss}};
}

ojson binary_json(const BinaryMetrics& m) {
  return ojson{{"accuracy", m.accuracy}, {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
}

}  // namespace

TrainOutcome cmd_train(const RunConfig& config, Task task) {
  std::optional<StopwordSet> stopwords;
  if (config.classify_remove_stopwords) stopwords = classify_stopwords_for(config);
  const StopwordSet* sw = stopwords ? &*stopwords : nullptr;

  std::vector<TokenSequence> docs;
  LabelMatrix Y;
  TrainOutcome out;
  out.task = task;
  if (task == Task::Sentiment) {
    if (!config.sentiment_data) throw ConfigError("sentiment_data is not configured");
    auto ds = load_sentiment_dataset(*config.sentiment_data);
    for (const auto& t : ds.texts) docs.push_back(classifier_tokens(t, sw));
    Y = std::move(ds.labels);
    out.split = iterative_stratified_split(Y, {}, config.seed);
  } else {
    if (!config.abuse_data) throw ConfigError("abuse_data is not configured");
    auto ds = load_abuse_dataset(*config.abuse_data);
    for (const auto& t : ds.texts) docs.push_back(classifier_tokens(t, sw));
    for (auto v : ds.labels) Y.push_row(std::vector<std::uint8_t>{v});
    out.split = stratified_binary_split(ds.labels, {}, config.seed);
  }

  const auto train_docs = pick(docs, out.split.train);
  const auto test_docs = pick(docs, out.split.test);
  VectorizerConfig vc;
  vc.max_features = config.max_features;
  out.vocabulary = fit_vocabulary(train_docs, vc);
  const auto X_train = transform_all(train_docs, out.vocabulary);
  const auto X_test = transform_all(test_docs, out.vocabulary);
  const auto Y_train = Y.select(out.split.train);
  const auto Y_test = Y.select(out.split.test);

  const std::string name(to_string(task));
  const auto dir = models_dir(config);
  const auto prov = provenance_line(config);

  std::string csv = task == Task::Sentiment ? multilabel_csv_header() : binary_csv_header();
  ojson models = ojson::array();
  for (auto loss : {LossKind::Logistic, LossKind::Hinge}) {
    TrainedBaseline b;
    b.name = loss == LossKind::Logistic ? "TF-IDF + LR" : "TF-IDF + SVM";
    auto result = train(X_train, Y_train, loss, config.train);
    b.model = std::move(result.model);
    const auto predicted = predict_all(b.model, X_test, config.threshold);
    ojson entry{{"name", b.name}, {"loss", std::string(to_string(loss))}};
    if (task == Task::Sentiment) {
      b.multilabel = compute_multilabel_metrics(Y_test, predicted);
      csv += multilabel_csv_row(b.name, *b.multilabel);
      entry["metrics"] = multilabel_json(*b.multilabel);
    } else {
      b.binary = compute_binary_metrics(Y_test.column(0), predicted.column(0));
      csv += binary_csv_row(b.name, *b.binary);
      entry["metrics"] = binary_json(*b.binary);
    }
    entry["objective_final"] = result.objective_history.back();
    models.push_back(std::move(entry));

    const auto suffix = loss == LossKind::Logistic ? "_lr.model" : "_svm.model";
    write_with_provenance(dir / (name + suffix), prov, serialize_model(b.model));
    out.baselines.push_back(std::move(b));
  }
  write_with_provenance(dir / (name + ".vocab"), prov, serialize_vocabulary(out.vocabulary));
  write_with_provenance(dir / (name + "_metrics.csv"), prov, csv);

  ojson report;
  report["provenance"] = prov.substr(2);
  report["task"] = name;
  report["seed"] = config.seed;
  report["remove_stopwords"] = config.classify_remove_stopwords;
  report["split"] = {{"train", out.split.train.size()},
                     {"validation", out.split.validation.size()},
                     {"test", out.split.test.size()}};
  report["split_warnings"] = out.split.warnings;
  report["vocabulary_size"] = out.vocabulary.size();
  report["training"] = {{"learning_rate", config.train.learning_rate},
                        {"epochs", config.train.epochs},
                        {"batch_size", config.train.batch_size},
                        {"l2", config.train.l2}};
  report["models"] = std::move(models);
  out.report_path = dir / (name + "_report.json");
  write_file(out.report_path, report.dump(2) + "\n");
  return out;
}

// ---------------------------------------------------------------- ingest

CorpusManifest scan_corpus(const RunConfig& config) {
  if (config.catalog.empty()) throw ConfigError("catalog is not configured");
  if (config.corpus_root.empty()) throw ConfigError("corpus_root is not configured");
  const auto catalog = load_catalog(config.catalog);

  CorpusManifest m;
  m.catalog_warnings = catalog.warnings;
  std::set<std::string> known;
  for (const auto& entry : catalog.entries) {
    known.insert(entry.film_id);
    const auto path = config.corpus_root / (entry.film_id + ".srt");
    if (!fs::exists(path)) {
      m.missing_subtitles.push_back(entry.film_id);
      continue;
    }
    try {
      const auto parsed = parse_srt_file(path, entry.film_id);
      ManifestFilm film;
      film.entry = entry;
      film.subtitle_path = path;
      film.cues = parsed.document.cues.size();
      film.skipped_blocks = parsed.report.skipped_blocks;
      film.warnings = parsed.report.warnings;
      m.films.push_back(std::move(film));
    } catch (const FormatError& e) {
      m.unparseable_subtitles.push_back(entry.film_id + ": " + e.what());
    }
  }

  std::vector<std::string> orphans;
  for (const auto& item : fs::directory_iterator(config.corpus_root)) {
    if (!item.is_regular_file() || item.path().extension() != ".srt") continue;
    const auto stem = item.path().stem().string();
    if (!known.contains(stem)) orphans.push_back(stem);
  }
  std::sort(orphans.begin(), orphans.end());
  m.orphan_subtitles = std::move(orphans);
  return m;
}

std::string manifest_json(const CorpusManifest& m, const std::string& generated_at, const std::string& prov) {
  ojson body;
  body["provenance"] = prov.substr(2);
  body["film_count"] = m.films.size();
  ojson films = ojson::array();
  for (const auto& f : m.films) {
    films.push_back(ojson{{"film_id", f.entry.film_id},
                          {"title", f.entry.title},
                          {"year", f.entry.year},
                          {"award_class", std::string(to_string(f.entry.award_class))},
                          {"genre", std::string(to_string(f.entry.genre))},
                          {"cues", f.cues},
                          {"skipped_blocks", f.skipped_blocks},
                          {"warnings", f.warnings}});
  }
  body["films"] = std::move(films);
  body["missing_subtitles"] = m.missing_subtitles;
  body["unparseable_subtitles"] = m.unparseable_subtitles;
  body["orphan_subtitles"] = m.orphan_subtitles;
  body["catalog_warnings"] = m.catalog_warnings;

  // Timestamp alone on line 2 so that reruns differ in exactly one line.
  auto rest = body.dump(2);
  rest.erase(0, 1);  // leading '{'
  return "{\n  \"generated_at\": " + ojson(generated_at).dump() + "," + rest + "\n";
}

namespace {

std::string utc_timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    std::int64_t v = 0;
    const std::string_view s(epoch);
    if (std::from_chars(s.data(), s.data() + s.size(), v).ec == std::errc{}) t = static_cast<std::time_t>(v);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

CorpusManifest cmd_ingest(const RunConfig& config) {
  auto m = scan_corpus(config);
  write_file(config.output_dir / "manifest.json", manifest_json(m, utc_timestamp(), provenance_line(config)));
  return m;
}

// ---------------------------------------------------------------- analyze

namespace {

std::optional<NativeClassifier> load_native(const RunConfig& c, Task task, std::size_t expected_labels,
                                            const std::optional<StopwordSet>& stopwords) {
  const std::string name(to_string(task));
  const auto dir = models_dir(c);
  const auto model_path = dir / (name + "_lr.model");
  const auto vocab_path = dir / (name + ".vocab");
  if (!fs::exists(model_path) || !fs::exists(vocab_path)) return std::nullopt;
  const auto model_text = strip_provenance(read_file(model_path));
  NativeClassifier nc;
  nc.model = parse_model(model_text);
  nc.vocabulary = parse_vocabulary(strip_provenance(read_file(vocab_path)));
  if (nc.model.labels() != expected_labels) {
    throw ConfigError(model_path.string() + ": expected " + std::to_string(expected_labels) + " labels");
  }
  if (nc.model.dim() != nc.vocabulary.size()) {
    throw DimensionMismatchError(model_path.string() + ": model and vocabulary sizes differ");
  }
  nc.model_id = name + "-tfidf-lr-" + fnv1a_hex(model_text).substr(0, 8);
  nc.stopwords = stopwords;
  return nc;
}

std::unique_ptr<InferenceClient> make_client(const RunConfig& c, std::shared_ptr<Transport> transport) {
  std::optional<StopwordSet> stopwords;
  if (c.classify_remove_stopwords) stopwords = classify_stopwords_for(c);
  NativeBackends native;
  if (c.backend.kind != BackendKind::RemoteService) {
    native.sentiment = load_native(c, Task::Sentiment, kSentimentLabelCount, stopwords);
    native.abuse = load_native(c, Task::Abuse, 1, stopwords);
    if (c.backend.kind == BackendKind::NativeLinear && (!native.sentiment || !native.abuse)) {
      throw ConfigError("native backend needs trained models in " + models_dir(c).string() +
                        "; run `train` for both tasks first");
    }
  }
  if (c.backend.kind != BackendKind::NativeLinear && !transport) transport = make_http_transport(c.backend.endpoint);
  return std::make_unique<InferenceClient>(c.backend, std::move(transport), std::move(native));
}

}  // namespace

AnalysisContext::AnalysisContext(const RunConfig& config) : AnalysisContext(config, nullptr) {}

AnalysisContext::AnalysisContext(const RunConfig& config, std::shared_ptr<Transport> transport)
    : config_(config),
      lexicon_(lexicon_for(config)),
      weights_(weights_for(config)),
      ngram_stopwords_(config.ngram_stopwords ? load_stopwords(*config.ngram_stopwords, "ngram")
                                              : StopwordSet::ngram_profile()),
      client_(make_client(config, std::move(transport))) {
  if (lexicon_.empty()) throw ConfigError("lexicon " + lexicon_.name() + " has no terms");
}

FilmAnalysis AnalysisContext::analyze_film(const ManifestFilm& film) {
  FilmAnalysis fa;
  fa.document = parse_srt_file(film.subtitle_path, film.entry.film_id).document;
  const auto& cues = fa.document.cues;
  fa.cues.resize(cues.size());

  std::vector<std::string> texts;
  std::vector<std::size_t> scored_index;
  for (std::size_t i = 0; i < cues.size(); ++i) {
    auto clean = clean_text(join(cues[i].lines, " "));
    const auto tokens = tokenize(clean);
    auto& ca = fa.cues[i];
    ca.words = count_abusive(tokens, lexicon_);
    ca.ngram_tokens = remove_stopwords(split_clitics(tokens), ngram_stopwords_);
    if (clean.empty()) continue;
    ca.scored = true;
    texts.push_back(std::move(clean));
    scored_index.push_back(i);
  }

  std::vector<LabelValues> scored_values;
  double abuse_sum = 0.0;
  if (!texts.empty()) {
    const auto sentiment = client_->classify_sentiment_batch(texts);
    const auto abuse = client_->classify_abuse_batch(texts);
    for (std::size_t k = 0; k < scored_index.size(); ++k) {
      auto& ca = fa.cues[scored_index[k]];
      ca.sentiment = sentiment[k];
      LabelValues values = sentiment[k];
      for (std::size_t l = 0; l < kSentimentLabelCount; ++l) {
        const bool on = sentiment[k][l] >= config_.threshold;
        if (on) fa.labels.set(l);
        if (config_.binary_sentiment_values) values[l] = on ? 1.0 : 0.0;
      }
      ca.polarity = weighted_score(values, weights_).score;
      ca.abuse_probability = abuse[k].probability;
      abuse_sum += abuse[k].probability;
      scored_values.push_back(values);
    }
    fa.sentiment_score = film_score(scored_values, weights_);
  }

  auto& r = fa.record;
  r.film_id = film.entry.film_id;
  r.year = film.entry.year;
  r.award_class = film.entry.award_class;
  r.genre = film.entry.genre;
  for (const auto& ca : fa.cues) r.words += ca.words;
  r.mean_abuse_probability = texts.empty() ? 0.0 : abuse_sum / static_cast<double>(texts.size());
  const bool by_classifier = config_.abuse_time == AbuseTimePredicate::ClassifierPositive;
  r.time = abusive_time(fa.document, [&](std::size_t i, const SubtitleCue&) {
    const auto& ca = fa.cues[i];
    return by_classifier ? (ca.scored && ca.abuse_probability >= 0.5) : ca.words.abusive > 0;
  });
  return fa;
}

namespace {

struct BundleWriter {
  fs::path dir;
  std::string provenance;
  std::vector<ReportTable> tables;

  void add(const std::string& name, const std::string& csv) {
    write_with_provenance(dir / (name + ".csv"), provenance, csv);
    tables.push_back(ReportTable::from_csv(name, csv));
  }
};

std::string film_scores_csv(const std::vector<FilmAnalysis>& films) {
  std::string out = "film_id,year,award_class,genre,sentiment_score,abusive_words,total_words,"
                    "mean_abuse_probability,abusive_seconds,dialogue_seconds\n";
  for (const auto& f : films) {
    const auto& r = f.record;
    const std::vector<std::string> row = {
        r.film_id,
        std::to_string(r.year),
        std::string(to_string(r.award_class)),
        std::string(to_string(r.genre)),
        f.sentiment_score ? format_real(*f.sentiment_score) : "",
        std::to_string(r.words.abusive),
        std::to_string(r.words.total),
        format_real(r.mean_abuse_probability),
        format_real(static_cast<double>(r.time.abusive_ms) / 1000.0, 3),
        format_real(static_cast<double>(r.time.dialogue_ms) / 1000.0, 3)};
    out += csv_row(row);
  }
  return out;
}

std::string sentiment_by_decade_csv(const std::map<DecadeClassKey, GroupStats>& stats) {
  std::string out = "decade,award_class,mean_score,stddev,n\n";
  for (const auto& [key, s] : stats) {
    const std::vector<std::string> row = {decade_label(key.first), std::string(to_string(key.second)),
                                          format_real(s.mean), format_real(s.stddev), std::to_string(s.n)};
    out += csv_row(row);
  }
  return out;
}

ojson metadata_json(const RunMetadata& md) {
  return ojson{{"backend", md.backend},
               {"sentiment_model", md.sentiment_model},
               {"abuse_model", md.abuse_model},
               {"remote_requests", md.remote_requests},
               {"retries", md.retries},
               {"fallback_batches", md.fallback_batches},
               {"events", md.events}};
}

std::vector<FilmAnalysis> analyze_films(AnalysisContext& ctx, const std::vector<ManifestFilm>& films,
                                        std::size_t jobs) {
  std::vector<FilmAnalysis> out(films.size());
  if (jobs <= 1 || films.size() <= 1) {
    for (std::size_t i = 0; i < films.size(); ++i) out[i] = ctx.analyze_film(films[i]);
    return out;
  }
  // Strided partition; results land by index so output order never depends
  // on scheduling.
  std::vector<std::future<void>> tasks;
  for (std::size_t w = 0; w < jobs; ++w) {
    tasks.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < films.size(); i += jobs) out[i] = ctx.analyze_film(films[i]);
    }));
  }
  for (auto& t : tasks) t.get();
  return out;
}

CorpusReport analyze_corpus(AnalysisContext& ctx, const CorpusManifest& manifest) {
  const auto& config = ctx.config();
  CorpusReport report;
  report.directory = config.output_dir / "report";
  const auto prov = provenance(config, ctx.lexicon().name() + "@" + ctx.lexicon().version(), ctx.weights().profile());
  BundleWriter bundle{report.directory, prov, {}};

  const auto films = analyze_films(ctx, manifest.films, config.jobs);

  std::vector<FilmTokens> film_tokens;
  std::vector<LabeledFilm> labeled;
  std::vector<LabelFlags> flags;
  std::vector<ScoredFilm> scored;
  std::vector<FilmRecord> records;
  for (const auto& f : films) {
    FilmTokens ft{f.record.film_id, f.record.year, {}};
    for (const auto& ca : f.cues) ft.cues.push_back(ca.ngram_tokens);
    film_tokens.push_back(std::move(ft));
    labeled.push_back({f.record.film_id, f.record.genre, f.labels});
    flags.push_back(f.labels);
    if (f.sentiment_score) {
      scored.push_back({f.record.year, f.record.award_class, *f.sentiment_score});
    } else {
      report.warnings.push_back(f.record.film_id + ": no scored cues, left out of sentiment averages");
    }
    records.push_back(f.record);
  }

  for (const auto& era : default_eras()) {
    for (int n : {2, 3}) {
      const auto name = "ngrams_" + era.label() + "_n" + std::to_string(n);
      try {
        bundle.add(name, ngram_csv(era_top_k(film_tokens, era, n, config.ngram_top_k)));
      } catch (const EmptySelectionError& e) {
        if (n == 2) report.warnings.push_back(e.what());
      }
    }
  }

  auto counts = emotion_counts(labeled, Grouping::Corpus);
  counts.merge(emotion_counts(labeled, Grouping::Genre));
  bundle.add("emotion_counts", emotion_counts_csv(counts));
  bundle.add("cooccurrence", cooccurrence_csv(cooccurrence(flags)));
  bundle.add("sentiment_by_decade", sentiment_by_decade_csv(decade_average(scored)));
  bundle.add("abuse_trend", abuse_trend(records).to_csv());
  bundle.add("abuse_probability_yearly", abuse_probability_yearly(records).to_csv());
  bundle.add("abuse_probability_ma10", abuse_probability_by_year(records, 10).to_csv());
  auto normalized = normalized_abuse_by_genre(records);
  for (auto& w : normalized.warnings) report.warnings.push_back(std::move(w));
  bundle.add("normalized_abuse_by_genre", normalized.series.to_csv());
  bundle.add("words_per_decade", words_per_decade(records).to_csv());
  bundle.add("abusive_time_by_decade", abusive_time_by_decade(records).to_csv());
  bundle.add("film_scores", film_scores_csv(films));

  ojson tables = ojson::object();
  for (const auto& t : bundle.tables) tables[t.name] = table_json(t);
  ojson out;
  out["provenance"] = prov.substr(2);
  out["scope"] = "corpus";
  out["film_count"] = films.size();
  out["inference"] = metadata_json(ctx.client().metadata());
  out["warnings"] = report.warnings;
  out["tables"] = std::move(tables);
  write_file(report.directory / "report.json", out.dump(2) + "\n");

  report.tables = std::move(bundle.tables);
  return report;
}

CorpusReport analyze_single(AnalysisContext& ctx, const CorpusManifest& manifest, const std::string& film_id) {
  const auto it = std::find_if(manifest.films.begin(), manifest.films.end(),
                               [&](const ManifestFilm& f) { return f.entry.film_id == film_id; });
  if (it == manifest.films.end()) throw std::invalid_argument("unknown film id '" + film_id + "'");

  const auto& config = ctx.config();
  const auto fa = ctx.analyze_film(*it);
  if (fa.document.cues.empty()) throw NoScoredContentError(film_id + ": no cues");

  std::vector<double> polarity;
  std::vector<double> abuse;
  std::vector<CueReportRow> rows;
  for (std::size_t i = 0; i < fa.cues.size(); ++i) {
    const auto& ca = fa.cues[i];
    const auto& cue = fa.document.cues[i];
    polarity.push_back(ca.scored ? ca.polarity : std::numeric_limits<double>::quiet_NaN());
    abuse.push_back(ca.abuse_probability);
    if (!ca.scored) continue;
    rows.push_back({format_timestamp(cue.start_ms), format_timestamp(cue.end_ms), join(cue.lines, " "),
                    polarity_of(ca.polarity), abusive_level(ca.abuse_probability)});
  }
  if (rows.empty()) throw NoScoredContentError(film_id + ": no cue has scorable text");

  CorpusReport report;
  report.directory = config.output_dir / "films" / film_id;
  const auto prov = provenance(config, ctx.lexicon().name() + "@" + ctx.lexicon().version(), ctx.weights().profile());
  BundleWriter bundle{report.directory, prov, {}};
  bundle.add("timeline", film_timeline(fa.document, polarity, abuse, config.window_minutes).to_csv());
  bundle.add("cues", cue_report_csv(rows));

  ojson tables = ojson::object();
  for (const auto& t : bundle.tables) tables[t.name] = table_json(t);
  ojson out;
  out["provenance"] = prov.substr(2);
  out["scope"] = "film";
  out["film_id"] = film_id;
  out["title"] = it->entry.title;
  out["year"] = it->entry.year;
  out["sentiment_score"] = fa.sentiment_score ? ojson(*fa.sentiment_score) : ojson();
  out["window_minutes"] = config.window_minutes;
  out["abusive_level_rule"] = "Low p<1/3, Medium 1/3<=p<2/3, High p>=2/3";
  out["inference"] = metadata_json(ctx.client().metadata());
  out["tables"] = std::move(tables);
  write_file(report.directory / "report.json", out.dump(2) + "\n");

  report.tables = std::move(bundle.tables);
  return report;
}

}  // namespace

CorpusReport cmd_analyze(const RunConfig& config, AnalyzeScope scope, const std::string& film_id,
                         std::shared_ptr<Transport> transport) {
  const auto manifest = scan_corpus(config);
  if (scope == AnalyzeScope::Film) {
    // Unknown ids fail before any model is loaded.
    const bool known = std::any_of(manifest.films.begin(), manifest.films.end(),
                                   [&](const ManifestFilm& f) { return f.entry.film_id == film_id; });
    if (!known) throw std::invalid_argument("unknown film id '" + film_id + "'");
  }
  AnalysisContext ctx(config, std::move(transport));
  return scope == AnalyzeScope::Corpus ? analyze_corpus(ctx, manifest) : analyze_single(ctx, manifest, film_id);
}

// ---------------------------------------------------------------- export

std::vector<fs::path> cmd_export(const RunConfig& config, const fs::path& dir) {
  const auto source = config.output_dir / "report" / "report.json";
  if (!fs::exists(source)) throw IoError("no report bundle at " + source.string() + "; run `analyze` first");
  const auto bundle = ojson::parse(read_file(source));
  const auto prov = "# " + bundle.at("provenance").get<std::string>();
  std::vector<fs::path> written;
  for (const auto& [name, table] : bundle.at("tables").items()) {
    ReportTable t;
    t.name = name;
    t.columns = table.at("columns").get<std::vector<std::string>>();
    t.rows = table.at("rows").get<std::vector<std::vector<std::string>>>();
    const auto path = dir / (name + ".csv");
    write_with_provenance(path, prov, t.to_csv());
    written.push_back(path);
  }
  return written;
}

}  // namespace cinesent
