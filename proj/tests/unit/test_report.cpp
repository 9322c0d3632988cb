#include <gtest/gtest.h>

#include <json.hpp>

#include "cinesent/errors.hpp"
#include "cinesent/report.hpp"
#include "cinesent/util.hpp"
#include "e2e.hpp"
#include "generators.hpp"

using namespace cinesent;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = CINESENT_FIXTURES;

RunConfig fixture_config(const fs::path& out) {
  auto c = load_run_config(kFixtures / "fixture.cfg");
  c.output_dir = out;
  return c;
}

/// Config for a throwaway corpus that borrows the fixture lexicon and models.
fs::path scratch_corpus(const std::string& tag, const std::string& catalog,
                        const std::vector<std::pair<std::string, std::string>>& srts) {
  const auto dir = gen::temp_dir(tag);
  write_file(dir / "catalog.csv", catalog);
  fs::create_directories(dir / "subs");
  for (const auto& [name, body] : srts) write_file(dir / "subs" / name, body);
  const auto f = kFixtures.string();
  write_file(dir / "run.cfg", "corpus_root=subs\ncatalog=catalog.csv\nlexicon=" + f + "/lexicon.txt\nmodels_dir=" + f +
                                  "/models\noutput_dir=out\n");
  return dir;
}

const char* kHeader = "film_id,title,year,award_class,genres\n";

}  // namespace

TEST(RunConfig, ParsesAndResolvesRelativePaths) {
  const auto c = load_run_config(kFixtures / "fixture.cfg");
  EXPECT_EQ(c.corpus_root, (kFixtures / "corpus/subtitles").lexically_normal());
  EXPECT_EQ(c.output_dir, (kFixtures / "out").lexically_normal());
  EXPECT_EQ(c.ngram_top_k, 10u);
  EXPECT_EQ(c.backend.kind, BackendKind::NativeLinear);
  EXPECT_EQ(c.train.seed, 42u);
  EXPECT_EQ(c.abuse_time, AbuseTimePredicate::LexiconHit);
  EXPECT_FALSE(c.classify_remove_stopwords);
}

TEST(RunConfig, HashIgnoresLocationButNotContent) {
  const auto text = read_file(kFixtures / "fixture.cfg");
  const auto a = parse_run_config(text, kFixtures);
  const auto moved = gen::temp_dir("cfg");
  fs::copy(kFixtures / "corpus", moved / "corpus", fs::copy_options::recursive);
  for (auto f : {"lexicon.txt", "weights-v1.txt"}) fs::copy(kFixtures / f, moved / f);
  fs::copy(kFixtures / "training", moved / "training", fs::copy_options::recursive);
  const auto b = parse_run_config(text, moved);
  EXPECT_EQ(a.hash(), b.hash());
  const auto c = parse_run_config(text + "jobs=2\n", kFixtures);
  EXPECT_NE(a.hash(), c.hash());
  EXPECT_EQ(c.jobs, 2u);
}

TEST(RunConfig, Rejections) {
  EXPECT_THROW(parse_run_config("nonsense_key=1\n", {}), ConfigError);
  EXPECT_THROW(parse_run_config("seed=1\nseed=2\n", {}), ConfigError);
  EXPECT_THROW(parse_run_config("seed=abc\n", {}), ConfigError);
  EXPECT_THROW(parse_run_config("just text\n", {}), ConfigError);
  EXPECT_THROW(parse_run_config("lexicon=/no/such/file\n", {}), ConfigError);
  EXPECT_THROW(parse_run_config("threshold=1.0\n", {}), ConfigError);
  EXPECT_THROW(parse_run_config("window_minutes=0\n", {}), ConfigError);
  EXPECT_THROW(parse_run_config("backend=carrier-pigeon\n", {}), ConfigError);
  EXPECT_THROW(parse_run_config("abuse_time_predicate=vibes\n", {}), ConfigError);
  EXPECT_THROW(parse_run_config("max_batch=0\n", {}), ConfigError);
  const auto c = parse_run_config("# comment\n\nabuse_time_predicate=classifier\nbackend=remote\nmax_batch=8\n", {});
  EXPECT_EQ(c.abuse_time, AbuseTimePredicate::ClassifierPositive);
  EXPECT_EQ(c.backend.kind, BackendKind::RemoteService);
  EXPECT_EQ(c.backend.max_batch, 8u);
}

TEST(RunConfig, ProvenanceLine) {
  const auto c = load_run_config(kFixtures / "fixture.cfg");
  EXPECT_EQ(provenance_line(c),
            "# config_hash=" + c.hash() + " lexicon=lexicon@fixture-1 weights=weights-v1 backend=native");
}

TEST(Datasets, SentimentAliasesAndSkips) {
  const auto dir = gen::temp_dir("ds");
  write_file(dir / "s.csv",
             "Tweet,Optimistic,Gratitude,Empathetic,Pessimistic,Anxious,Sad,Annoyed,Denial,Official report,Joking\n"
             "good day,1,0,0,0,0,0,0,0,0,0\n"
             "\"so, bad\",0,0,0,1,0,1,0,0,0,0\n"
             "short row,1\n"
             "bad label,2,0,0,0,0,0,0,0,0,0\n"
             "\xE2\x99\xAA,1,0,0,0,0,0,0,0,0,0\n");
  const auto ds = load_sentiment_dataset(dir / "s.csv");
  ASSERT_EQ(ds.texts.size(), 2u);
  EXPECT_EQ(ds.texts[1], "so, bad");
  EXPECT_EQ(ds.labels(1, index_of(SentimentLabel::Sad)), 1);
  EXPECT_EQ(ds.labels(0, index_of(SentimentLabel::Thankful)), 0);
  EXPECT_EQ(ds.warnings.size(), 3u);
  write_file(dir / "missing.csv", "text,optimistic\nx,1\n");
  EXPECT_THROW(load_sentiment_dataset(dir / "missing.csv"), FormatError);
  EXPECT_THROW(load_sentiment_dataset(dir / "absent.csv"), IoError);
}

TEST(Datasets, AbuseLabels) {
  const auto dir = gen::temp_dir("ds");
  write_file(dir / "a.csv", "text,label\nyou idiot,abusive\nnice one,not\nshut up,1\nhello,0\n");
  const auto ds = load_abuse_dataset(dir / "a.csv");
  EXPECT_EQ(ds.labels, (std::vector<std::uint8_t>{1, 0, 1, 0}));
  write_file(dir / "b.csv", "text,label\nx,maybe\n");
  EXPECT_THROW(load_abuse_dataset(dir / "b.csv"), FormatError);
  write_file(dir / "c.csv", "body,label\nx,1\n");
  EXPECT_THROW(load_abuse_dataset(dir / "c.csv"), FormatError);
}

TEST(Train, DeterministicArtifacts) {
  auto config = fixture_config(gen::temp_dir("train-out"));
  config.train.epochs = 5;
  const auto a = gen::temp_dir("train-a"), b = gen::temp_dir("train-b");
  for (auto task : {Task::Sentiment, Task::Abuse}) {
    config.models_dir = a;
    const auto first = cmd_train(config, task);
    config.models_dir = b;
    const auto second = cmd_train(config, task);
    EXPECT_EQ(first.split, second.split);
    EXPECT_EQ(first.baselines[0].model, second.baselines[0].model);
  }
  EXPECT_TRUE(e2e::compare_trees(a, b).empty());
  const auto files = e2e::list_files(a);
  EXPECT_EQ(files, (std::vector<std::string>{"abuse.vocab", "abuse_lr.model", "abuse_metrics.csv", "abuse_report.json",
                                             "abuse_svm.model", "sentiment.vocab", "sentiment_lr.model",
                                             "sentiment_metrics.csv", "sentiment_report.json",
                                             "sentiment_svm.model"}));
  const auto metrics = read_file(a / "sentiment_metrics.csv");
  EXPECT_NE(metrics.find("\nModel,Acc.,Prec.,Rec.,Micro F1,Ham. Loss\nTF-IDF + LR,"), std::string::npos);
  const auto report = nlohmann::json::parse(read_file(a / "abuse_report.json"));
  EXPECT_EQ(report["models"].size(), 2u);
  EXPECT_EQ(report["training"]["epochs"], 5);
}

TEST(Train, VocabularyFitOnTrainingSplitOnly) {
  auto config = fixture_config(gen::temp_dir("train-out"));
  config.train.epochs = 1;
  config.models_dir = gen::temp_dir("train-v");
  const auto outcome = cmd_train(config, Task::Abuse);
  const auto ds = load_abuse_dataset(*config.abuse_data);
  std::vector<TokenSequence> train_docs;
  for (auto i : outcome.split.train) train_docs.push_back(classifier_tokens(ds.texts[i], nullptr));
  EXPECT_EQ(outcome.vocabulary, fit_vocabulary(train_docs));
  EXPECT_EQ(outcome.vocabulary.corpus_size(), outcome.split.train.size());
}

TEST(Train, MissingData) {
  auto config = fixture_config(gen::temp_dir("x"));
  config.sentiment_data.reset();
  EXPECT_THROW(cmd_train(config, Task::Sentiment), ConfigError);
}

TEST(Ingest, EmptyCorpus) {
  const auto dir = scratch_corpus("empty", kHeader, {});
  const auto config = load_run_config(dir / "run.cfg");
  const auto m = cmd_ingest(config);
  EXPECT_TRUE(m.films.empty());
  const auto json = nlohmann::json::parse(read_file(config.output_dir / "manifest.json"));
  EXPECT_EQ(json["film_count"], 0);
  EXPECT_TRUE(json["films"].empty());
}

TEST(Ingest, MissingOrphanAndBrokenFiles) {
  const auto dir = scratch_corpus("odd",
                                  std::string(kHeader) + "a,A,1990,oscar,Drama\nb,B,1991,oscar,Drama\n"
                                                         "c,C,1992,blockbuster,Comedy\n",
                                  {{"a.srt", "1\n00:00:01,000 --> 00:00:02,000\nhello\n"},
                                   {"c.srt", "garbage only\n"},
                                   {"zz.srt", ""},
                                   {"notes.txt", "x"}});
  const auto m = scan_corpus(load_run_config(dir / "run.cfg"));
  ASSERT_EQ(m.films.size(), 1u);
  EXPECT_EQ(m.films[0].cues, 1u);
  EXPECT_EQ(m.missing_subtitles, (std::vector<std::string>{"b"}));
  ASSERT_EQ(m.unparseable_subtitles.size(), 1u);
  EXPECT_TRUE(m.unparseable_subtitles[0].starts_with("c: "));
  EXPECT_EQ(m.orphan_subtitles, (std::vector<std::string>{"zz"}));
}

TEST(Ingest, ManifestTimestampIsLineTwo) {
  CorpusManifest m;
  const auto text = manifest_json(m, "2000-01-01T00:00:00Z", "# config_hash=0");
  EXPECT_TRUE(text.starts_with("{\n  \"generated_at\": \"2000-01-01T00:00:00Z\",\n"));
  EXPECT_EQ(nlohmann::json::parse(text)["provenance"], "config_hash=0");
}

TEST(Analyze, UnknownFilm) {
  auto config = fixture_config(gen::temp_dir("unknown"));
  EXPECT_THROW(cmd_analyze(config, AnalyzeScope::Film, "no-such-film"), std::invalid_argument);
}

TEST(Analyze, ZeroCueFilm) {
  const auto dir = scratch_corpus("zero", std::string(kHeader) + "e,E,1990,oscar,Drama\nm,M,1990,oscar,Drama\n",
                                  {{"e.srt", ""}, {"m.srt", "1\n00:00:01,000 --> 00:00:02,000\n\xE2\x99\xAA \xE2\x99\xAA\n"}});
  const auto config = load_run_config(dir / "run.cfg");
  EXPECT_THROW(cmd_analyze(config, AnalyzeScope::Film, "e"), NoScoredContentError);
  EXPECT_THROW(cmd_analyze(config, AnalyzeScope::Film, "m"), NoScoredContentError);
  // The corpus run tolerates both and says so.
  const auto report = cmd_analyze(config, AnalyzeScope::Corpus);
  EXPECT_EQ(std::count_if(report.warnings.begin(), report.warnings.end(),
                          [](const std::string& w) { return w.find("no scored cues") != std::string::npos; }),
            2);
}

TEST(Analyze, FilmTableSchema) {
  const auto out = gen::temp_dir("film");
  const auto config = fixture_config(out);
  const auto report = cmd_analyze(config, AnalyzeScope::Film, "the-departed");
  ASSERT_EQ(report.tables.size(), 2u);
  EXPECT_EQ(report.tables[1].name, "cues");
  EXPECT_EQ(report.tables[1].columns,
            (std::vector<std::string>{"Start Time", "End Time", "Text", "Sentiment", "Abusive Level"}));
  const auto& rows = report.tables[1].rows;
  const auto hit = std::find_if(rows.begin(), rows.end(), [](const auto& r) { return r[0] == "00:27:32,684"; });
  ASSERT_NE(hit, rows.end());
  EXPECT_EQ((*hit)[1], "00:27:34,777");
  for (const auto& r : rows) {
    EXPECT_TRUE(r[3] == "Positive" || r[3] == "Negative" || r[3] == "Neutral");
    EXPECT_TRUE(r[4] == "Low" || r[4] == "Medium" || r[4] == "High");
  }
}

TEST(Analyze, AbusiveTimeFromLexiconHits) {
  const auto out = gen::temp_dir("time");
  auto config = fixture_config(out);
  cmd_analyze(config, AnalyzeScope::Corpus);
  const auto scores = ReportTable::from_csv("s", read_file(out / "report" / "film_scores.csv").substr(
                                                     read_file(out / "report" / "film_scores.csv").find('\n') + 1));
  const auto departed = std::find_if(scores.rows.begin(), scores.rows.end(),
                                     [](const auto& r) { return r[0] == "the-departed"; });
  ASSERT_NE(departed, scores.rows.end());
  // Lexicon hits fall in three cues: 2,600 + 2,093 + 2,200 ms.
  EXPECT_EQ((*departed)[8], "6.893");
}

TEST(Analyze, RemoteBackendThroughStub) {
  class Constant : public Transport {
   public:
    std::optional<HttpResult> post(const std::string& path, const std::string& body,
                                   std::chrono::milliseconds) override {
      const auto n = nlohmann::json::parse(body)["texts"].size();
      nlohmann::json out{{"model", "const"}};
      if (path == "/v1/abuse") {
        out["probs"] = std::vector<double>(n, 0.9);
      } else {
        out["labels"] = std::vector<std::string>(kSentimentLabelNames.begin(), kSentimentLabelNames.end());
        std::vector<double> row(10, 0.0);
        row[index_of(SentimentLabel::Joking)] = 1.0;
        out["probs"] = std::vector<std::vector<double>>(n, row);
      }
      return HttpResult{200, out.dump()};
    }
    std::optional<HttpResult> get(const std::string&, std::chrono::milliseconds) override { return std::nullopt; }
  };
  const auto out = gen::temp_dir("remote");
  auto config = fixture_config(out);
  config.backend.kind = BackendKind::RemoteService;
  const auto report = cmd_analyze(config, AnalyzeScope::Film, "psycho", std::make_shared<Constant>());
  for (const auto& r : report.tables[1].rows) {
    EXPECT_EQ(r[3], "Positive");
    EXPECT_EQ(r[4], "High");
  }
  const auto json = nlohmann::json::parse(read_file(out / "films" / "psycho" / "report.json"));
  EXPECT_EQ(json["inference"]["sentiment_model"], "const");
  EXPECT_EQ(json["inference"]["backend"], "remote");
}

TEST(Analyze, BinarySentimentValues) {
  const auto out = gen::temp_dir("binary");
  auto config = fixture_config(out);
  config.binary_sentiment_values = true;
  cmd_analyze(config, AnalyzeScope::Film, "psycho");
  const auto json = nlohmann::json::parse(read_file(out / "films" / "psycho" / "report.json"));
  // Every cue score is then a sum of whole weights, and so is their mean
  // times the cue count.
  const double score = json["sentiment_score"].get<double>();
  const double cues = static_cast<double>(json["tables"]["cues"]["rows"].size());
  EXPECT_NEAR(score * cues, std::round(score * cues), 1e-9);
  EXPECT_THROW(parse_run_config("sentiment_values=maybe\n", {}), ConfigError);
  EXPECT_TRUE(parse_run_config("sentiment_values=binary\n", {}).binary_sentiment_values);
}

TEST(Analyze, ParallelJobsMatchSerial) {
  const auto serial = gen::temp_dir("jobs1"), parallel = gen::temp_dir("jobs3");
  auto config = fixture_config(serial);
  cmd_analyze(config, AnalyzeScope::Corpus);
  config.output_dir = parallel;
  config.jobs = 3;
  cmd_analyze(config, AnalyzeScope::Corpus);
  EXPECT_EQ(e2e::compare_trees(serial, parallel), std::vector<std::string>{});
}

TEST(Export, RoundTripsBundleTables) {
  const auto out = gen::temp_dir("export");
  const auto config = fixture_config(out);
  EXPECT_THROW(cmd_export(config, out / "x"), IoError);
  cmd_analyze(config, AnalyzeScope::Corpus);
  const auto written = cmd_export(config, out / "exported");
  EXPECT_FALSE(written.empty());
  for (const auto& p : written) {
    EXPECT_EQ(read_file(p), read_file(out / "report" / p.filename())) << p;
  }
}

TEST(EndToEnd, FixtureMatchesGolden) {
  const auto out = gen::temp_dir("e2e");
  e2e::run_fixture(out);
  if (e2e::maybe_update_golden(out)) GTEST_SKIP() << "golden files regenerated";
  EXPECT_EQ(e2e::compare_trees(e2e::golden_dir(), out), std::vector<std::string>{});
}
