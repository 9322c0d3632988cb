// Command-line driver: ingest, train, analyze, export.
#include <iostream>

#include <CLI11.hpp>

#include "cinesent/errors.hpp"
#include "cinesent/report.hpp"

namespace {

int run(int argc, char** argv) {
  CLI::App app{"Subtitle sentiment and abusive-language analysis"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "flat key=value run configuration")->required()->check(CLI::ExistingFile);

  auto* ingest = app.add_subcommand("ingest", "parse the corpus and write manifest.json");

  auto* train = app.add_subcommand("train", "train and evaluate the TF-IDF baselines");
  std::string task = "sentiment";
  train->add_option("--task", task)->check(CLI::IsMember({"sentiment", "abuse"}));

  auto* analyze = app.add_subcommand("analyze", "emit the corpus or per-film report bundle");
  std::string scope = "corpus";
  std::string film_id;
  analyze->add_option("--scope", scope)->check(CLI::IsMember({"corpus", "film"}));
  analyze->add_option("--id", film_id, "film id for --scope film");

  auto* exporter = app.add_subcommand("export", "rewrite the corpus bundle tables as CSV files");
  std::string export_dir;
  exporter->add_option("--to", export_dir, "target directory")->required();

  CLI11_PARSE(app, argc, argv);

  const auto config = cinesent::load_run_config(config_path);

  if (*ingest) {
    const auto m = cinesent::cmd_ingest(config);
    std::cout << "ingested " << m.films.size() << " films";
    if (!m.missing_subtitles.empty()) std::cout << ", " << m.missing_subtitles.size() << " without subtitles";
    if (!m.orphan_subtitles.empty()) std::cout << ", " << m.orphan_subtitles.size() << " orphan files";
    std::cout << "\n";
  } else if (*train) {
    const auto out = cinesent::cmd_train(config, task == "abuse" ? cinesent::Task::Abuse : cinesent::Task::Sentiment);
    for (const auto& b : out.baselines) {
      std::cout << b.name << ": ";
      if (b.multilabel) std::cout << "micro-F1 " << b.multilabel->micro_f1 << " hamming " << b.multilabel->hamming_loss;
      if (b.binary) std::cout << "accuracy " << b.binary->accuracy << " F1 " << b.binary->f1;
      std::cout << "\n";
    }
    std::cout << "report: " << out.report_path.string() << "\n";
  } else if (*analyze) {
    if (scope == "film" && film_id.empty()) {
      std::cerr << "--scope film needs --id\n";
      return 2;
    }
    const auto report = cinesent::cmd_analyze(
        config, scope == "film" ? cinesent::AnalyzeScope::Film : cinesent::AnalyzeScope::Corpus, film_id);
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << report.tables.size() << " tables written to " << report.directory.string() << "\n";
  } else if (*exporter) {
    const auto files = cinesent::cmd_export(config, export_dir);
    std::cout << files.size() << " files written to " << export_dir << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const cinesent::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
