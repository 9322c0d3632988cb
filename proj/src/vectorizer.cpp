#include "cinesent/vectorizer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>

#include "cinesent/errors.hpp"
#include "cinesent/util.hpp"

namespace cinesent {

double SparseVector::dot(std::span<const double> dense) const {
  double s = 0.0;
  for (std::size_t k = 0; k < indices.size(); ++k) s += values[k] * dense[indices[k]];
  return s;
}

double SparseVector::norm() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return std::sqrt(s);
}

Vocabulary::Vocabulary(VectorizerConfig config, std::size_t corpus_size, std::vector<std::string> terms,
                       std::vector<std::uint32_t> document_frequency)
    : config_(config), corpus_size_(corpus_size), terms_(std::move(terms)), df_(std::move(document_frequency)) {
  if (terms_.size() != df_.size()) throw std::invalid_argument("vocabulary terms and frequencies differ in length");
  lookup_.reserve(terms_.size());
  for (std::uint32_t i = 0; i < terms_.size(); ++i) {
    if (df_[i] == 0) throw FormatError("vocabulary term '" + terms_[i] + "' has zero document frequency");
    if (!lookup_.emplace(terms_[i], i).second) throw FormatError("duplicate vocabulary term '" + terms_[i] + "'");
  }
}

std::optional<std::uint32_t> Vocabulary::index_of(const std::string& term) const {
  const auto it = lookup_.find(term);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

double Vocabulary::idf(std::size_t index) const {
  return std::log((1.0 + static_cast<double>(corpus_size_)) / (1.0 + static_cast<double>(df_.at(index)))) + 1.0;
}

std::vector<std::string> document_terms(const TokenSequence& doc, int ngram_min, int ngram_max) {
  std::vector<std::string> terms;
  for (int n = ngram_min; n <= ngram_max; ++n) {
    const auto un = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i + un <= doc.size(); ++i) {
      std::string t = doc[i];
      for (std::size_t k = 1; k < un; ++k) {
        t += ' ';
        t += doc[i + k];
      }
      terms.push_back(std::move(t));
    }
  }
  return terms;
}

Vocabulary fit_vocabulary(std::span<const TokenSequence> docs, const VectorizerConfig& config) {
  if (docs.empty()) throw std::invalid_argument("cannot fit a vocabulary on an empty training set");
  if (config.ngram_min < 1 || config.ngram_max < config.ngram_min) {
    throw std::invalid_argument("invalid n-gram range");
  }
  struct Stats {
    std::uint64_t tf = 0;
    std::uint32_t df = 0;
    std::size_t last_doc = static_cast<std::size_t>(-1);
  };
  std::unordered_map<std::string, Stats> stats;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (auto& term : document_terms(docs[d], config.ngram_min, config.ngram_max)) {
      auto& s = stats[std::move(term)];
      ++s.tf;
      if (s.last_doc != d) {
        ++s.df;
        s.last_doc = d;
      }
    }
  }
  std::vector<std::pair<const std::string*, const Stats*>> ranked;
  ranked.reserve(stats.size());
  for (const auto& [term, s] : stats) ranked.emplace_back(&term, &s);
  const std::size_t keep = std::min(config.max_features, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep), ranked.end(),
                    [](const auto& a, const auto& b) {
                      return a.second->tf != b.second->tf ? a.second->tf > b.second->tf : *a.first < *b.first;
                    });
  ranked.resize(keep);
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return *a.first < *b.first; });

  std::vector<std::string> terms;
  std::vector<std::uint32_t> df;
  terms.reserve(keep);
  df.reserve(keep);
  for (const auto& [term, s] : ranked) {
    terms.push_back(*term);
    df.push_back(s->df);
  }
  return Vocabulary(config, docs.size(), std::move(terms), std::move(df));
}

SparseVector transform(const TokenSequence& doc, const Vocabulary& vocab) {
  const auto& cfg = vocab.config();
  std::map<std::uint32_t, double> tf;
  for (const auto& term : document_terms(doc, cfg.ngram_min, cfg.ngram_max)) {
    if (const auto idx = vocab.index_of(term)) tf[*idx] += 1.0;
  }
  SparseVector v;
  v.dim = vocab.size();
  v.indices.reserve(tf.size());
  v.values.reserve(tf.size());
  double sq = 0.0;
  for (const auto& [idx, count] : tf) {
    const double w = count * vocab.idf(idx);
    v.indices.push_back(idx);
    v.values.push_back(w);
    sq += w * w;
  }
  if (sq > 0.0) {
    const double inv = 1.0 / std::sqrt(sq);
    for (double& w : v.values) w *= inv;
  }
  return v;
}

std::vector<SparseVector> transform_all(std::span<const TokenSequence> docs, const Vocabulary& vocab) {
  std::vector<SparseVector> out;
  out.reserve(docs.size());
  for (const auto& d : docs) out.push_back(transform(d, vocab));
  return out;
}

namespace {
constexpr std::string_view kVocabMagic = "# cinesent vocabulary v1";

std::size_t parse_size(std::string_view s, const char* what) {
  std::size_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) throw FormatError(std::string("malformed ") + what);
  return v;
}
}  // namespace

std::string serialize_vocabulary(const Vocabulary& vocab) {
  std::string out(kVocabMagic);
  out += "\ncorpus_size=" + std::to_string(vocab.corpus_size());
  out += "\nmax_features=" + std::to_string(vocab.config().max_features);
  out += "\nngram_range=" + std::to_string(vocab.config().ngram_min) + "," + std::to_string(vocab.config().ngram_max);
  out += '\n';
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    out += vocab.terms()[i];
    out += '\t';
    out += std::to_string(i);
    out += '\t';
    out += std::to_string(vocab.document_frequency(i));
    out += '\n';
  }
  return out;
}

Vocabulary parse_vocabulary(std::string_view text) {
  auto lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.size() < 4 || lines[0] != kVocabMagic) throw FormatError("not a cinesent vocabulary file");
  auto value_of = [&](std::size_t i, std::string_view key) {
    if (!lines[i].starts_with(key) || lines[i].size() <= key.size() || lines[i][key.size()] != '=') {
      throw FormatError("vocabulary header missing " + std::string(key));
    }
    return lines[i].substr(key.size() + 1);
  };
  VectorizerConfig cfg;
  const std::size_t corpus_size = parse_size(value_of(1, "corpus_size"), "corpus_size");
  cfg.max_features = parse_size(value_of(2, "max_features"), "max_features");
  const auto range = split(value_of(3, "ngram_range"), ',');
  if (range.size() != 2) throw FormatError("malformed ngram_range");
  cfg.ngram_min = static_cast<int>(parse_size(range[0], "ngram_range"));
  cfg.ngram_max = static_cast<int>(parse_size(range[1], "ngram_range"));

  std::vector<std::string> terms;
  std::vector<std::uint32_t> df;
  for (std::size_t i = 4; i < lines.size(); ++i) {
    const auto cols = split(lines[i], '\t');
    if (cols.size() != 3) throw FormatError("malformed vocabulary line " + std::to_string(i + 1));
    if (parse_size(cols[1], "term index") != terms.size()) {
      throw FormatError("vocabulary indices are not contiguous at line " + std::to_string(i + 1));
    }
    terms.emplace_back(cols[0]);
    df.push_back(static_cast<std::uint32_t>(parse_size(cols[2], "document frequency")));
  }
  return Vocabulary(cfg, corpus_size, std::move(terms), std::move(df));
}

void save_vocabulary(const Vocabulary& vocab, const std::filesystem::path& path) {
  write_file(path, serialize_vocabulary(vocab));
}

Vocabulary load_vocabulary(const std::filesystem::path& path) { return parse_vocabulary(read_file(path)); }

}  // namespace cinesent
