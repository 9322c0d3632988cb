#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cinesent/textprep.hpp"

namespace cinesent {

/// Sparse row with strictly increasing indices.
struct SparseVector {
  std::vector<std::uint32_t> indices;
  std::vector<double> values;
  std::size_t dim = 0;

  std::size_t nnz() const noexcept { return indices.size(); }
  double dot(std::span<const double> dense) const;
  double norm() const;
};

struct VectorizerConfig {
  std::size_t max_features = 50'000;
  int ngram_min = 1;
  int ngram_max = 2;

  friend bool operator==(const VectorizerConfig&, const VectorizerConfig&) = default;
};

class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(VectorizerConfig config, std::size_t corpus_size, std::vector<std::string> terms,
             std::vector<std::uint32_t> document_frequency);

  std::size_t size() const noexcept { return terms_.size(); }
  std::size_t corpus_size() const noexcept { return corpus_size_; }
  const VectorizerConfig& config() const noexcept { return config_; }
  const std::vector<std::string>& terms() const noexcept { return terms_; }
  std::uint32_t document_frequency(std::size_t index) const { return df_.at(index); }
  std::optional<std::uint32_t> index_of(const std::string& term) const;

  /// ln((1 + N) / (1 + df)) + 1
  double idf(std::size_t index) const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.config_ == b.config_ && a.corpus_size_ == b.corpus_size_ && a.terms_ == b.terms_ && a.df_ == b.df_;
  }

 private:
  VectorizerConfig config_;
  std::size_t corpus_size_ = 0;
  std::vector<std::string> terms_;  // sorted; position is the feature index
  std::vector<std::uint32_t> df_;
  std::unordered_map<std::string, std::uint32_t> lookup_;
};

/// Unigram..ngram_max terms (joined by spaces) of one document, in order.
std::vector<std::string> document_terms(const TokenSequence& doc, int ngram_min, int ngram_max);

/// Keeps the `max_features` terms with the highest total term frequency
/// (ties: lexicographically smaller term first) and numbers them in
/// lexicographic order. Fit on training documents only.
Vocabulary fit_vocabulary(std::span<const TokenSequence> docs, const VectorizerConfig& config = {});

/// Raw-count tf times smoothed idf, L2-normalised. Unknown terms are ignored.
SparseVector transform(const TokenSequence& doc, const Vocabulary& vocab);
std::vector<SparseVector> transform_all(std::span<const TokenSequence> docs, const Vocabulary& vocab);

std::string serialize_vocabulary(const Vocabulary& vocab);
Vocabulary parse_vocabulary(std::string_view text);
void save_vocabulary(const Vocabulary& vocab, const std::filesystem::path& path);
Vocabulary load_vocabulary(const std::filesystem::path& path);

}  // namespace cinesent
