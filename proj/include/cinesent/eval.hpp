#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cinesent/labels.hpp"

namespace cinesent {

struct SplitFractions {
  double train = 0.70;
  double validation = 0.10;
  double test = 0.20;

  std::array<double, 3> as_array() const { return {train, validation, test}; }
  void validate() const;
};

struct SplitAssignment {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
  std::vector<std::string> warnings;

  std::size_t size() const noexcept { return train.size() + validation.size() + test.size(); }
  friend bool operator==(const SplitAssignment& a, const SplitAssignment& b) {
    return a.train == b.train && a.validation == b.validation && a.test == b.test;
  }
};

inline constexpr std::uint64_t kDefaultSeed = 42;

/// Greedy iterative multi-label stratification. The label with the fewest
/// unassigned positives is handled first; each of its examples goes to the
/// subset with the largest outstanding demand for that label, then the
/// largest outstanding overall capacity, then a seeded draw.
SplitAssignment iterative_stratified_split(const LabelMatrix& Y, const SplitFractions& fractions = {},
                                           std::uint64_t seed = kDefaultSeed);

/// Per-class proportional split with largest-remainder rounding.
SplitAssignment stratified_binary_split(std::span<const std::uint8_t> y, const SplitFractions& fractions = {},
                                        std::uint64_t seed = kDefaultSeed);

struct MultilabelMetrics {
  double subset_accuracy = 0.0;
  double micro_precision = 0.0;
  double micro_recall = 0.0;
  double micro_f1 = 0.0;
  double hamming_loss = 0.0;
};

struct BinaryMetrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

MultilabelMetrics compute_multilabel_metrics(const LabelMatrix& truth, const LabelMatrix& predicted);
BinaryMetrics compute_binary_metrics(std::span<const std::uint8_t> truth, std::span<const std::uint8_t> predicted);

/// Harmonic mean, 0 when both inputs are 0.
double f1_score(double precision, double recall);

std::string multilabel_csv_header();
std::string multilabel_csv_row(const std::string& model_name, const MultilabelMetrics& m);
std::string binary_csv_header();
std::string binary_csv_row(const std::string& model_name, const BinaryMetrics& m);

}  // namespace cinesent
