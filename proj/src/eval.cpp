#include "cinesent/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "cinesent/errors.hpp"
#include "cinesent/util.hpp"

namespace cinesent {
namespace {

constexpr std::size_t kSubsets = 3;

std::vector<std::size_t>& subset(SplitAssignment& s, std::size_t k) {
  return k == 0 ? s.train : (k == 1 ? s.validation : s.test);
}

void finish(SplitAssignment& s) {
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.validation.begin(), s.validation.end());
  std::sort(s.test.begin(), s.test.end());
}

// Integer sizes summing to n, largest remainder first (ties to the earlier subset).
std::array<std::size_t, kSubsets> largest_remainder(std::size_t n, const std::array<double, kSubsets>& fractions) {
  std::array<std::size_t, kSubsets> sizes{};
  std::array<double, kSubsets> rem{};
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < kSubsets; ++k) {
    const double exact = fractions[k] * static_cast<double>(n);
    sizes[k] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    rem[k] = exact - static_cast<double>(sizes[k]);
    assigned += sizes[k];
  }
  std::array<std::size_t, kSubsets> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return rem[a] > rem[b]; });
  for (std::size_t i = 0; assigned < n; i = (i + 1) % kSubsets, ++assigned) ++sizes[order[i]];
  return sizes;
}

}  // namespace

void SplitFractions::validate() const {
  for (double f : as_array()) {
    if (!(f > 0.0 && f < 1.0)) throw std::invalid_argument("split fractions must lie in (0, 1)");
  }
  if (std::abs(train + validation + test - 1.0) > 1e-9) {
    throw std::invalid_argument("split fractions must sum to 1");
  }
}

SplitAssignment iterative_stratified_split(const LabelMatrix& Y, const SplitFractions& fractions, std::uint64_t seed) {
  fractions.validate();
  const std::size_t n = Y.rows();
  const std::size_t labels = Y.cols();
  if (n == 0) throw std::invalid_argument("cannot split an empty dataset");
  const auto frac = fractions.as_array();
  std::mt19937_64 rng(seed);

  std::array<double, kSubsets> capacity{};
  for (std::size_t k = 0; k < kSubsets; ++k) capacity[k] = frac[k] * static_cast<double>(n);

  std::vector<std::size_t> positives(labels, 0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t l = 0; l < labels; ++l) positives[l] += Y(r, l);
  }
  std::vector<std::array<double, kSubsets>> demand(labels);
  for (std::size_t l = 0; l < labels; ++l) {
    for (std::size_t k = 0; k < kSubsets; ++k) demand[l][k] = frac[k] * static_cast<double>(positives[l]);
  }

  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  seeded_shuffle(pool, rng);
  std::vector<bool> assigned(n, false);
  std::vector<std::size_t> remaining = positives;
  SplitAssignment out;

  auto place = [&](std::size_t row, std::size_t target) {
    assigned[row] = true;
    subset(out, target).push_back(row);
    capacity[target] -= 1.0;
    for (std::size_t l = 0; l < labels; ++l) {
      if (Y(row, l)) {
        demand[l][target] -= 1.0;
        --remaining[l];
      }
    }
  };
  // Candidates maximising `primary`, then capacity, then a seeded pick.
  auto choose = [&](const std::array<double, kSubsets>* primary) {
    std::array<std::size_t, kSubsets> best{};
    std::size_t count = 0;
    for (std::size_t k = 0; k < kSubsets; ++k) {
      if (count == 0) {
        best[count++] = k;
        continue;
      }
      const std::size_t b = best[0];
      const double pk = primary ? (*primary)[k] : 0.0;
      const double pb = primary ? (*primary)[b] : 0.0;
      if (pk > pb || (pk == pb && capacity[k] > capacity[b])) {
        count = 0;
        best[count++] = k;
      } else if (pk == pb && capacity[k] == capacity[b]) {
        best[count++] = k;
      }
    }
    return count == 1 ? best[0] : best[rng() % count];
  };

  for (;;) {
    std::size_t label = labels;
    for (std::size_t l = 0; l < labels; ++l) {
      if (remaining[l] > 0 && (label == labels || remaining[l] < remaining[label])) label = l;
    }
    if (label == labels) break;
    for (std::size_t row : pool) {
      if (assigned[row] || !Y(row, label)) continue;
      place(row, choose(&demand[label]));
    }
  }
  for (std::size_t row : pool) {
    if (!assigned[row]) place(row, choose(nullptr));
  }
  finish(out);
  return out;
}

SplitAssignment stratified_binary_split(std::span<const std::uint8_t> y, const SplitFractions& fractions,
                                        std::uint64_t seed) {
  fractions.validate();
  if (y.empty()) throw std::invalid_argument("cannot split an empty dataset");
  std::mt19937_64 rng(seed);
  SplitAssignment out;
  for (std::uint8_t cls : {std::uint8_t{0}, std::uint8_t{1}}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if ((y[i] != 0) == (cls != 0)) members.push_back(i);
    }
    if (members.empty()) continue;
    if (members.size() < kSubsets) {
      out.warnings.push_back("class " + std::to_string(cls) + " has only " + std::to_string(members.size()) +
                             " examples; assigned by largest remainder");
    }
    seeded_shuffle(members, rng);
    const auto sizes = largest_remainder(members.size(), fractions.as_array());
    std::size_t at = 0;
    for (std::size_t k = 0; k < kSubsets; ++k) {
      for (std::size_t c = 0; c < sizes[k]; ++c) subset(out, k).push_back(members[at++]);
    }
  }
  finish(out);
  return out;
}

double f1_score(double precision, double recall) {
  return precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
}

MultilabelMetrics compute_multilabel_metrics(const LabelMatrix& truth, const LabelMatrix& predicted) {
  if (truth.rows() != predicted.rows() || truth.cols() != predicted.cols()) {
    throw DimensionMismatchError("truth and prediction matrices differ in shape");
  }
  std::size_t tp = 0, fp = 0, fn = 0, mismatched = 0, exact = 0;
  for (std::size_t r = 0; r < truth.rows(); ++r) {
    bool row_exact = true;
    for (std::size_t c = 0; c < truth.cols(); ++c) {
      const bool t = truth(r, c) != 0;
      const bool p = predicted(r, c) != 0;
      tp += t && p;
      fp += !t && p;
      fn += t && !p;
      if (t != p) {
        ++mismatched;
        row_exact = false;
      }
    }
    exact += row_exact;
  }
  MultilabelMetrics m;
  const double rows = static_cast<double>(truth.rows());
  const double cells = rows * static_cast<double>(truth.cols());
  m.subset_accuracy = truth.rows() ? static_cast<double>(exact) / rows : 0.0;
  m.hamming_loss = cells > 0 ? static_cast<double>(mismatched) / cells : 0.0;
  m.micro_precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  m.micro_recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  m.micro_f1 = f1_score(m.micro_precision, m.micro_recall);
  return m;
}

BinaryMetrics compute_binary_metrics(std::span<const std::uint8_t> truth, std::span<const std::uint8_t> predicted) {
  if (truth.size() != predicted.size()) throw DimensionMismatchError("truth and prediction lengths differ");
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool t = truth[i] != 0;
    const bool p = predicted[i] != 0;
    tp += t && p;
    fp += !t && p;
    fn += t && !p;
    tn += !t && !p;
  }
  BinaryMetrics m;
  m.accuracy = truth.empty() ? 0.0 : static_cast<double>(tp + tn) / static_cast<double>(truth.size());
  m.precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  m.recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  m.f1 = f1_score(m.precision, m.recall);
  return m;
}

std::string multilabel_csv_header() { return "Model,Acc.,Prec.,Rec.,Micro F1,Ham. Loss\n"; }

std::string multilabel_csv_row(const std::string& model_name, const MultilabelMetrics& m) {
  const std::vector<std::string> row = {model_name,           format_real(m.subset_accuracy, 4),
                                        format_real(m.micro_precision, 4), format_real(m.micro_recall, 4),
                                        format_real(m.micro_f1, 4),        format_real(m.hamming_loss, 4)};
  return csv_row(row);
}

std::string binary_csv_header() { return "Model,Accuracy,Precision,Recall,F1-score\n"; }

std::string binary_csv_row(const std::string& model_name, const BinaryMetrics& m) {
  const std::vector<std::string> row = {model_name, format_real(m.accuracy, 4), format_real(m.precision, 4),
                                        format_real(m.recall, 4), format_real(m.f1, 4)};
  return csv_row(row);
}

}  // namespace cinesent
