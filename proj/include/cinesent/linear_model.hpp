#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cinesent/labels.hpp"
#include "cinesent/vectorizer.hpp"

namespace cinesent {

enum class LossKind { Logistic, Hinge };

std::string_view to_string(LossKind kind);
LossKind parse_loss_kind(std::string_view s);

struct TrainConfig {
  double learning_rate = 8.0;
  std::size_t epochs = 50;
  std::size_t batch_size = 64;
  double l2 = 1e-4;
  std::uint64_t seed = 42;
  bool shuffle = true;

  void validate() const;
};

/// One-vs-rest linear scorer: L rows of V weights plus L biases.
class LinearModel {
 public:
  LinearModel() = default;
  LinearModel(LossKind loss, std::size_t labels, std::size_t dim, double l2);

  LossKind loss() const noexcept { return loss_; }
  std::size_t labels() const noexcept { return labels_; }
  std::size_t dim() const noexcept { return dim_; }
  double l2() const noexcept { return l2_; }

  std::span<const double> weights(std::size_t label) const { return {weights_.data() + label * dim_, dim_}; }
  std::span<double> weights(std::size_t label) { return {weights_.data() + label * dim_, dim_}; }
  double bias(std::size_t label) const { return bias_.at(label); }
  double& bias(std::size_t label) { return bias_.at(label); }

  friend bool operator==(const LinearModel&, const LinearModel&) = default;

 private:
  LossKind loss_ = LossKind::Logistic;
  std::size_t labels_ = 0;
  std::size_t dim_ = 0;
  double l2_ = 0.0;
  std::vector<double> weights_;
  std::vector<double> bias_;
};

// Per-example loss and its derivative with respect to the score.
// Logistic: binary cross-entropy on sigmoid(score). Hinge: max(0, 1 - y*score)
// with y in {-1, +1}; the derivative at the kink is taken as 0.
double example_loss(LossKind kind, bool positive, double score);
double example_loss_derivative(LossKind kind, bool positive, double score);

double sigmoid(double score);

/// Mean example loss + (l2 / 2) * ||w||^2 for one label column. The bias is
/// not regularised.
double objective(std::span<const SparseVector> X, std::span<const std::uint8_t> y, std::span<const double> w,
                 double bias, LossKind kind, double l2);

struct ObjectiveGradient {
  std::vector<double> weights;
  double bias = 0.0;
};

ObjectiveGradient objective_gradient(std::span<const SparseVector> X, std::span<const std::uint8_t> y,
                                     std::span<const double> w, double bias, LossKind kind, double l2);

struct TrainResult {
  LinearModel model;
  /// Objective averaged over labels: entry 0 before training, entry e after
  /// epoch e.
  std::vector<double> objective_history;
};

/// Seeded mini-batch proximal gradient descent, one independent column per
/// label. Bitwise deterministic for identical inputs.
///
/// Throws DimensionMismatchError when X and Y disagree and
/// TrainingDivergedError if the objective stops being finite.
TrainResult train(std::span<const SparseVector> X, const LabelMatrix& Y, LossKind kind, const TrainConfig& config);

std::vector<double> decision_scores(const LinearModel& model, const SparseVector& x);

/// Logistic models only; throws UnsupportedForLossError for hinge models.
std::vector<double> predict_proba(const LinearModel& model, const SparseVector& x);

/// Logistic: probability >= threshold. Hinge: score >= 0.
std::vector<std::uint8_t> predict_labels(const LinearModel& model, const SparseVector& x, double threshold = 0.5);
LabelMatrix predict_all(const LinearModel& model, std::span<const SparseVector> X, double threshold = 0.5);

std::string serialize_model(const LinearModel& model);
LinearModel parse_model(std::string_view text);
void save_model(const LinearModel& model, const std::filesystem::path& path);
LinearModel load_model(const std::filesystem::path& path);

}  // namespace cinesent
