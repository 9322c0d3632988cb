#include "cinesent/linear_model.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <random>

#include "cinesent/errors.hpp"
#include "cinesent/util.hpp"

namespace cinesent {
namespace {

double softplus(double t) { return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

void check_dims(std::span<const SparseVector> X, std::size_t rows) {
  if (X.size() != rows) {
    throw DimensionMismatchError("feature rows (" + std::to_string(X.size()) + ") and label rows (" +
                                 std::to_string(rows) + ") differ");
  }
}

void check_input(const LinearModel& model, const SparseVector& x) {
  if (x.dim != model.dim()) {
    throw DimensionMismatchError("input dimension " + std::to_string(x.dim) + " does not match model dimension " +
                                 std::to_string(model.dim()));
  }
}

// Objective for w = scale * v without materialising w.
double scaled_objective(std::span<const SparseVector> X, std::span<const std::uint8_t> y, std::span<const double> v,
                        double scale, double bias, LossKind kind, double l2) {
  double loss = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) loss += example_loss(kind, y[i] != 0, scale * X[i].dot(v) + bias);
  double sq = 0.0;
  for (double vi : v) sq += vi * vi;
  const double mean = X.empty() ? 0.0 : loss / static_cast<double>(X.size());
  return mean + 0.5 * l2 * scale * scale * sq;
}

}  // namespace

std::string_view to_string(LossKind kind) { return kind == LossKind::Logistic ? "logistic" : "hinge"; }

LossKind parse_loss_kind(std::string_view s) {
  const auto v = to_lower_ascii(trim(s));
  if (v == "logistic" || v == "lr") return LossKind::Logistic;
  if (v == "hinge" || v == "svm") return LossKind::Hinge;
  throw ConfigError("unknown loss kind '" + std::string(s) + "'");
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw ConfigError("learning rate must be > 0");
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (batch_size < 1) throw ConfigError("batch size must be >= 1");
  if (!(l2 >= 0.0) || !std::isfinite(l2)) throw ConfigError("l2 must be >= 0");
}

LinearModel::LinearModel(LossKind loss, std::size_t labels, std::size_t dim, double l2)
    : loss_(loss), labels_(labels), dim_(dim), l2_(l2), weights_(labels * dim, 0.0), bias_(labels, 0.0) {
  if (labels < 1) throw std::invalid_argument("a linear model needs at least one label");
}

double sigmoid(double score) {
  if (score >= 0.0) return 1.0 / (1.0 + std::exp(-score));
  const double e = std::exp(score);
  return e / (1.0 + e);
}

double example_loss(LossKind kind, bool positive, double score) {
  if (kind == LossKind::Logistic) return positive ? softplus(-score) : softplus(score);
  const double y = positive ? 1.0 : -1.0;
  return std::max(0.0, 1.0 - y * score);
}

double example_loss_derivative(LossKind kind, bool positive, double score) {
  if (kind == LossKind::Logistic) return sigmoid(score) - (positive ? 1.0 : 0.0);
  const double y = positive ? 1.0 : -1.0;
  return y * score < 1.0 ? -y : 0.0;
}

double objective(std::span<const SparseVector> X, std::span<const std::uint8_t> y, std::span<const double> w,
                 double bias, LossKind kind, double l2) {
  check_dims(X, y.size());
  return scaled_objective(X, y, w, 1.0, bias, kind, l2);
}

ObjectiveGradient objective_gradient(std::span<const SparseVector> X, std::span<const std::uint8_t> y,
                                     std::span<const double> w, double bias, LossKind kind, double l2) {
  check_dims(X, y.size());
  ObjectiveGradient g;
  g.weights.assign(w.size(), 0.0);
  const double inv_n = X.empty() ? 0.0 : 1.0 / static_cast<double>(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double r = example_loss_derivative(kind, y[i] != 0, X[i].dot(w) + bias) * inv_n;
    for (std::size_t k = 0; k < X[i].nnz(); ++k) g.weights[X[i].indices[k]] += r * X[i].values[k];
    g.bias += r;
  }
  for (std::size_t j = 0; j < w.size(); ++j) g.weights[j] += l2 * w[j];
  return g;
}

TrainResult train(std::span<const SparseVector> X, const LabelMatrix& Y, LossKind kind, const TrainConfig& config) {
  config.validate();
  check_dims(X, Y.rows());
  if (Y.cols() < 1) throw DimensionMismatchError("label matrix has no columns");
  const std::size_t dim = X.empty() ? 0 : X.front().dim;
  for (const auto& x : X) {
    if (x.dim != dim) throw DimensionMismatchError("feature rows have inconsistent dimensionality");
  }
  for (std::size_t r = 0; r < Y.rows(); ++r) {
    for (auto v : Y.row(r)) {
      if (v > 1) throw std::invalid_argument("labels must be 0 or 1");
    }
  }

  const std::size_t n = X.size();
  const std::size_t labels = Y.cols();
  TrainResult result{LinearModel(kind, labels, dim, config.l2), std::vector<double>(config.epochs + 1, 0.0)};
  const double lr = config.learning_rate;
  const double shrink = 1.0 / (1.0 + lr * config.l2);

  std::vector<double> residual(std::min(config.batch_size, std::max<std::size_t>(n, 1)));
  for (std::size_t label = 0; label < labels; ++label) {
    const std::vector<std::uint8_t> y = Y.column(label);
    // w = scale * v keeps the regularisation step O(1) per batch.
    std::vector<double> v(dim, 0.0);
    double scale = 1.0;
    double bias = 0.0;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(config.seed);

    result.objective_history[0] += scaled_objective(X, y, v, scale, bias, kind, config.l2);
    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
      if (config.shuffle) seeded_shuffle(order, rng);
      for (std::size_t start = 0; start < n; start += config.batch_size) {
        const std::size_t end = std::min(n, start + config.batch_size);
        const double batch = static_cast<double>(end - start);
        double bias_grad = 0.0;
        for (std::size_t k = start; k < end; ++k) {
          const auto& x = X[order[k]];
          const double r = example_loss_derivative(kind, y[order[k]] != 0, scale * x.dot(v) + bias);
          residual[k - start] = r;
          bias_grad += r;
        }
        // Proximal L2 step: w <- (w - lr * g) / (1 + lr * l2).
        const double step = lr / (batch * scale);
        for (std::size_t k = start; k < end; ++k) {
          const auto& x = X[order[k]];
          const double coef = step * residual[k - start];
          if (coef == 0.0) continue;
          for (std::size_t t = 0; t < x.nnz(); ++t) v[x.indices[t]] -= coef * x.values[t];
        }
        scale *= shrink;
        bias -= lr * bias_grad / batch;
        if (scale < 1e-9) {
          for (double& vi : v) vi *= scale;
          scale = 1.0;
        }
      }
      const double obj = scaled_objective(X, y, v, scale, bias, kind, config.l2);
      if (!std::isfinite(obj)) {
        throw TrainingDivergedError("training objective became non-finite for label " + std::to_string(label) +
                                        " at epoch " + std::to_string(epoch),
                                    epoch);
      }
      result.objective_history[epoch] += obj;
    }
    auto w = result.model.weights(label);
    for (std::size_t j = 0; j < dim; ++j) w[j] = scale * v[j];
    result.model.bias(label) = bias;
  }
  for (double& h : result.objective_history) h /= static_cast<double>(labels);
  return result;
}

std::vector<double> decision_scores(const LinearModel& model, const SparseVector& x) {
  check_input(model, x);
  std::vector<double> s(model.labels());
  for (std::size_t l = 0; l < model.labels(); ++l) s[l] = x.dot(model.weights(l)) + model.bias(l);
  return s;
}

std::vector<double> predict_proba(const LinearModel& model, const SparseVector& x) {
  if (model.loss() != LossKind::Logistic) {
    throw UnsupportedForLossError("probabilities are only available for logistic models");
  }
  auto s = decision_scores(model, x);
  for (double& v : s) v = sigmoid(v);
  return s;
}

std::vector<std::uint8_t> predict_labels(const LinearModel& model, const SparseVector& x, double threshold) {
  const auto s = decision_scores(model, x);
  std::vector<std::uint8_t> out(s.size());
  for (std::size_t l = 0; l < s.size(); ++l) {
    out[l] = model.loss() == LossKind::Logistic ? sigmoid(s[l]) >= threshold : s[l] >= 0.0;
  }
  return out;
}

LabelMatrix predict_all(const LinearModel& model, std::span<const SparseVector> X, double threshold) {
  LabelMatrix out(0, model.labels());
  for (const auto& x : X) out.push_row(predict_labels(model, x, threshold));
  return out;
}

namespace {
constexpr std::string_view kModelMagic = "cinesent-linear-model v1";

template <typename T>
T parse_number(std::string_view s, const char* what) {
  T v{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw FormatError(std::string("malformed ") + what + " '" + std::string(s) + "'");
  }
  return v;
}

std::string_view field(std::string_view token, std::string_view key) {
  if (!token.starts_with(key) || token.size() <= key.size() || token[key.size()] != '=') {
    throw FormatError("expected " + std::string(key) + "=...");
  }
  return token.substr(key.size() + 1);
}
}  // namespace

std::string serialize_model(const LinearModel& model) {
  std::string out(kModelMagic);
  out += "\nloss=" + std::string(to_string(model.loss()));
  out += "\nlabels=" + std::to_string(model.labels());
  out += "\ndim=" + std::to_string(model.dim());
  out += "\nl2=" + format_exact(model.l2()) + "\n";
  for (std::size_t l = 0; l < model.labels(); ++l) {
    const auto w = model.weights(l);
    std::size_t nnz = 0;
    for (double x : w) nnz += x != 0.0;
    out += "label=" + std::to_string(l) + " bias=" + format_exact(model.bias(l)) + " nnz=" + std::to_string(nnz) + "\n";
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (w[j] != 0.0) out += std::to_string(j) + " " + format_exact(w[j]) + "\n";
    }
  }
  return out;
}

LinearModel parse_model(std::string_view text) {
  auto lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.size() < 5 || lines[0] != kModelMagic) throw FormatError("not a cinesent linear model file");
  const LossKind loss = parse_loss_kind(field(lines[1], "loss"));
  const auto labels = parse_number<std::size_t>(field(lines[2], "labels"), "label count");
  const auto dim = parse_number<std::size_t>(field(lines[3], "dim"), "dimension");
  const auto l2 = parse_number<double>(field(lines[4], "l2"), "l2");
  LinearModel model(loss, labels, dim, l2);
  std::size_t i = 5;
  for (std::size_t l = 0; l < labels; ++l) {
    if (i >= lines.size()) throw FormatError("model file truncated");
    const auto head = split(lines[i++], ' ');
    if (head.size() != 3 || parse_number<std::size_t>(field(head[0], "label"), "label index") != l) {
      throw FormatError("malformed label header for label " + std::to_string(l));
    }
    model.bias(l) = parse_number<double>(field(head[1], "bias"), "bias");
    const auto nnz = parse_number<std::size_t>(field(head[2], "nnz"), "nnz");
    auto w = model.weights(l);
    for (std::size_t k = 0; k < nnz; ++k) {
      if (i >= lines.size()) throw FormatError("model file truncated");
      const auto cols = split(lines[i++], ' ');
      if (cols.size() != 2) throw FormatError("malformed weight line");
      const auto j = parse_number<std::size_t>(cols[0], "weight index");
      if (j >= dim) throw FormatError("weight index out of range");
      w[j] = parse_number<double>(cols[1], "weight");
    }
  }
  if (i != lines.size()) throw FormatError("trailing content in model file");
  return model;
}

void save_model(const LinearModel& model, const std::filesystem::path& path) {
  write_file(path, serialize_model(model));
}

LinearModel load_model(const std::filesystem::path& path) { return parse_model(read_file(path)); }

}  // namespace cinesent
