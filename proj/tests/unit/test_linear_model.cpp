#include <gtest/gtest.h>

#include <cmath>

#include "cinesent/errors.hpp"
#include "cinesent/linear_model.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace cinesent;

namespace {

SparseVector dense_row(const std::vector<double>& values) {
  SparseVector v;
  v.dim = values.size();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] != 0.0) {
      v.indices.push_back(static_cast<std::uint32_t>(i));
      v.values.push_back(values[i]);
    }
  }
  return v;
}

struct Problem {
  std::vector<SparseVector> X;
  std::vector<std::uint8_t> y;
  std::vector<double> w;
  double bias;
};

Problem random_problem(gen::Rng& rng) {
  Problem p;
  const auto dim = gen::uniform(rng, 1, 20);
  const auto n = gen::uniform(rng, 1, 15);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(dim, 0.0);
    for (auto& v : row) {
      if (gen::unit(rng) < 0.6) v = gen::unit(rng) * 2 - 1;
    }
    p.X.push_back(dense_row(row));
    p.y.push_back(gen::unit(rng) < 0.5 ? 1 : 0);
  }
  p.w.resize(dim);
  for (auto& v : p.w) v = gen::unit(rng) * 2 - 1;
  p.bias = gen::unit(rng) - 0.5;
  return p;
}

LabelMatrix column(const std::vector<std::uint8_t>& y) {
  LabelMatrix m;
  for (auto v : y) m.push_row(std::vector<std::uint8_t>{v});
  return m;
}

}  // namespace

TEST(Sigmoid, ClosedForms) {
  EXPECT_DOUBLE_EQ(sigmoid(0.0), 0.5);
  EXPECT_NEAR(sigmoid(std::log(3.0)), 0.75, 1e-15);
  EXPECT_NEAR(sigmoid(-std::log(3.0)), 0.25, 1e-15);
  EXPECT_GT(sigmoid(-700.0), 0.0);
  EXPECT_LT(sigmoid(30.0), 1.0);
}

TEST(Loss, LogisticAndHingeValues) {
  EXPECT_NEAR(example_loss(LossKind::Logistic, true, 0.0), std::log(2.0), 1e-15);
  EXPECT_NEAR(example_loss(LossKind::Logistic, false, 1000.0), 1000.0, 1e-9);
  EXPECT_TRUE(std::isfinite(example_loss(LossKind::Logistic, true, -1e6)));
  EXPECT_DOUBLE_EQ(example_loss(LossKind::Hinge, true, 0.25), 0.75);
  EXPECT_DOUBLE_EQ(example_loss(LossKind::Hinge, false, 0.25), 1.25);
  EXPECT_DOUBLE_EQ(example_loss(LossKind::Hinge, true, 2.0), 0.0);
  EXPECT_DOUBLE_EQ(example_loss_derivative(LossKind::Hinge, true, 1.0), 0.0);
}

TEST(Gradient, LogisticMatchesFiniteDifferences) {
  gen::Rng rng(21);
  for (int inst = 0; inst < 50; ++inst) {
    const auto p = random_problem(rng);
    const double l2 = gen::unit(rng) * 0.1;
    const auto g = objective_gradient(p.X, p.y, p.w, p.bias, LossKind::Logistic, l2);
    std::vector<double> params = p.w;
    params.push_back(p.bias);
    const auto f = [&](const std::vector<double>& q) {
      return objective(p.X, p.y, std::span<const double>(q.data(), q.size() - 1), q.back(), LossKind::Logistic, l2);
    };
    const auto num = oracle::numeric_gradient(f, params, 1e-5);
    for (std::size_t j = 0; j <= p.w.size(); ++j) {
      const double a = j < p.w.size() ? g.weights[j] : g.bias;
      const double rel = std::abs(a - num[j]) / std::max({1e-8, std::abs(a), std::abs(num[j])});
      ASSERT_LT(rel, 1e-4) << "instance " << inst << " coord " << j;
    }
  }
}

TEST(Gradient, HingeAwayFromKinks) {
  gen::Rng rng(22);
  int checked = 0;
  while (checked < 50) {
    const auto p = random_problem(rng);
    bool near_kink = false;
    for (std::size_t i = 0; i < p.X.size(); ++i) {
      const double s = p.X[i].dot(p.w) + p.bias;
      const double margin = (p.y[i] ? 1.0 : -1.0) * s;
      near_kink = near_kink || std::abs(margin - 1.0) < 1e-3;
    }
    if (near_kink) continue;
    ++checked;
    const auto g = objective_gradient(p.X, p.y, p.w, p.bias, LossKind::Hinge, 0.01);
    std::vector<double> params = p.w;
    params.push_back(p.bias);
    const auto f = [&](const std::vector<double>& q) {
      return objective(p.X, p.y, std::span<const double>(q.data(), q.size() - 1), q.back(), LossKind::Hinge, 0.01);
    };
    const auto num = oracle::numeric_gradient(f, params, 1e-5);
    for (std::size_t j = 0; j <= p.w.size(); ++j) {
      const double a = j < p.w.size() ? g.weights[j] : g.bias;
      // Components below 1e-6 are compared absolutely: the difference
      // quotient carries about 1e-11 of rounding noise.
      ASSERT_LT(std::abs(a - num[j]) / std::max({1e-6, std::abs(a), std::abs(num[j])}), 1e-4);
    }
  }
}

TEST(Gradient, DuplicatedDataSameGradient) {
  gen::Rng rng(23);
  for (int inst = 0; inst < 20; ++inst) {
    const auto p = random_problem(rng);
    auto X2 = p.X;
    X2.insert(X2.end(), p.X.begin(), p.X.end());
    auto y2 = p.y;
    y2.insert(y2.end(), p.y.begin(), p.y.end());
    for (auto kind : {LossKind::Logistic, LossKind::Hinge}) {
      const auto a = objective_gradient(p.X, p.y, p.w, p.bias, kind, 0.05);
      const auto b = objective_gradient(X2, y2, p.w, p.bias, kind, 0.05);
      for (std::size_t j = 0; j < a.weights.size(); ++j) ASSERT_NEAR(a.weights[j], b.weights[j], 1e-12);
      ASSERT_NEAR(a.bias, b.bias, 1e-12);
    }
  }
}

TEST(Train, SeparablePointsLogistic) {
  const std::vector<SparseVector> X = {dense_row({1.0, 0.0}), dense_row({0.0, 1.0})};
  const auto Y = column({1, 0});
  TrainConfig cfg;
  cfg.epochs = 200;
  const auto result = train(X, Y, LossKind::Logistic, cfg);
  const auto pred = predict_all(result.model, X);
  EXPECT_EQ(pred, Y);
}

TEST(Train, SeparablePointsHinge) {
  const std::vector<SparseVector> X = {dense_row({1.0, 0.2}), dense_row({0.1, 1.0}), dense_row({0.9, 0.0})};
  const auto Y = column({1, 0, 1});
  TrainConfig cfg;
  cfg.epochs = 200;
  cfg.learning_rate = 0.5;
  EXPECT_EQ(predict_all(train(X, Y, LossKind::Hinge, cfg).model, X), Y);
}

TEST(Train, HeavyRegularisationShrinksWeights) {
  gen::Rng rng(24);
  const auto p = random_problem(rng);
  TrainConfig cfg;
  cfg.l2 = 1e6;
  cfg.learning_rate = 0.1;
  const auto model = train(p.X, column(p.y), LossKind::Logistic, cfg).model;
  for (double w : model.weights(0)) EXPECT_LT(std::abs(w), 1e-6);
  for (const auto& x : p.X) EXPECT_NEAR(decision_scores(model, x)[0], model.bias(0), 1e-6);
}

TEST(Train, Deterministic) {
  gen::Rng rng(25);
  const auto p = random_problem(rng);
  TrainConfig cfg;
  cfg.batch_size = 3;
  const auto a = train(p.X, column(p.y), LossKind::Logistic, cfg);
  const auto b = train(p.X, column(p.y), LossKind::Logistic, cfg);
  EXPECT_EQ(a.model, b.model);
  EXPECT_EQ(serialize_model(a.model), serialize_model(b.model));
  cfg.seed = 43;
  const auto c = train(p.X, column(p.y), LossKind::Logistic, cfg);
  EXPECT_EQ(c.objective_history.size(), cfg.epochs + 1);
}

TEST(Train, FullBatchObjectiveNonIncreasing) {
  gen::Rng rng(26);
  for (int inst = 0; inst < 20; ++inst) {
    const auto p = random_problem(rng);
    TrainConfig cfg;
    cfg.batch_size = p.X.size();
    cfg.learning_rate = 0.05;
    cfg.epochs = 40;
    cfg.l2 = 0.01;
    const auto h = train(p.X, column(p.y), LossKind::Logistic, cfg).objective_history;
    for (std::size_t e = 1; e < h.size(); ++e) ASSERT_LE(h[e], h[e - 1] + 1e-9) << "epoch " << e;
  }
}

TEST(Train, DuplicatingExamplesKeepsFullBatchModel) {
  gen::Rng rng(27);
  const auto p = random_problem(rng);
  auto X2 = p.X;
  X2.insert(X2.end(), p.X.begin(), p.X.end());
  auto y2 = p.y;
  y2.insert(y2.end(), p.y.begin(), p.y.end());
  TrainConfig cfg;
  cfg.batch_size = X2.size();
  cfg.learning_rate = 0.5;
  const auto a = train(p.X, column(p.y), LossKind::Logistic, cfg).model;
  const auto b = train(X2, column(y2), LossKind::Logistic, cfg).model;
  for (std::size_t j = 0; j < a.dim(); ++j) EXPECT_NEAR(a.weights(0)[j], b.weights(0)[j], 1e-10);
  EXPECT_NEAR(a.bias(0), b.bias(0), 1e-10);
}

TEST(Train, Errors) {
  const std::vector<SparseVector> X = {dense_row({1.0})};
  EXPECT_THROW(train(X, column({1, 0}), LossKind::Logistic, {}), DimensionMismatchError);
  TrainConfig bad;
  bad.learning_rate = 0.0;
  EXPECT_THROW(train(X, column({1}), LossKind::Logistic, bad), ConfigError);
  bad = {};
  bad.epochs = 0;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = {};
  bad.l2 = -1;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = {};
  bad.learning_rate = 1e308;
  bad.l2 = 0.0;
  const std::vector<SparseVector> X2 = {dense_row({1.0, 1.0}), dense_row({1.0, -1.0})};
  try {
    train(X2, column({1, 0}), LossKind::Hinge, bad);
    FAIL() << "expected divergence";
  } catch (const TrainingDivergedError& e) {
    EXPECT_EQ(e.epoch(), 1u);
  }
}

TEST(Predict, HandModel) {
  LinearModel m(LossKind::Logistic, 2, 2, 0.0);
  m.weights(0)[0] = 1.0;
  m.weights(0)[1] = 2.0;
  m.weights(1)[0] = -1.0;
  m.weights(1)[1] = 0.5;
  m.bias(0) = 0.5;
  m.bias(1) = -1.0;
  const auto s = decision_scores(m, dense_row({3.0, 4.0}));
  EXPECT_DOUBLE_EQ(s[0], 11.5);
  EXPECT_DOUBLE_EQ(s[1], -2.0);
  EXPECT_EQ(predict_labels(m, dense_row({3.0, 4.0})), (std::vector<std::uint8_t>{1, 0}));
  EXPECT_THROW(decision_scores(m, dense_row({1.0, 2.0, 3.0})), DimensionMismatchError);
}

TEST(Predict, ZeroModelAndThresholdBoundary) {
  const LinearModel zero(LossKind::Logistic, 3, 4, 0.0);
  const auto x = dense_row({1, 2, 3, 4});
  EXPECT_EQ(decision_scores(zero, x), (std::vector<double>{0, 0, 0}));
  EXPECT_EQ(predict_proba(zero, x), (std::vector<double>{0.5, 0.5, 0.5}));
  EXPECT_EQ(predict_labels(zero, x, 0.5), (std::vector<std::uint8_t>{1, 1, 1}));
  EXPECT_EQ(predict_labels(zero, x, 0.6), (std::vector<std::uint8_t>{0, 0, 0}));
}

TEST(Predict, ZeroWeightFeaturesDoNotMatter) {
  LinearModel m(LossKind::Hinge, 1, 3, 0.0);
  m.weights(0)[0] = 2.0;
  m.bias(0) = -1.0;
  EXPECT_EQ(decision_scores(m, dense_row({1, 0, 0})), decision_scores(m, dense_row({1, 5, 7})));
  EXPECT_THROW(predict_proba(m, dense_row({1, 0, 0})), UnsupportedForLossError);
  EXPECT_EQ(predict_labels(m, dense_row({0.5, 0, 0})), std::vector<std::uint8_t>{1});
}

TEST(Persistence, RoundTripBitExact) {
  gen::Rng rng(28);
  const auto p = random_problem(rng);
  const auto model = train(p.X, column(p.y), LossKind::Hinge, {}).model;
  const auto text = serialize_model(model);
  EXPECT_TRUE(text.starts_with("cinesent-linear-model v1\nloss=hinge\n"));
  EXPECT_EQ(parse_model(text), model);
  const auto dir = gen::temp_dir("model");
  save_model(model, dir / "m.txt");
  EXPECT_EQ(load_model(dir / "m.txt"), model);
  std::filesystem::remove_all(dir);
  EXPECT_THROW(parse_model("cinesent-linear-model v9\n"), FormatError);
  EXPECT_THROW(parse_model(""), FormatError);
}

TEST(LossKindNames, ParseAliases) {
  EXPECT_EQ(parse_loss_kind("lr"), LossKind::Logistic);
  EXPECT_EQ(parse_loss_kind("svm"), LossKind::Hinge);
  EXPECT_EQ(to_string(LossKind::Logistic), "logistic");
  EXPECT_THROW(parse_loss_kind("tree"), ConfigError);
}
