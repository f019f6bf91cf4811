#include "ncml/learn.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ncml {
namespace {

LabeledExample make(double distance, double noise, double snr, Label label) {
  LabeledExample e;
  e.features.distance_m = distance;
  e.features.noise_dbm = noise;
  e.features.snr_db = snr;
  e.features.rx_dbm = 0.0;
  e.label = label;
  return e;
}

// Two 1-D Gaussians on the snr feature, means 0 (NAK) and 10 (ACK).
Dataset two_gaussians(int per_class, std::uint64_t seed) {
  Rng rng(seed);
  Dataset d;
  for (int i = 0; i < per_class; ++i) {
    d.examples.push_back(make(0, 0, rng.normal(), Label::NAK));
    d.examples.push_back(make(0, 0, 10.0 + rng.normal(), Label::ACK));
  }
  return d;
}

// Label = x1 XOR x2 on distance/noise, every cell equally populated and
// every other feature constant, so no single feature beats chance.
Dataset xor_data(int per_cell) {
  Dataset d;
  for (int i = 0; i < per_cell; ++i) {
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) d.examples.push_back(make(a, b, 0.0, (a ^ b) ? Label::ACK : Label::NAK));
    }
  }
  return d;
}

double accuracy_on(const Dataset& d, Family f, const std::vector<int>& features,
                   const LearnOptions& opt = {}) {
  return evaluate(train(f, d, features, opt), d);
}

TEST(Split, SizesAndStratification) {
  Dataset d;
  for (int i = 0; i < 100; ++i) d.examples.push_back(make(i, 0, 0, i % 2 ? Label::ACK : Label::NAK));
  const auto [tr, va] = split(d, {0.8, 3});
  EXPECT_EQ(tr.size(), 80u);
  EXPECT_EQ(va.size(), 20u);
  EXPECT_LE(std::abs(static_cast<long>(tr.count(Label::ACK)) - 40), 1);
  EXPECT_LE(std::abs(static_cast<long>(va.count(Label::ACK)) - 10), 1);

  std::vector<double> seen;
  for (const auto* part : {&tr, &va}) {
    for (const auto& e : part->examples) seen.push_back(e.features.distance_m);
  }
  std::sort(seen.begin(), seen.end());
  for (int i = 0; i < 100; ++i) EXPECT_EQ(seen[i], i);

  const auto [tr2, va2] = split(d, {0.8, 3});
  EXPECT_EQ(tr.examples, tr2.examples);
  EXPECT_EQ(va.examples, va2.examples);
  EXPECT_THROW(split(Dataset{}, {0.8, 1}), std::invalid_argument);
}

TEST(NaiveBayes, MidpointThreshold) {
  const Dataset d = two_gaussians(2000, 5);
  const auto m = train(Family::GaussianNaiveBayes, d, {kSnr});
  EXPECT_GT(evaluate(m, d), 0.99);
  // Locate the boundary by bisection on the decision score.
  double lo = 0.0, hi = 10.0;
  auto score = [&](double s) {
    FeedbackFeatures f;
    f.snr_db = s;
    return m.decision_score(f.as_vector());
  };
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (score(mid) > 0 ? hi : lo) = mid;
  }
  EXPECT_NEAR(lo, 5.0, 0.15);
  FeedbackFeatures at_mean;
  at_mean.snr_db = 10.0;
  EXPECT_EQ(m.predict(at_mean), Label::ACK);
  at_mean.snr_db = 0.0;
  EXPECT_EQ(m.predict(at_mean), Label::NAK);
}

TEST(NaiveBayes, ConstantFeatureUsesVarianceFloor) {
  const Dataset d = two_gaussians(100, 6);
  const auto m = train(Family::GaussianNaiveBayes, d, {kDistance, kSnr});
  EXPECT_GT(evaluate(m, d), 0.99);
}

TEST(Logistic, SeparableReachesPerfectAccuracy) {
  EXPECT_EQ(accuracy_on(two_gaussians(300, 7), Family::LogisticRegression, {kSnr}), 1.0);
}

TEST(Logistic, ZeroWeightsTieGoesToNak) {
  LogisticParams p;
  p.encoder.features = {kSnr};
  p.encoder.mean = {0.0};
  p.encoder.scale = {1.0};
  p.weights = {0.0};
  ClassifierModel m(Family::LogisticRegression, {kSnr}, p);
  FeedbackFeatures f;
  f.snr_db = 3.0;
  EXPECT_EQ(m.decision_score(f.as_vector()), 0.0);
  EXPECT_EQ(m.predict(f), Label::NAK);
}

TEST(Learners, BeatMajorityBaselineAndAreDeterministic) {
  Dataset d = two_gaussians(150, 8);
  for (int i = 0; i < 200; ++i) d.examples.push_back(make(0, 0, 10.0 + i * 0.01, Label::ACK));
  const double majority = static_cast<double>(d.count(Label::ACK)) / d.size();
  for (Family f : kAllFamilies) {
    const auto m = train(f, d, {kSnr});
    EXPECT_GE(evaluate(m, d), majority) << to_string(f);
    for (const auto& e : d.examples) EXPECT_EQ(m.predict(e.features), m.predict(e.features));
  }
}

TEST(Learners, SingleClassThrows) {
  Dataset d;
  for (int i = 0; i < 20; ++i) d.examples.push_back(make(i, 0, i, Label::ACK));
  for (Family f : kAllFamilies) EXPECT_THROW(train(f, d, {kSnr}), std::invalid_argument);
}

TEST(Tree, ScalingAFeatureLeavesPredictionsUnchanged) {
  Rng rng(12);
  Dataset a, b;
  for (int i = 0; i < 400; ++i) {
    const double x = rng.normal(), y = rng.normal();
    const Label l = (x + 0.5 * y + 0.3 * rng.normal()) > 0 ? Label::ACK : Label::NAK;
    a.examples.push_back(make(0, y, x, l));
    b.examples.push_back(make(0, y, 37.5 * x, l));
  }
  const auto ma = train(Family::DecisionTree, a, {kNoise, kSnr});
  const auto mb = train(Family::DecisionTree, b, {kNoise, kSnr});
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(ma.predict(a.examples[i].features), mb.predict(b.examples[i].features));
  }
}

TEST(Tree, DepthLimitHolds) {
  LearnOptions opt;
  opt.tree_max_depth = 2;
  const auto m = train(Family::DecisionTree, xor_data(30), {kDistance, kNoise, kRx}, opt);
  const auto& nodes = std::get<TreeParams>(m.parameters()).nodes;
  EXPECT_LE(nodes.size(), 7u);
}

TEST(Evaluate, CountsMistakes) {
  Dataset d;
  for (int i = 0; i < 10; ++i) d.examples.push_back(make(0, 0, i, i < 7 ? Label::ACK : Label::NAK));
  // Leaf-only tree that always says ACK: the 3 NAKs are its mistakes.
  TreeParams t;
  TreeNode leaf;
  leaf.ack = 7;
  leaf.nak = 3;
  t.nodes.push_back(leaf);
  const ClassifierModel always_ack(Family::DecisionTree, {kSnr}, t);
  EXPECT_DOUBLE_EQ(evaluate(always_ack, d), 0.7);
  EXPECT_THROW(evaluate(always_ack, Dataset{}), std::invalid_argument);

  const auto perfect = train(Family::DecisionTree, d, {kSnr}, LearnOptions{.tree_min_leaf = 1});
  EXPECT_DOUBLE_EQ(evaluate(perfect, d), 1.0);
}

TEST(Mlp, GradientMatchesFiniteDifferences) {
  Rng rng(99);
  for (int net = 0; net < 20; ++net) {
    const int inputs = 1 + static_cast<int>(rng.below(4));
    const int hidden = 1 + static_cast<int>(rng.below(5));
    const auto w = mlp::init_weights(inputs, hidden, rng);
    std::vector<std::vector<double>> x(6, std::vector<double>(inputs));
    std::vector<double> y(6);
    for (int i = 0; i < 6; ++i) {
      for (auto& v : x[i]) v = rng.normal();
      y[i] = static_cast<double>(rng.below(2));
    }
    std::vector<double> grad;
    mlp::loss_and_gradient(inputs, hidden, w, x, y, &grad);
    ASSERT_EQ(grad.size(), w.size());
    for (std::size_t k = 0; k < w.size(); ++k) {
      const double h = 1e-5;
      auto wp = w, wm = w;
      wp[k] += h;
      wm[k] -= h;
      const double fd = (mlp::loss_and_gradient(inputs, hidden, wp, x, y, nullptr) -
                         mlp::loss_and_gradient(inputs, hidden, wm, x, y, nullptr)) /
                        (2 * h);
      const double denom = std::max({std::abs(fd), std::abs(grad[k]), 1e-8});
      EXPECT_LT(std::abs(fd - grad[k]) / denom, 1e-4) << "net " << net << " weight " << k;
    }
  }
}

TEST(Mlp, FullBatchLossDoesNotIncrease) {
  LearnOptions opt;
  opt.mlp_batch = 1 << 20;
  opt.mlp_epochs = 150;
  std::vector<double> history;
  mlp::fit(two_gaussians(100, 13), {kSnr}, opt, &history);
  ASSERT_EQ(history.size(), 150u);
  for (std::size_t i = 1; i < history.size(); ++i) EXPECT_LE(history[i], history[i - 1] + 1e-12);
}

TEST(ChooseAttributes, SeparatingFeatureIsKept) {
  Rng rng(14);
  Dataset tr, va;
  for (int i = 0; i < 400; ++i) {
    const Label l = i % 2 ? Label::ACK : Label::NAK;
    auto e = make(rng.normal(), rng.normal(), l == Label::ACK ? 5.0 : -5.0, l);
    (i < 300 ? tr : va).examples.push_back(e);
  }
  for (Family f : kAllFamilies) {
    const auto s = choose_attributes(tr, f, va);
    EXPECT_NE(std::find(s.begin(), s.end(), kSnr), s.end()) << to_string(f);
    EXPECT_EQ(evaluate(train(f, tr, s), va), 1.0) << to_string(f);
  }
}

TEST(ChooseAttributes, DuplicatesGiveOneFeature) {
  Rng rng(15);
  Dataset tr, va;
  for (int i = 0; i < 300; ++i) {
    const double x = rng.normal();
    const Label l = x + 0.5 * rng.normal() > 0 ? Label::ACK : Label::NAK;
    auto e = make(x, x, x, l);
    e.features.rx_dbm = x;
    (i < 200 ? tr : va).examples.push_back(e);
  }
  for (Family f : {Family::GaussianNaiveBayes, Family::DecisionTree}) {
    EXPECT_EQ(choose_attributes(tr, f, va).size(), 1u) << to_string(f);
  }
}

TEST(ChooseAttributes, XorNeedsBothInputs) {
  const Dataset tr = xor_data(50), va = xor_data(25);
  LearnOptions opt;
  opt.mlp_epochs = 400;
  opt.mlp_step = 0.5;
  // Oracle: the best validation accuracy over every subset of the three
  // candidate features, computed by brute force.
  const std::vector<int> pool = {kDistance, kNoise, kRx};
  double best = 0.0;
  for (int mask = 1; mask < 8; ++mask) {
    std::vector<int> s;
    for (int i = 0; i < 3; ++i) {
      if (mask >> i & 1) s.push_back(pool[i]);
    }
    best = std::max(best, evaluate(train(Family::MLP, tr, s, opt), va));
  }
  EXPECT_EQ(best, 1.0);

  const auto chosen = choose_attributes(tr, Family::MLP, va, opt);
  EXPECT_NE(std::find(chosen.begin(), chosen.end(), kDistance), chosen.end());
  EXPECT_NE(std::find(chosen.begin(), chosen.end(), kNoise), chosen.end());
  EXPECT_EQ(evaluate(train(Family::MLP, tr, chosen, opt), va), best);
}

TEST(TrainSelect, SingletonAndArgmax) {
  const Dataset d = two_gaussians(200, 18);
  const std::array<Family, 1> nb = {Family::GaussianNaiveBayes};
  EXPECT_EQ(train_select(d, nb, {0.8, 1}).family(), Family::GaussianNaiveBayes);

  const auto report = train_select_report(d, kAllFamilies, {0.8, 1});
  EXPECT_EQ(report.candidates.size(), 4u);
  const auto [tr, va] = split(d, {0.8, 1});
  const double chosen = evaluate(report.best, va);
  EXPECT_DOUBLE_EQ(chosen, report.best.validation_accuracy());
  for (const auto& c : report.candidates) EXPECT_GE(chosen, evaluate(c, va));
}

TEST(TrainSelect, MlpBeatsNaiveBayesOnXor) {
  Dataset d = xor_data(100);
  LearnOptions opt;
  opt.mlp_epochs = 400;
  opt.mlp_step = 0.5;
  const std::array<Family, 2> fams = {Family::GaussianNaiveBayes, Family::MLP};
  const auto report = train_select_report(d, fams, {0.8, 4}, opt);
  EXPECT_EQ(report.best.family(), Family::MLP);
  EXPECT_GT(report.best.validation_accuracy(), 0.95);
  EXPECT_LT(report.candidates[0].validation_accuracy(), 0.75);
}

TEST(TrainSelect, AllFamiliesFailingThrows) {
  Dataset d;
  for (int i = 0; i < 20; ++i) d.examples.push_back(make(i, 0, i, Label::NAK));
  EXPECT_THROW(train_select(d, kAllFamilies, {0.8, 1}), std::runtime_error);
}

TEST(ModelFile, RoundTripPredictsIdentically) {
  const Dataset d = two_gaussians(100, 20);
  for (Family f : kAllFamilies) {
    auto m = train(f, d, {kSnr, kNoise});
    m.set_validation_accuracy(0.625);
    std::stringstream ss;
    m.save(ss);
    const auto back = ClassifierModel::load(ss);
    EXPECT_EQ(back.family(), f);
    EXPECT_EQ(back.selected_features(), m.selected_features());
    EXPECT_EQ(back.validation_accuracy(), 0.625);
    for (const auto& e : d.examples) {
      EXPECT_EQ(back.decision_score(e.features.as_vector()), m.decision_score(e.features.as_vector()));
    }
  }
  std::istringstream junk("{\"format\":\"other\"}");
  EXPECT_THROW(ClassifierModel::load(junk), std::exception);
}

}  // namespace
}  // namespace ncml
