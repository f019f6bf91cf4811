#include "ncml/learn.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace ncml {

using json = nlohmann::json;

std::string_view to_string(Family f) {
  switch (f) {
    case Family::GaussianNaiveBayes: return "GaussianNaiveBayes";
    case Family::DecisionTree: return "DecisionTree";
    case Family::LogisticRegression: return "LogisticRegression";
    case Family::MLP: return "MLP";
  }
  return "?";
}

Family parse_family(std::string_view s) {
  if (s == "GaussianNaiveBayes" || s == "NB") return Family::GaussianNaiveBayes;
  if (s == "DecisionTree" || s == "DT") return Family::DecisionTree;
  if (s == "LogisticRegression" || s == "LR") return Family::LogisticRegression;
  if (s == "MLP") return Family::MLP;
  throw std::invalid_argument("unknown model family '" + std::string(s) + "'");
}

std::size_t Dataset::count(Label l) const {
  return static_cast<std::size_t>(std::count_if(
      examples.begin(), examples.end(), [l](const LabeledExample& e) { return e.label == l; }));
}

namespace {

bool is_categorical(int feature) { return feature == kTerrain || feature == kMod; }

double label_value(Label l) { return l == Label::ACK ? 1.0 : 0.0; }

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rng.below(i)]);
  }
}

void require_trainable(const Dataset& data, const std::vector<int>& features) {
  if (features.empty()) throw std::invalid_argument("empty feature subset");
  for (int f : features) {
    if (f < 0 || f >= static_cast<int>(kNumFeatures)) {
      throw std::invalid_argument("feature index out of range");
    }
  }
  if (!data.has_both_classes()) throw std::invalid_argument("single-class training set");
}

std::vector<int> normalized(std::vector<int> features) {
  std::sort(features.begin(), features.end());
  features.erase(std::unique(features.begin(), features.end()), features.end());
  return features;
}

}  // namespace

std::pair<Dataset, Dataset> split(const Dataset& data, const SplitSpec& spec) {
  if (data.size() < 2) throw std::invalid_argument("split needs at least two examples");
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw std::invalid_argument("train_fraction must lie in (0, 1)");
  }
  std::vector<std::size_t> ack, nak;
  for (std::size_t i = 0; i < data.size(); ++i) {
    (data.examples[i].label == Label::ACK ? ack : nak).push_back(i);
  }
  Rng rng(derive_seed({spec.seed, 0x5b117}));
  shuffle(ack, rng);
  shuffle(nak, rng);

  const std::size_t n = data.size();
  auto n_train = static_cast<std::size_t>(std::llround(spec.train_fraction * n));
  n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
  auto n_ack = static_cast<std::size_t>(std::llround(spec.train_fraction * ack.size()));
  n_ack = std::min(n_ack, std::min(ack.size(), n_train));
  std::size_t n_nak = n_train - n_ack;
  if (n_nak > nak.size()) {
    n_nak = nak.size();
    n_ack = n_train - n_nak;
  }

  std::vector<bool> in_train(n, false);
  for (std::size_t i = 0; i < n_ack; ++i) in_train[ack[i]] = true;
  for (std::size_t i = 0; i < n_nak; ++i) in_train[nak[i]] = true;

  std::pair<Dataset, Dataset> out;
  for (std::size_t i = 0; i < n; ++i) {
    (in_train[i] ? out.first : out.second).examples.push_back(data.examples[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Feature encoding

FeatureEncoder FeatureEncoder::fit(const Dataset& data, std::vector<int> features, bool one_hot) {
  FeatureEncoder enc;
  enc.features = normalized(std::move(features));
  enc.one_hot = one_hot;
  for (int f : enc.features) {
    double mean = 0.0, sq = 0.0;
    for (const auto& e : data.examples) mean += e.features.as_vector()[f];
    mean /= std::max<std::size_t>(1, data.size());
    for (const auto& e : data.examples) {
      const double d = e.features.as_vector()[f] - mean;
      sq += d * d;
    }
    const double sd = std::sqrt(sq / std::max<std::size_t>(1, data.size()));
    enc.mean.push_back(mean);
    enc.scale.push_back(sd > 1e-12 ? sd : 1.0);
  }
  return enc;
}

std::size_t FeatureEncoder::width() const {
  std::size_t w = 0;
  for (int f : features) w += (one_hot && is_categorical(f)) ? 3 : 1;
  return w;
}

std::vector<double> FeatureEncoder::encode(const std::array<double, kNumFeatures>& x) const {
  std::vector<double> out;
  out.reserve(width());
  for (std::size_t i = 0; i < features.size(); ++i) {
    const int f = features[i];
    if (one_hot && is_categorical(f)) {
      // terrain is 1..3, modulation 0..2
      const int level = static_cast<int>(x[f]) - (f == kTerrain ? 1 : 0);
      for (int k = 0; k < 3; ++k) out.push_back(level == k ? 1.0 : 0.0);
    } else {
      out.push_back((x[f] - mean[i]) / scale[i]);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Gaussian naive Bayes

namespace {

NaiveBayesParams fit_naive_bayes(const Dataset& data, const std::vector<int>& features,
                                 const LearnOptions& opt) {
  NaiveBayesParams p;
  std::array<double, 2> n{};
  for (int c = 0; c < 2; ++c) {
    p.mean[c].assign(features.size(), 0.0);
    p.variance[c].assign(features.size(), 0.0);
  }
  for (const auto& e : data.examples) {
    const int c = e.label == Label::ACK ? 1 : 0;
    n[c] += 1;
    const auto x = e.features.as_vector();
    for (std::size_t i = 0; i < features.size(); ++i) p.mean[c][i] += x[features[i]];
  }
  for (int c = 0; c < 2; ++c)
    for (auto& m : p.mean[c]) m /= n[c];
  for (const auto& e : data.examples) {
    const int c = e.label == Label::ACK ? 1 : 0;
    const auto x = e.features.as_vector();
    for (std::size_t i = 0; i < features.size(); ++i) {
      const double d = x[features[i]] - p.mean[c][i];
      p.variance[c][i] += d * d;
    }
  }
  for (int c = 0; c < 2; ++c) {
    for (auto& v : p.variance[c]) v = std::max(v / n[c], opt.variance_floor);
    p.log_prior[c] = std::log(n[c] / (n[0] + n[1]));
  }
  return p;
}

double naive_bayes_score(const NaiveBayesParams& p, const std::vector<int>& features,
                         const std::array<double, kNumFeatures>& x) {
  std::array<double, 2> lp = p.log_prior;
  for (int c = 0; c < 2; ++c) {
    for (std::size_t i = 0; i < features.size(); ++i) {
      const double d = x[features[i]] - p.mean[c][i];
      const double v = p.variance[c][i];
      lp[c] += -0.5 * std::log(2.0 * std::numbers::pi * v) - d * d / (2.0 * v);
    }
  }
  return lp[1] - lp[0];
}

// ---------------------------------------------------------------------------
// Decision tree (entropy splits)

double entropy(double ack, double nak) {
  const double n = ack + nak;
  double h = 0.0;
  for (double k : {ack, nak}) {
    if (k > 0) h -= (k / n) * std::log2(k / n);
  }
  return h;
}

struct TreeBuilder {
  const std::vector<std::array<double, kNumFeatures>>& x;
  const std::vector<int>& y;  // 1 = ACK
  const std::vector<int>& features;
  const LearnOptions& opt;
  TreeParams tree;

  int build(std::vector<std::size_t> idx, int depth) {
    TreeNode node;
    for (std::size_t i : idx) (y[i] ? node.ack : node.nak) += 1;
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(node);

    const int n = node.ack + node.nak;
    if (depth >= opt.tree_max_depth || node.ack == 0 || node.nak == 0 ||
        n < 2 * opt.tree_min_leaf) {
      return id;
    }

    const double parent_h = entropy(node.ack, node.nak);
    double best_gain = 1e-12;
    int best_feature = -1;
    double best_threshold = 0.0;
    for (int f : features) {
      std::sort(idx.begin(), idx.end(),
                [&](std::size_t a, std::size_t b) { return x[a][f] < x[b][f]; });
      int left_ack = 0, left_nak = 0;
      for (int k = 0; k + 1 < n; ++k) {
        (y[idx[k]] ? left_ack : left_nak) += 1;
        const double lo = x[idx[k]][f];
        const double hi = x[idx[k + 1]][f];
        if (!(lo < hi)) continue;
        const int left_n = k + 1;
        const int right_n = n - left_n;
        if (left_n < opt.tree_min_leaf || right_n < opt.tree_min_leaf) continue;
        const double h = (left_n * entropy(left_ack, left_nak) +
                          right_n * entropy(node.ack - left_ack, node.nak - left_nak)) /
                         n;
        const double gain = parent_h - h;
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = f;
          best_threshold = lo + (hi - lo) / 2.0;
        }
      }
    }
    if (best_feature < 0) return id;

    std::vector<std::size_t> left, right;
    for (std::size_t i : idx) (x[i][best_feature] <= best_threshold ? left : right).push_back(i);
    const int l = build(std::move(left), depth + 1);
    const int r = build(std::move(right), depth + 1);
    tree.nodes[id].feature = best_feature;
    tree.nodes[id].threshold = best_threshold;
    tree.nodes[id].left = l;
    tree.nodes[id].right = r;
    return id;
  }
};

TreeParams fit_tree(const Dataset& data, const std::vector<int>& features,
                    const LearnOptions& opt) {
  std::vector<std::array<double, kNumFeatures>> x;
  std::vector<int> y;
  for (const auto& e : data.examples) {
    x.push_back(e.features.as_vector());
    y.push_back(e.label == Label::ACK);
  }
  TreeBuilder b{x, y, features, opt, {}};
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  b.build(std::move(idx), 0);
  return std::move(b.tree);
}

double tree_score(const TreeParams& t, const std::array<double, kNumFeatures>& x) {
  int id = 0;
  while (t.nodes[id].feature >= 0) {
    const auto& n = t.nodes[id];
    id = x[n.feature] <= n.threshold ? n.left : n.right;
  }
  return static_cast<double>(t.nodes[id].ack - t.nodes[id].nak);
}

// ---------------------------------------------------------------------------
// Logistic regression, batch gradient ascent on the mean log-likelihood

LogisticParams fit_logistic(const Dataset& data, const std::vector<int>& features,
                            const LearnOptions& opt) {
  LogisticParams p;
  p.encoder = FeatureEncoder::fit(data, features, true);
  const std::size_t w = p.encoder.width();
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  for (const auto& e : data.examples) {
    x.push_back(p.encoder.encode(e.features.as_vector()));
    y.push_back(label_value(e.label));
  }
  p.weights.assign(w, 0.0);
  const double n = static_cast<double>(x.size());
  std::vector<double> g(w);
  for (int it = 0; it < opt.logistic_max_iterations; ++it) {
    std::fill(g.begin(), g.end(), 0.0);
    double gb = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double z = p.bias;
      for (std::size_t j = 0; j < w; ++j) z += p.weights[j] * x[i][j];
      const double r = y[i] - sigmoid(z);
      for (std::size_t j = 0; j < w; ++j) g[j] += r * x[i][j];
      gb += r;
    }
    double gmax = std::abs(gb / n);
    for (std::size_t j = 0; j < w; ++j) {
      g[j] /= n;
      gmax = std::max(gmax, std::abs(g[j]));
      p.weights[j] += opt.logistic_step * g[j];
    }
    p.bias += opt.logistic_step * gb / n;
    if (gmax < opt.logistic_tolerance) break;
  }
  return p;
}

double logistic_score(const LogisticParams& p, const std::array<double, kNumFeatures>& x) {
  const auto v = p.encoder.encode(x);
  double z = p.bias;
  for (std::size_t j = 0; j < v.size(); ++j) z += p.weights[j] * v[j];
  return z;
}

double mlp_logit(int inputs, int hidden, std::span<const double> w, std::span<const double> x,
                 std::vector<double>* activations) {
  const double* w1 = w.data();
  const double* b1 = w1 + static_cast<std::size_t>(hidden) * inputs;
  const double* w2 = b1 + hidden;
  const double b2 = w2[hidden];
  double z = b2;
  for (int h = 0; h < hidden; ++h) {
    double a = b1[h];
    for (int i = 0; i < inputs; ++i) a += w1[h * inputs + i] * x[i];
    const double s = sigmoid(a);
    if (activations) (*activations)[h] = s;
    z += w2[h] * s;
  }
  return z;
}

}  // namespace

// ---------------------------------------------------------------------------
// MLP

namespace mlp {

std::vector<double> init_weights(int inputs, int hidden, Rng& rng) {
  std::vector<double> w(static_cast<std::size_t>(hidden) * inputs + 2 * hidden + 1, 0.0);
  const double r1 = std::sqrt(6.0 / (inputs + hidden));
  const double r2 = std::sqrt(6.0 / (hidden + 1));
  std::size_t k = 0;
  for (int i = 0; i < hidden * inputs; ++i) w[k++] = (2.0 * rng.uniform() - 1.0) * r1;
  k += hidden;  // hidden biases start at zero
  for (int h = 0; h < hidden; ++h) w[k++] = (2.0 * rng.uniform() - 1.0) * r2;
  return w;
}

double loss_and_gradient(int inputs, int hidden, std::span<const double> weights,
                         std::span<const std::vector<double>> x, std::span<const double> y,
                         std::vector<double>* grad) {
  const std::size_t n = x.size();
  if (grad) grad->assign(weights.size(), 0.0);
  std::vector<double> act(hidden);
  double loss = 0.0;
  const std::size_t b1_off = static_cast<std::size_t>(hidden) * inputs;
  const std::size_t w2_off = b1_off + hidden;
  const std::size_t b2_off = w2_off + hidden;
  for (std::size_t s = 0; s < n; ++s) {
    const double z = mlp_logit(inputs, hidden, weights, x[s], &act);
    loss += softplus(z) - y[s] * z;
    if (!grad) continue;
    const double dz = sigmoid(z) - y[s];
    auto& g = *grad;
    g[b2_off] += dz;
    for (int h = 0; h < hidden; ++h) {
      g[w2_off + h] += dz * act[h];
      const double da = dz * weights[w2_off + h] * act[h] * (1.0 - act[h]);
      g[b1_off + h] += da;
      for (int i = 0; i < inputs; ++i) g[h * inputs + i] += da * x[s][i];
    }
  }
  const double inv = 1.0 / static_cast<double>(std::max<std::size_t>(1, n));
  if (grad)
    for (auto& v : *grad) v *= inv;
  return loss * inv;
}

MlpParams fit(const Dataset& data, std::vector<int> features, const LearnOptions& opt,
              std::vector<double>* loss_history) {
  MlpParams p;
  p.encoder = FeatureEncoder::fit(data, std::move(features), true);
  p.inputs = static_cast<int>(p.encoder.width());
  p.hidden = opt.mlp_hidden;
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  for (const auto& e : data.examples) {
    x.push_back(p.encoder.encode(e.features.as_vector()));
    y.push_back(label_value(e.label));
  }
  Rng rng(derive_seed({opt.mlp_seed, static_cast<std::uint64_t>(p.inputs)}));
  p.weights = init_weights(p.inputs, p.hidden, rng);

  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t batch = std::max(1, opt.mlp_batch);
  std::vector<std::vector<double>> bx;
  std::vector<double> by;
  std::vector<double> g;
  for (int epoch = 0; epoch < opt.mlp_epochs; ++epoch) {
    shuffle(order, rng);
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      bx.clear();
      by.clear();
      for (std::size_t k = start; k < end; ++k) {
        bx.push_back(x[order[k]]);
        by.push_back(y[order[k]]);
      }
      loss_and_gradient(p.inputs, p.hidden, p.weights, bx, by, &g);
      for (std::size_t j = 0; j < g.size(); ++j) p.weights[j] -= opt.mlp_step * g[j];
    }
    if (loss_history) {
      loss_history->push_back(loss_and_gradient(p.inputs, p.hidden, p.weights, x, y, nullptr));
    }
  }
  return p;
}

}  // namespace mlp

// ---------------------------------------------------------------------------
// Model

double ClassifierModel::decision_score(const std::array<double, kNumFeatures>& x) const {
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, NaiveBayesParams>) {
          return naive_bayes_score(p, features_, x);
        } else if constexpr (std::is_same_v<T, TreeParams>) {
          return tree_score(p, x);
        } else if constexpr (std::is_same_v<T, LogisticParams>) {
          return logistic_score(p, x);
        } else {
          const auto v = p.encoder.encode(x);
          return mlp_logit(p.inputs, p.hidden, p.weights, v, nullptr);
        }
      },
      params_);
}

Label ClassifierModel::predict(const std::array<double, kNumFeatures>& x) const {
  return decision_score(x) > 0.0 ? Label::ACK : Label::NAK;
}

ClassifierModel train(Family family, const Dataset& train_data, std::vector<int> features,
                      const LearnOptions& options) {
  features = normalized(std::move(features));
  require_trainable(train_data, features);
  switch (family) {
    case Family::GaussianNaiveBayes:
      return {family, features, fit_naive_bayes(train_data, features, options)};
    case Family::DecisionTree:
      return {family, features, fit_tree(train_data, features, options)};
    case Family::LogisticRegression:
      return {family, features, fit_logistic(train_data, features, options)};
    case Family::MLP:
      return {family, features, mlp::fit(train_data, features, options)};
  }
  throw std::invalid_argument("unknown family");
}

double evaluate(const ClassifierModel& model, const Dataset& data) {
  if (data.empty()) throw std::invalid_argument("evaluate on empty dataset");
  std::size_t hits = 0;
  for (const auto& e : data.examples) hits += model.predict(e.features) == e.label;
  return static_cast<double>(hits) / static_cast<double>(data.size());
}

std::vector<int> choose_attributes(const Dataset& train_data, Family family,
                                   const Dataset& validation, const LearnOptions& options) {
  std::vector<int> selected;
  double selected_acc = -1.0;
  while (selected.size() < kNumFeatures) {
    int best_feature = -1;
    double best_acc = -1.0;
    for (int f = 0; f < static_cast<int>(kNumFeatures); ++f) {
      if (std::find(selected.begin(), selected.end(), f) != selected.end()) continue;
      auto candidate = selected;
      candidate.push_back(f);
      const double acc = evaluate(train(family, train_data, candidate, options), validation);
      if (acc > best_acc) {
        best_acc = acc;
        best_feature = f;
      }
    }
    if (!selected.empty() && !(best_acc > selected_acc)) break;
    selected.push_back(best_feature);
    selected_acc = best_acc;
  }
  return normalized(selected);
}

SelectionReport train_select_report(const Dataset& data, std::span<const Family> families,
                                    const SplitSpec& spec, const LearnOptions& options) {
  if (families.empty()) throw std::invalid_argument("no model families to select from");
  const auto [train_set, validation] = split(data, spec);
  SelectionReport report;
  bool have_best = false;
  for (Family family : kAllFamilies) {
    if (std::find(families.begin(), families.end(), family) == families.end()) continue;
    try {
      auto features = choose_attributes(train_set, family, validation, options);
      ClassifierModel model = train(family, train_set, features, options);
      model.set_validation_accuracy(evaluate(model, validation));
      if (!have_best || model.validation_accuracy() > report.best.validation_accuracy()) {
        report.best = model;
        have_best = true;
      }
      report.candidates.push_back(std::move(model));
    } catch (const std::exception& e) {
      report.failures.emplace_back(family, e.what());
    }
  }
  if (!have_best) {
    std::string msg = "every model family failed to train";
    for (const auto& [f, why] : report.failures) {
      msg += "; ";
      msg += to_string(f);
      msg += ": " + why;
    }
    throw std::runtime_error(msg);
  }
  return report;
}

ClassifierModel train_select(const Dataset& data, std::span<const Family> families,
                             const SplitSpec& spec, const LearnOptions& options) {
  return train_select_report(data, families, spec, options).best;
}

// ---------------------------------------------------------------------------
// Persistence

namespace {

json encoder_to_json(const FeatureEncoder& e) {
  return {{"features", e.features}, {"one_hot", e.one_hot}, {"mean", e.mean}, {"scale", e.scale}};
}

FeatureEncoder encoder_from_json(const json& j) {
  FeatureEncoder e;
  e.features = j.at("features").get<std::vector<int>>();
  e.one_hot = j.at("one_hot").get<bool>();
  e.mean = j.at("mean").get<std::vector<double>>();
  e.scale = j.at("scale").get<std::vector<double>>();
  return e;
}

}  // namespace

void ClassifierModel::save(std::ostream& out) const {
  json j;
  j["format"] = "ncml-classifier";
  j["version"] = 1;
  j["family"] = std::string(to_string(family_));
  j["features"] = features_;
  j["validation_accuracy"] = validation_accuracy_;
  json p;
  std::visit(
      [&](const auto& params) {
        using T = std::decay_t<decltype(params)>;
        if constexpr (std::is_same_v<T, NaiveBayesParams>) {
          p["log_prior"] = params.log_prior;
          p["mean"] = params.mean;
          p["variance"] = params.variance;
        } else if constexpr (std::is_same_v<T, TreeParams>) {
          json nodes = json::array();
          for (const auto& n : params.nodes) {
            nodes.push_back({n.feature, n.threshold, n.left, n.right, n.ack, n.nak});
          }
          p["nodes"] = nodes;
        } else if constexpr (std::is_same_v<T, LogisticParams>) {
          p["encoder"] = encoder_to_json(params.encoder);
          p["weights"] = params.weights;
          p["bias"] = params.bias;
        } else {
          p["encoder"] = encoder_to_json(params.encoder);
          p["inputs"] = params.inputs;
          p["hidden"] = params.hidden;
          p["weights"] = params.weights;
        }
      },
      params_);
  j["parameters"] = p;
  out << j.dump(2) << '\n';
}

ClassifierModel ClassifierModel::load(std::istream& in) {
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != "ncml-classifier") {
      throw std::invalid_argument("not a classifier model file");
    }
    const Family family = parse_family(j.at("family").get<std::string>());
    auto features = j.at("features").get<std::vector<int>>();
    const json& p = j.at("parameters");
    ModelParameters params;
    switch (family) {
      case Family::GaussianNaiveBayes: {
        NaiveBayesParams nb;
        nb.log_prior = p.at("log_prior").get<std::array<double, 2>>();
        nb.mean = p.at("mean").get<std::array<std::vector<double>, 2>>();
        nb.variance = p.at("variance").get<std::array<std::vector<double>, 2>>();
        params = nb;
        break;
      }
      case Family::DecisionTree: {
        TreeParams t;
        for (const auto& n : p.at("nodes")) {
          t.nodes.push_back({n.at(0).get<int>(), n.at(1).get<double>(), n.at(2).get<int>(),
                             n.at(3).get<int>(), n.at(4).get<int>(), n.at(5).get<int>()});
        }
        if (t.nodes.empty()) throw std::invalid_argument("decision tree has no nodes");
        params = t;
        break;
      }
      case Family::LogisticRegression: {
        LogisticParams lr;
        lr.encoder = encoder_from_json(p.at("encoder"));
        lr.weights = p.at("weights").get<std::vector<double>>();
        lr.bias = p.at("bias").get<double>();
        params = lr;
        break;
      }
      case Family::MLP: {
        MlpParams m;
        m.encoder = encoder_from_json(p.at("encoder"));
        m.inputs = p.at("inputs").get<int>();
        m.hidden = p.at("hidden").get<int>();
        m.weights = p.at("weights").get<std::vector<double>>();
        if (m.weights.size() != static_cast<std::size_t>(m.hidden) * m.inputs + 2 * m.hidden + 1) {
          throw std::invalid_argument("MLP weight count does not match its shape");
        }
        params = m;
        break;
      }
    }
    ClassifierModel model(family, std::move(features), std::move(params));
    model.set_validation_accuracy(j.at("validation_accuracy").get<double>());
    return model;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed model file: ") + e.what());
  }
}

}  // namespace ncml
