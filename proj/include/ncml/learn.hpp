#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "ncml/feedback.hpp"

namespace ncml {

enum class Family { GaussianNaiveBayes, DecisionTree, LogisticRegression, MLP };

// Fixed enumeration order; selection ties go to the earliest entry.
inline constexpr std::array<Family, 4> kAllFamilies = {
    Family::GaussianNaiveBayes, Family::DecisionTree, Family::LogisticRegression, Family::MLP};

std::string_view to_string(Family f);
Family parse_family(std::string_view s);

struct Dataset {
  std::vector<LabeledExample> examples;

  std::size_t size() const { return examples.size(); }
  bool empty() const { return examples.empty(); }
  std::size_t count(Label l) const;
  bool has_both_classes() const { return count(Label::ACK) > 0 && count(Label::NAK) > 0; }
  static constexpr std::span<const std::string_view> feature_names() { return kFeatureNames; }
};

struct SplitSpec {
  double train_fraction = 0.8;
  std::uint64_t seed = 1;
};

// Stratified by label; deterministic in (example order, seed).
std::pair<Dataset, Dataset> split(const Dataset& data, const SplitSpec& spec);

struct LearnOptions {
  double variance_floor = 1e-6;

  int tree_max_depth = 8;
  int tree_min_leaf = 5;

  double logistic_step = 0.5;
  double logistic_tolerance = 1e-6;
  int logistic_max_iterations = 2000;

  int mlp_hidden = 16;
  int mlp_epochs = 200;
  double mlp_step = 0.05;
  int mlp_batch = 32;
  std::uint64_t mlp_seed = 0x5eed;
};

// Maps a canonical feature vector to model inputs: numeric features are
// standardized with training statistics; categorical ones either pass
// through as integers or expand to one-hot columns.
struct FeatureEncoder {
  std::vector<int> features;
  bool one_hot = false;
  std::vector<double> mean;
  std::vector<double> scale;

  static FeatureEncoder fit(const Dataset& data, std::vector<int> features, bool one_hot);
  std::size_t width() const;
  std::vector<double> encode(const std::array<double, kNumFeatures>& x) const;
};

struct NaiveBayesParams {
  // Index 0 is NAK, 1 is ACK. Per-class vectors run over selected features.
  std::array<double, 2> log_prior{};
  std::array<std::vector<double>, 2> mean;
  std::array<std::vector<double>, 2> variance;
};

struct TreeNode {
  int feature = -1;  // canonical feature index; -1 marks a leaf
  double threshold = 0.0;
  int left = -1;   // x <= threshold
  int right = -1;  // x > threshold
  int ack = 0;
  int nak = 0;
};

struct TreeParams {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
};

struct LogisticParams {
  FeatureEncoder encoder;
  std::vector<double> weights;
  double bias = 0.0;
};

// One hidden layer, sigmoid everywhere. Weights are stored flat:
// w1 (hidden x inputs, row-major), b1 (hidden), w2 (hidden), b2.
struct MlpParams {
  FeatureEncoder encoder;
  int inputs = 0;
  int hidden = 0;
  std::vector<double> weights;
};

using ModelParameters = std::variant<NaiveBayesParams, TreeParams, LogisticParams, MlpParams>;

class ClassifierModel {
 public:
  ClassifierModel() = default;
  ClassifierModel(Family family, std::vector<int> features, ModelParameters params)
      : family_(family), features_(std::move(features)), params_(std::move(params)) {}

  Family family() const { return family_; }
  const std::vector<int>& selected_features() const { return features_; }
  const ModelParameters& parameters() const { return params_; }
  double validation_accuracy() const { return validation_accuracy_; }
  void set_validation_accuracy(double a) { validation_accuracy_ = a; }

  // Score for ACK; > 0 predicts ACK, so an exact tie predicts NAK.
  double decision_score(const std::array<double, kNumFeatures>& x) const;
  Label predict(const std::array<double, kNumFeatures>& x) const;
  Label predict(const FeedbackFeatures& f) const { return predict(f.as_vector()); }

  void save(std::ostream& out) const;
  static ClassifierModel load(std::istream& in);

 private:
  Family family_ = Family::GaussianNaiveBayes;
  std::vector<int> features_;
  ModelParameters params_;
  double validation_accuracy_ = 0.0;
};

ClassifierModel train(Family family, const Dataset& train_data, std::vector<int> features,
                      const LearnOptions& options = {});

double evaluate(const ClassifierModel& model, const Dataset& data);

// Greedy forward selection on validation accuracy. The first feature is
// always taken; later ones only when they strictly improve accuracy.
std::vector<int> choose_attributes(const Dataset& train_data, Family family,
                                   const Dataset& validation, const LearnOptions& options = {});

struct SelectionReport {
  ClassifierModel best;
  std::vector<ClassifierModel> candidates;
  std::vector<std::pair<Family, std::string>> failures;
};

SelectionReport train_select_report(const Dataset& data, std::span<const Family> families,
                                    const SplitSpec& spec, const LearnOptions& options = {});

ClassifierModel train_select(const Dataset& data, std::span<const Family> families,
                             const SplitSpec& spec, const LearnOptions& options = {});

namespace mlp {

// Mean cross-entropy over the batch and, when grad is non-null, its gradient
// with respect to the flat weight vector.
double loss_and_gradient(int inputs, int hidden, std::span<const double> weights,
                         std::span<const std::vector<double>> x, std::span<const double> y,
                         std::vector<double>* grad);

std::vector<double> init_weights(int inputs, int hidden, Rng& rng);

// Per-epoch mean training loss is appended to loss_history when non-null.
MlpParams fit(const Dataset& data, std::vector<int> features, const LearnOptions& options,
              std::vector<double>* loss_history = nullptr);

}  // namespace mlp

}  // namespace ncml
