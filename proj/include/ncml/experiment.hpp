#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ncml/config.hpp"
#include "ncml/learn.hpp"
#include "ncml/metrics.hpp"
#include "ncml/trial.hpp"

namespace ncml {

std::vector<ReceiverLink> build_links(const ScenarioConfig& cfg);

SchemeConfig scheme_config(const ScenarioConfig& cfg, Scheme scheme,
                           std::shared_ptr<const ClassifierModel> classifier = nullptr);

struct TrainingData {
  Dataset data;
  long raw_observations = 0;  // feedback signals seen, clean or not
};

// Broadcasts over the scenario's links and keeps the feedback that decoded
// correctly, labelled with the receiver's true state, until `size` examples
// are collected.
TrainingData generate_training_data(const ScenarioConfig& cfg, int size, std::uint64_t seed);

struct TrainedClassifier {
  std::shared_ptr<const ClassifierModel> model;
  SelectionReport report;
  std::size_t examples = 0;
  // Set when the data held a single label and the model is a leaf-only tree.
  bool degenerate = false;
};

// Generates cfg.training_size examples and runs the family selection.
TrainedClassifier train_classifier(const ScenarioConfig& cfg, std::uint64_t seed);

// N paired trials: trial i uses the same seed for every scheme.
std::vector<TrialRecord> run_trials(const ScenarioConfig& cfg, Scheme scheme,
                                    std::shared_ptr<const ClassifierModel> classifier,
                                    int trials, std::uint64_t base_seed,
                                    const std::string& scenario = "");

std::uint64_t trial_seed(std::uint64_t base_seed, int index);

struct SweepOptions {
  // When set, every sweep point uses this model instead of training its own.
  std::shared_ptr<const ClassifierModel> global_model;
  std::optional<int> trials;
};

struct SweepRow {
  std::string axis;
  std::string value;
  std::string scenario;  // comma-joined scenario columns
  Scheme scheme = Scheme::ARQ;
  ThroughputResult result;
  bool flagged = false;  // abort rate above 1%
  std::string model;
  double model_accuracy = 0.0;
};

std::vector<SweepRow> run_sweep(const ScenarioConfig& cfg, std::uint64_t base_seed,
                                const SweepOptions& options = {});

// Scenario columns, then scheme,eta,stderr,N,aborted_count,flagged,model,model_accuracy.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace ncml
