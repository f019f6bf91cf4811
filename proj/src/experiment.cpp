#include "ncml/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <set>
#include <stdexcept>
#include <thread>

#include "ncml/rng.hpp"

namespace ncml {

namespace {

constexpr std::uint64_t kTrainTag = 0x7a11;
constexpr std::uint64_t kTrialTag = 0x7e57;
constexpr std::uint64_t kPointTag = 0x90147;

LinkBudget forward_budget(const ScenarioConfig& cfg) {
  return {cfg.tx_power_dbm, cfg.noise_floor_dbm, cfg.modulation, cfg.payload_bytes * 8};
}

LinkBudget reverse_budget(const ScenarioConfig& cfg) {
  return {cfg.feedback_tx_power_dbm.value_or(cfg.tx_power_dbm), cfg.noise_floor_dbm,
          cfg.modulation, cfg.feedback_bits};
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string scenario_columns(const ScenarioConfig& c) {
  std::string d;
  for (std::size_t i = 0; i < c.distances.size(); ++i) {
    d += (i ? ";" : "") + fmt(c.distances[i]);
  }
  return std::string(to_string(c.terrain)) + ',' + d + ',' + fmt(c.tx_power_dbm) + ',' +
         (c.abstract_channel ? "abstract" : "physical") + ',' + fmt(c.forward_error) + ',' +
         fmt(c.reverse_error) + ',' + std::to_string(c.receivers) + ',' +
         std::to_string(c.packets);
}

// Leaf-only tree voting for the one label present.
ClassifierModel constant_model(const Dataset& data) {
  TreeParams t;
  TreeNode leaf;
  leaf.ack = static_cast<int>(data.count(Label::ACK));
  leaf.nak = static_cast<int>(data.count(Label::NAK));
  t.nodes.push_back(leaf);
  ClassifierModel m(Family::DecisionTree, {}, t);
  m.set_validation_accuracy(1.0);
  return m;
}

}  // namespace

std::vector<ReceiverLink> build_links(const ScenarioConfig& cfg) {
  cfg.validate();
  std::vector<ReceiverLink> links;
  const TerrainParams terrain = TerrainParams::preset(cfg.terrain);
  for (int r = 0; r < cfg.receivers; ++r) {
    ReceiverLink l;
    l.terrain = terrain;
    l.geometry = {cfg.distance_of(r), cfg.reference_distance_m, cfg.wavelength_m(),
                  cfg.antenna_height_m};
    l.feedback_budget = reverse_budget(cfg);
    if (cfg.abstract_channel) {
      l.forward = ChannelMode::abstract(cfg.forward_error);
      l.reverse = ChannelMode::abstract(cfg.reverse_error);
    } else {
      l.forward = ChannelMode::physical(terrain, l.geometry, forward_budget(cfg));
      l.reverse = ChannelMode::physical(terrain, l.geometry, l.feedback_budget);
    }
    l.flip_fraction = cfg.flip_fraction;
    l.reciprocity = cfg.reciprocity;
    links.push_back(l);
  }
  return links;
}

SchemeConfig scheme_config(const ScenarioConfig& cfg, Scheme scheme,
                           std::shared_ptr<const ClassifierModel> classifier) {
  SchemeConfig s;
  s.scheme = scheme;
  s.classifier = std::move(classifier);
  s.packets = cfg.packets;
  s.receivers = cfg.receivers;
  s.payload_bytes = cfg.payload_bytes;
  s.hybrid_ml = cfg.hybrid_ml;
  s.transmission_cap = cfg.transmission_cap;
  return s;
}

TrainingData generate_training_data(const ScenarioConfig& cfg, int size, std::uint64_t seed) {
  if (size < 0) throw std::invalid_argument("training size must be >= 0");
  TrainingData out;
  if (size == 0) return out;
  StochasticLinks links(build_links(cfg), derive_seed({seed, kTrainTag}));
  const long raw_cap = 1000L * size + 100000L;
  std::vector<FeedbackObservation> batch;
  for (long slot = 0; static_cast<int>(out.data.size()) < size; ++slot) {
    batch.clear();
    for (int r = 0; r < cfg.receivers; ++r) {
      const SlotRealization s = links.realize(slot, r, -1);
      batch.push_back(s.feedback.observe(s.delivered ? Label::ACK : Label::NAK));
    }
    out.raw_observations += static_cast<long>(batch.size());
    for (auto& e : harvest_labels(batch)) {
      if (static_cast<int>(out.data.size()) == size) break;
      out.data.examples.push_back(e);
    }
    if (out.raw_observations > raw_cap) {
      throw std::runtime_error("feedback channel too lossy to collect training data");
    }
  }
  return out;
}

TrainedClassifier train_classifier(const ScenarioConfig& cfg, std::uint64_t seed) {
  TrainedClassifier out;
  const Dataset data = generate_training_data(cfg, cfg.training_size, seed).data;
  out.examples = data.size();
  if (data.empty()) throw std::invalid_argument("training_size is 0");
  if (!data.has_both_classes()) {
    out.degenerate = true;
    out.report.best = constant_model(data);
    out.model = std::make_shared<ClassifierModel>(out.report.best);
    return out;
  }
  out.report = train_select_report(data, cfg.families,
                                   {cfg.train_fraction, derive_seed({seed, kTrainTag, 1})},
                                   cfg.learn_options());
  out.model = std::make_shared<ClassifierModel>(out.report.best);
  return out;
}

std::uint64_t trial_seed(std::uint64_t base_seed, int index) {
  return derive_seed({base_seed, kTrialTag, static_cast<std::uint64_t>(index)});
}

std::vector<TrialRecord> run_trials(const ScenarioConfig& cfg, Scheme scheme,
                                    std::shared_ptr<const ClassifierModel> classifier,
                                    int trials, std::uint64_t base_seed,
                                    const std::string& scenario) {
  const SchemeConfig sc = scheme_config(cfg, scheme, std::move(classifier));
  sc.validate();
  const auto links = build_links(cfg);
  std::set<std::pair<int, int>> script(cfg.script_losses.begin(), cfg.script_losses.end());

  std::vector<TrialRecord> records(static_cast<std::size_t>(std::max(trials, 0)));
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (int i; (i = next.fetch_add(1)) < trials;) {
      try {
        const std::uint64_t seed = trial_seed(base_seed, i);
        TrialRecord rec;
        if (cfg.scripted) {
          ScriptedLinks layer(cfg.receivers, script);
          rec = run_trial(sc, layer, seed);
        } else {
          rec = run_trial(sc, links, seed);
        }
        rec.scenario = scenario;
        records[static_cast<std::size_t>(i)] = std::move(rec);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        next = trials;
      }
    }
  };
  const unsigned workers =
      std::clamp(std::thread::hardware_concurrency(), 1u, static_cast<unsigned>(std::max(trials, 1)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  return records;
}

std::vector<SweepRow> run_sweep(const ScenarioConfig& cfg, std::uint64_t base_seed,
                                const SweepOptions& options) {
  const SweepSpec& sweep = cfg.sweep;
  if (sweep.schemes.empty()) throw ConfigError("schemes", "no schemes to run");
  if (sweep.values.empty()) throw ConfigError("sweep_values", "no sweep values");
  const bool needs_model = std::any_of(sweep.schemes.begin(), sweep.schemes.end(), uses_classifier);
  const int trials = options.trials.value_or(cfg.trials);

  std::vector<SweepRow> rows;
  for (std::size_t p = 0; p < sweep.values.size(); ++p) {
    const ScenarioConfig point = apply_sweep_value(cfg, sweep.axis, sweep.values[p]);
    const std::uint64_t point_seed = derive_seed({base_seed, kPointTag, p});
    std::shared_ptr<const ClassifierModel> model = options.global_model;
    if (needs_model && !model) model = train_classifier(point, point_seed).model;

    const std::string scenario = scenario_columns(point);
    for (Scheme s : sweep.schemes) {
      const bool ml = uses_classifier(s);
      const auto records = run_trials(point, s, ml ? model : nullptr, trials, point_seed, scenario);
      SweepRow row;
      row.axis = std::string(to_string(sweep.axis));
      row.value = sweep.values[p];
      row.scenario = scenario;
      row.scheme = s;
      row.result = effective_throughput(records);
      row.flagged = row.result.aborted_count * 100 > static_cast<long>(records.size());
      if (ml) {
        row.model = std::string(to_string(model->family()));
        row.model_accuracy = model->validation_accuracy();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "axis,value,terrain,distance,tx_power,channel,forward_error,reverse_error,K,M,"
         "scheme,eta,stderr,N,aborted_count,flagged,model,model_accuracy\n";
  char buf[64];
  for (const auto& r : rows) {
    out << r.axis << ',' << r.value << ',' << r.scenario << ',' << to_string(r.scheme) << ',';
    std::snprintf(buf, sizeof buf, "%.9g,%.9g", r.result.eta, r.result.stderr_eta);
    out << buf << ',' << r.result.trial_count << ',' << r.result.aborted_count << ','
        << (r.flagged ? 1 : 0) << ',' << r.model << ',';
    if (!r.model.empty()) {
      std::snprintf(buf, sizeof buf, "%.6g", r.model_accuracy);
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace ncml
