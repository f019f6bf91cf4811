#include "ncml/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "ncml/config.hpp"
#include "ncml/experiment.hpp"

namespace ncml {

namespace {

constexpr int kUsageError = 2;

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;
};

ScenarioConfig load(const Common& c) {
  return c.config_path.empty() ? ScenarioConfig{} : load_config(c.config_path);
}

// Writes the buffered result to --out, or to `out` when no path was given.
void emit(const Common& c, const std::string& text, std::ostream& out) {
  if (c.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + c.out_path + "'");
  f << text;
}

std::shared_ptr<const ClassifierModel> load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model '" + path + "'");
  return std::make_shared<ClassifierModel>(ClassifierModel::load(in));
}

void report_training(const TrainedClassifier& t, std::ostream& os) {
  if (t.degenerate) {
    os << "training data holds one label only (" << t.examples
       << " examples); using a constant classifier\n";
    return;
  }
  for (const auto& m : t.report.candidates) {
    os << to_string(m.family()) << " accuracy=" << m.validation_accuracy() << " features=";
    for (std::size_t i = 0; i < m.selected_features().size(); ++i) {
      os << (i ? "," : "") << kFeatureNames[m.selected_features()[i]];
    }
    os << '\n';
  }
  for (const auto& [family, why] : t.report.failures) {
    os << to_string(family) << " failed: " << why << '\n';
  }
  os << "selected " << to_string(t.model->family())
     << " validation_accuracy=" << t.model->validation_accuracy() << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Broadcast retransmission simulator"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "Scenario file (key = value)");
    sub->add_option("--seed", common.seed, "Base seed");
    sub->add_option("--out", common.out_path, "Output file (default stdout)");
  };

  auto* gen = app.add_subcommand("gen-data", "Emit a training CSV");
  std::optional<int> size;
  gen->add_option("--size", size, "Number of clean examples");
  add_common(gen);

  auto* train_cmd = app.add_subcommand("train", "Fit and save a classifier");
  std::string data_path;
  train_cmd->add_option("--data", data_path, "Training CSV (generated when absent)");
  add_common(train_cmd);

  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep");
  bool global_model = false;
  std::string model_path;
  std::optional<int> trials;
  std::optional<std::string> schemes;
  sweep->add_flag("--global-model", global_model, "Train one model for every sweep point");
  sweep->add_option("--model", model_path, "Use a saved model at every sweep point");
  sweep->add_option("--trials", trials, "Trials per point");
  sweep->add_option("--schemes", schemes, "Comma-separated scheme list");
  add_common(sweep);

  auto* trial = app.add_subcommand("trial", "Run one traced trial");
  std::optional<std::string> scheme_name;
  std::string trial_model;
  trial->add_option("--scheme", scheme_name, "ARQ, ARQ-ML, NC or NC-ML");
  trial->add_option("--model", trial_model, "Saved model for ML schemes");
  add_common(trial);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    ScenarioConfig cfg = load(common);
    const std::uint64_t seed = cfg.resolve_seed(common.seed);
    std::ostringstream result;

    if (gen->parsed()) {
      const int n = size.value_or(cfg.training_size);
      if (n < 0) throw ConfigError("--size", "must be >= 0");
      const TrainingData d = generate_training_data(cfg, n, seed);
      write_training_csv(result, d.data.examples);
      emit(common, result.str(), out);
    } else if (train_cmd->parsed()) {
      TrainedClassifier t;
      if (data_path.empty()) {
        t = train_classifier(cfg, seed);
      } else {
        std::ifstream in(data_path);
        if (!in) throw std::runtime_error("cannot open '" + data_path + "'");
        Dataset data{read_training_csv(in)};
        t.examples = data.size();
        t.report = train_select_report(data, cfg.families, {cfg.train_fraction, seed},
                                       cfg.learn_options());
        t.model = std::make_shared<ClassifierModel>(t.report.best);
      }
      t.model->save(result);
      emit(common, result.str(), out);
      report_training(t, common.out_path.empty() ? err : out);
    } else if (sweep->parsed()) {
      if (schemes) {
        cfg.sweep.schemes.clear();
        std::stringstream ss(*schemes);
        for (std::string s; std::getline(ss, s, ',');) {
          if (!s.empty()) cfg.sweep.schemes.push_back(parse_scheme(s));
        }
      }
      if (cfg.sweep.schemes.empty()) {
        err << "sweep: no schemes given\n";
        return kUsageError;
      }
      SweepOptions opt;
      opt.trials = trials;
      if (!model_path.empty()) {
        opt.global_model = load_model(model_path);
      } else if (global_model || cfg.global_model) {
        opt.global_model = train_classifier(cfg, seed).model;
      }
      write_sweep_csv(result, run_sweep(cfg, seed, opt));
      emit(common, result.str(), out);
    } else if (trial->parsed()) {
      const Scheme scheme = scheme_name ? parse_scheme(*scheme_name) : cfg.scheme;
      std::shared_ptr<const ClassifierModel> model;
      if (uses_classifier(scheme)) {
        model = trial_model.empty() ? train_classifier(cfg, seed).model : load_model(trial_model);
      }
      const SchemeConfig sc = scheme_config(cfg, scheme, model);
      TrialRecord rec;
      if (cfg.scripted) {
        ScriptedLinks links(cfg.receivers, {cfg.script_losses.begin(), cfg.script_losses.end()});
        rec = run_trial(sc, links, seed, &result);
      } else {
        rec = run_trial(sc, build_links(cfg), seed, &result);
      }
      result << to_string(scheme) << " n=" << rec.n << " polls=" << rec.polls
             << (rec.aborted ? " aborted" : "") << '\n';
      emit(common, result.str(), out);
    }
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace ncml
