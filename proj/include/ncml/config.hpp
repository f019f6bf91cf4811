#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ncml/channel.hpp"
#include "ncml/learn.hpp"
#include "ncml/metrics.hpp"

namespace ncml {

// Raised for any bad configuration value; field() names the offending key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class SweepAxis { Distance, TxPower, ForwardErrorProb, Terrain, TrainingSize, ModelFamily };

std::string_view to_string(SweepAxis a);
SweepAxis parse_sweep_axis(std::string_view s);

struct SweepSpec {
  SweepAxis axis = SweepAxis::Distance;
  std::vector<std::string> values;
  std::vector<Scheme> schemes;

  bool operator==(const SweepSpec&) const = default;
};

struct ScenarioConfig {
  // Environment
  TerrainCategory terrain = TerrainCategory::Terrain1;
  std::vector<double> distances = {400.0};  // one value applies to every receiver
  double tx_power_dbm = 20.0;
  std::optional<double> feedback_tx_power_dbm;  // follows tx_power when unset
  double noise_floor_dbm = -111.0;
  Modulation modulation = Modulation::BPSK;
  double reference_distance_m = 100.0;
  double carrier_hz = 1.9e9;
  double antenna_height_m = 30.0;

  // Channel model
  bool abstract_channel = false;
  double forward_error = 0.1;
  double reverse_error = 0.1;
  double flip_fraction = 0.1;
  double reciprocity = 0.97;

  // Broadcast
  int receivers = 2;
  int packets = 32;
  int payload_bytes = 128;
  int feedback_bits = 64;
  long transmission_cap = 10000;
  Scheme scheme = Scheme::NC;  // used by `trial`
  std::vector<std::pair<int, int>> script_losses;  // (packet, receiver) first-copy losses
  bool scripted = false;

  // Learning
  int training_size = 3000;
  double train_fraction = 0.8;
  std::vector<Family> families = {kAllFamilies.begin(), kAllFamilies.end()};
  bool hybrid_ml = false;
  bool global_model = false;
  int mlp_hidden = 16;
  int mlp_epochs = 200;
  double mlp_step = 0.05;
  int mlp_batch = 32;

  // Experiment
  std::optional<std::uint64_t> seed;
  int trials = 2000;
  SweepSpec sweep = {SweepAxis::Distance,
                     {"200", "250", "300", "350", "400", "450", "500"},
                     {Scheme::ARQ, Scheme::ARQ_ML, Scheme::NC, Scheme::NC_ML}};

  bool operator==(const ScenarioConfig&) const = default;

  // Throws ConfigError naming the first violated field.
  void validate() const;

  double wavelength_m() const { return 299792458.0 / carrier_hz; }
  double distance_of(int receiver) const {
    return distances.size() == 1 ? distances.front()
                                 : distances.at(static_cast<std::size_t>(receiver));
  }
  LearnOptions learn_options() const;

  // Seed precedence: explicit override, config file, NCML_SEED, then 1.
  std::uint64_t resolve_seed(std::optional<std::uint64_t> override_seed = std::nullopt) const;
};

// Flat key=value text, '#' starts a comment.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::string& path);
std::string to_text(const ScenarioConfig& cfg);

// Applies one sweep value to a copy of the config.
ScenarioConfig apply_sweep_value(const ScenarioConfig& cfg, SweepAxis axis,
                                 const std::string& value);

}  // namespace ncml
