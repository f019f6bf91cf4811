#include "ncml/config.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace ncml {

std::string_view to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::Distance: return "Distance";
    case SweepAxis::TxPower: return "TxPower";
    case SweepAxis::ForwardErrorProb: return "ForwardErrorProb";
    case SweepAxis::Terrain: return "Terrain";
    case SweepAxis::TrainingSize: return "TrainingSize";
    case SweepAxis::ModelFamily: return "ModelFamily";
  }
  return "?";
}

SweepAxis parse_sweep_axis(std::string_view s) {
  for (SweepAxis a : {SweepAxis::Distance, SweepAxis::TxPower, SweepAxis::ForwardErrorProb,
                      SweepAxis::Terrain, SweepAxis::TrainingSize, SweepAxis::ModelFamily}) {
    if (s == to_string(a)) return a;
  }
  throw std::invalid_argument("unknown sweep axis '" + std::string(s) + "'");
}

LearnOptions ScenarioConfig::learn_options() const {
  LearnOptions o;
  o.mlp_hidden = mlp_hidden;
  o.mlp_epochs = mlp_epochs;
  o.mlp_step = mlp_step;
  o.mlp_batch = mlp_batch;
  return o;
}

std::uint64_t ScenarioConfig::resolve_seed(std::optional<std::uint64_t> override_seed) const {
  if (override_seed) return *override_seed;
  if (seed) return *seed;
  if (const char* env = std::getenv("NCML_SEED"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return v;
    throw ConfigError("NCML_SEED", "not an unsigned integer");
  }
  return 1;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
std::string join(const std::vector<T>& v, auto&& to_str) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += to_str(v[i]);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double d = 0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a number, got '" + v + "'");
  }
  if (used != v.size()) throw ConfigError(key, "expected a number, got '" + v + "'");
  return d;
}

long to_long(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long n = 0;
  try {
    n = std::stol(v, &used);
  } catch (const std::exception&) {
    throw ConfigError(key, "expected an integer, got '" + v + "'");
  }
  if (used != v.size()) throw ConfigError(key, "expected an integer, got '" + v + "'");
  return n;
}

int to_int(const std::string& key, const std::string& v) {
  return static_cast<int>(to_long(key, v));
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key, "expected true/false, got '" + v + "'");
}

template <typename F>
auto wrap(const std::string& key, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(key, e.what());
  }
}

void set_value(ScenarioConfig& c, const std::string& key, const std::string& v) {
  if (key == "terrain") {
    c.terrain = wrap(key, [&] { return parse_terrain(v); });
  } else if (key == "distance") {
    c.distances.clear();
    for (const auto& s : split_list(v)) c.distances.push_back(to_double(key, s));
  } else if (key == "tx_power") {
    c.tx_power_dbm = to_double(key, v);
  } else if (key == "feedback_tx_power") {
    c.feedback_tx_power_dbm = to_double(key, v);
  } else if (key == "noise_floor") {
    c.noise_floor_dbm = to_double(key, v);
  } else if (key == "modulation") {
    c.modulation = wrap(key, [&] { return parse_modulation(v); });
  } else if (key == "reference_distance") {
    c.reference_distance_m = to_double(key, v);
  } else if (key == "carrier_hz") {
    c.carrier_hz = to_double(key, v);
  } else if (key == "antenna_height") {
    c.antenna_height_m = to_double(key, v);
  } else if (key == "channel") {
    if (v == "physical") c.abstract_channel = false;
    else if (v == "abstract") c.abstract_channel = true;
    else throw ConfigError(key, "expected physical or abstract, got '" + v + "'");
  } else if (key == "forward_error") {
    c.forward_error = to_double(key, v);
  } else if (key == "reverse_error") {
    c.reverse_error = to_double(key, v);
  } else if (key == "flip_fraction") {
    c.flip_fraction = to_double(key, v);
  } else if (key == "reciprocity") {
    c.reciprocity = to_double(key, v);
  } else if (key == "receivers") {
    c.receivers = to_int(key, v);
  } else if (key == "packets") {
    c.packets = to_int(key, v);
  } else if (key == "payload_bytes") {
    c.payload_bytes = to_int(key, v);
  } else if (key == "feedback_bits") {
    c.feedback_bits = to_int(key, v);
  } else if (key == "transmission_cap") {
    c.transmission_cap = to_long(key, v);
  } else if (key == "scheme") {
    c.scheme = wrap(key, [&] { return parse_scheme(v); });
  } else if (key == "script_losses") {
    c.scripted = true;
    c.script_losses.clear();
    for (const auto& item : split_list(v)) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) {
        throw ConfigError(key, "expected packet:receiver pairs, got '" + item + "'");
      }
      c.script_losses.emplace_back(to_int(key, trim(item.substr(0, colon))),
                                   to_int(key, trim(item.substr(colon + 1))));
    }
  } else if (key == "training_size") {
    c.training_size = to_int(key, v);
  } else if (key == "train_fraction") {
    c.train_fraction = to_double(key, v);
  } else if (key == "families") {
    c.families.clear();
    for (const auto& s : split_list(v)) c.families.push_back(wrap(key, [&] { return parse_family(s); }));
  } else if (key == "hybrid_ml") {
    c.hybrid_ml = to_bool(key, v);
  } else if (key == "global_model") {
    c.global_model = to_bool(key, v);
  } else if (key == "mlp_hidden") {
    c.mlp_hidden = to_int(key, v);
  } else if (key == "mlp_epochs") {
    c.mlp_epochs = to_int(key, v);
  } else if (key == "mlp_step") {
    c.mlp_step = to_double(key, v);
  } else if (key == "mlp_batch") {
    c.mlp_batch = to_int(key, v);
  } else if (key == "seed") {
    std::size_t used = 0;
    try {
      if (!v.empty() && v[0] != '-') c.seed = std::stoull(v, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != v.size()) throw ConfigError(key, "expected an unsigned integer, got '" + v + "'");
  } else if (key == "trials") {
    c.trials = to_int(key, v);
  } else if (key == "sweep_axis") {
    c.sweep.axis = wrap(key, [&] { return parse_sweep_axis(v); });
  } else if (key == "sweep_values") {
    c.sweep.values = split_list(v);
  } else if (key == "schemes") {
    c.sweep.schemes.clear();
    for (const auto& s : split_list(v)) c.sweep.schemes.push_back(wrap(key, [&] { return parse_scheme(s); }));
  } else {
    throw ConfigError(key, "unknown key");
  }
}

void require(bool ok, const char* field, const std::string& what) {
  if (!ok) throw ConfigError(field, what);
}

}  // namespace

void ScenarioConfig::validate() const {
  require(!distances.empty(), "distance", "needs at least one value");
  require(distances.size() == 1 || static_cast<int>(distances.size()) == receivers, "distance",
          "list length must be 1 or equal to receivers");
  for (double d : distances) {
    require(d >= reference_distance_m, "distance", "must be >= reference_distance");
  }
  require(reference_distance_m > 0, "reference_distance", "must be positive");
  require(carrier_hz > 0, "carrier_hz", "must be positive");
  require(antenna_height_m >= 10 && antenna_height_m <= 80, "antenna_height",
          "must lie in [10, 80] m");
  require(forward_error >= 0 && forward_error < 1, "forward_error", "must lie in [0, 1)");
  require(reverse_error >= 0 && reverse_error < 1, "reverse_error", "must lie in [0, 1)");
  require(flip_fraction >= 0 && flip_fraction <= 1, "flip_fraction", "must lie in [0, 1]");
  require(reciprocity >= 0 && reciprocity <= 1, "reciprocity", "must lie in [0, 1]");
  require(receivers >= 1, "receivers", "must be >= 1");
  require(packets >= 1, "packets", "must be >= 1");
  require(payload_bytes >= 1, "payload_bytes", "must be >= 1");
  require(feedback_bits >= 1, "feedback_bits", "must be >= 1");
  require(transmission_cap >= 1, "transmission_cap", "must be >= 1");
  for (const auto& [m, r] : script_losses) {
    require(m >= 0 && m < packets && r >= 0 && r < receivers, "script_losses",
            "entry outside packets x receivers");
  }
  require(training_size >= 0, "training_size", "must be >= 0");
  require(train_fraction > 0 && train_fraction < 1, "train_fraction", "must lie in (0, 1)");
  require(!families.empty(), "families", "needs at least one model family");
  require(mlp_hidden >= 1, "mlp_hidden", "must be >= 1");
  require(mlp_epochs >= 1, "mlp_epochs", "must be >= 1");
  require(mlp_step > 0, "mlp_step", "must be positive");
  require(mlp_batch >= 1, "mlp_batch", "must be >= 1");
  require(trials >= 1, "trials", "must be >= 1");
}

ScenarioConfig parse_config(std::string_view text) {
  ScenarioConfig c;
  std::map<std::string, std::string> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no), "expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (seen.contains(key)) throw ConfigError(key, "given twice");
    seen[key] = value;
    set_value(c, key, value);
  }
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_text(const ScenarioConfig& c) {
  std::ostringstream o;
  o << "terrain = " << to_string(c.terrain) << '\n';
  o << "distance = " << join(c.distances, fmt) << '\n';
  o << "tx_power = " << fmt(c.tx_power_dbm) << '\n';
  if (c.feedback_tx_power_dbm) o << "feedback_tx_power = " << fmt(*c.feedback_tx_power_dbm) << '\n';
  o << "noise_floor = " << fmt(c.noise_floor_dbm) << '\n';
  o << "modulation = " << to_string(c.modulation) << '\n';
  o << "reference_distance = " << fmt(c.reference_distance_m) << '\n';
  o << "carrier_hz = " << fmt(c.carrier_hz) << '\n';
  o << "antenna_height = " << fmt(c.antenna_height_m) << '\n';
  o << "channel = " << (c.abstract_channel ? "abstract" : "physical") << '\n';
  o << "forward_error = " << fmt(c.forward_error) << '\n';
  o << "reverse_error = " << fmt(c.reverse_error) << '\n';
  o << "flip_fraction = " << fmt(c.flip_fraction) << '\n';
  o << "reciprocity = " << fmt(c.reciprocity) << '\n';
  o << "receivers = " << c.receivers << '\n';
  o << "packets = " << c.packets << '\n';
  o << "payload_bytes = " << c.payload_bytes << '\n';
  o << "feedback_bits = " << c.feedback_bits << '\n';
  o << "transmission_cap = " << c.transmission_cap << '\n';
  o << "scheme = " << to_string(c.scheme) << '\n';
  if (c.scripted) {
    o << "script_losses = "
      << join(c.script_losses,
              [](const auto& p) { return std::to_string(p.first) + ":" + std::to_string(p.second); })
      << '\n';
  }
  o << "training_size = " << c.training_size << '\n';
  o << "train_fraction = " << fmt(c.train_fraction) << '\n';
  o << "families = " << join(c.families, [](Family f) { return std::string(to_string(f)); })
    << '\n';
  o << "hybrid_ml = " << (c.hybrid_ml ? "true" : "false") << '\n';
  o << "global_model = " << (c.global_model ? "true" : "false") << '\n';
  o << "mlp_hidden = " << c.mlp_hidden << '\n';
  o << "mlp_epochs = " << c.mlp_epochs << '\n';
  o << "mlp_step = " << fmt(c.mlp_step) << '\n';
  o << "mlp_batch = " << c.mlp_batch << '\n';
  if (c.seed) o << "seed = " << *c.seed << '\n';
  o << "trials = " << c.trials << '\n';
  o << "sweep_axis = " << to_string(c.sweep.axis) << '\n';
  o << "sweep_values = " << join(c.sweep.values, [](const std::string& s) { return s; }) << '\n';
  o << "schemes = "
    << join(c.sweep.schemes, [](Scheme s) { return std::string(to_string(s)); }) << '\n';
  return o.str();
}

ScenarioConfig apply_sweep_value(const ScenarioConfig& cfg, SweepAxis axis,
                                 const std::string& value) {
  ScenarioConfig c = cfg;
  switch (axis) {
    case SweepAxis::Distance: c.distances = {to_double("sweep_values", value)}; break;
    case SweepAxis::TxPower: c.tx_power_dbm = to_double("sweep_values", value); break;
    case SweepAxis::ForwardErrorProb:
      c.abstract_channel = true;
      c.forward_error = to_double("sweep_values", value);
      break;
    case SweepAxis::Terrain:
      c.terrain = wrap("sweep_values", [&] { return parse_terrain(value); });
      break;
    case SweepAxis::TrainingSize: c.training_size = to_int("sweep_values", value); break;
    case SweepAxis::ModelFamily:
      c.families = {wrap("sweep_values", [&] { return parse_family(value); })};
      break;
  }
  c.validate();
  return c;
}

}  // namespace ncml
