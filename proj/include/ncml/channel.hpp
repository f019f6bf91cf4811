#pragma once

#include <string_view>
#include <variant>

#include "ncml/rng.hpp"

namespace ncml {

enum class TerrainCategory { Terrain1 = 1, Terrain2 = 2, Terrain3 = 3 };
enum class Modulation { BPSK = 0, QPSK = 1, QAM16 = 2 };

std::string_view to_string(TerrainCategory t);
std::string_view to_string(Modulation m);
TerrainCategory parse_terrain(std::string_view s);
Modulation parse_modulation(std::string_view s);

// Erceg suburban terrain constants.
struct TerrainParams {
  double a;            // dimensionless
  double b;            // 1/m
  double c;            // m
  double sigma_gamma;  // dimensionless
  double mu_sigma;     // dB
  double sigma_sigma;  // dB
  TerrainCategory category;

  static TerrainParams preset(TerrainCategory category);
  void validate() const;
};

struct LinkGeometry {
  double distance_m;
  double reference_m = 100.0;
  double wavelength_m = 299792458.0 / 1.9e9;
  double antenna_height_m = 30.0;

  void validate() const;
};

// One zero-mean unit-variance triple (x, y, z) for the random part of the
// path loss.
struct ShadowingDraw {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  // Consumes six uniforms.
  static ShadowingDraw sample(Rng& rng);
  // Componentwise rho * base + sqrt(1 - rho^2) * fresh; stays N(0, 1).
  static ShadowingDraw correlated(const ShadowingDraw& base, const ShadowingDraw& fresh,
                                  double rho);
};

struct LinkBudget {
  double tx_power_dbm = 20.0;
  double noise_floor_dbm = -111.0;
  Modulation modulation = Modulation::BPSK;
  int payload_bits = 1024;

  void validate() const;
};

struct PhysicalChannel {
  TerrainParams terrain;
  LinkGeometry geometry;
  LinkBudget budget;
};

struct AbstractChannel {
  double error_probability;
};

struct ChannelMode {
  std::variant<PhysicalChannel, AbstractChannel> variant;

  static ChannelMode physical(const TerrainParams& t, const LinkGeometry& g, const LinkBudget& b) {
    return {PhysicalChannel{t, g, b}};
  }
  static ChannelMode abstract(double p) { return {AbstractChannel{p}}; }

  bool is_abstract() const { return std::holds_alternative<AbstractChannel>(variant); }
  void validate() const;
};

// 20 log10(4 pi d0 / lambda).
double free_space_ref_loss(double reference_m, double wavelength_m);
double median_path_loss(const LinkGeometry& geom, const TerrainParams& terrain);
double sample_path_loss(const LinkGeometry& geom, const TerrainParams& terrain,
                        const ShadowingDraw& draw);
double snr_db(const LinkBudget& budget, double path_loss_db);

double q_function(double x);
double bit_error_rate(double snr_db, Modulation mod);
double packet_error_prob(double snr_db, Modulation mod, int payload_bits);

// Per-packet success. Physical draws fresh shadowing (six uniforms) then one
// uniform for the Bernoulli trial, seven in total. Abstract consumes one.
bool forward_success(const ChannelMode& mode, Rng& rng);

// Outcome for a known shadowing draw; consumes one uniform in both modes.
// Abstract mode ignores the draw.
bool forward_success(const ChannelMode& mode, const ShadowingDraw& draw, Rng& rng);

// Packet error probability of the mode under a given draw.
double packet_error_prob(const ChannelMode& mode, const ShadowingDraw& draw);

}  // namespace ncml
