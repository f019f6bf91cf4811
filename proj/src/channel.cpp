#include "ncml/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ncml {

std::string_view to_string(TerrainCategory t) {
  switch (t) {
    case TerrainCategory::Terrain1: return "1";
    case TerrainCategory::Terrain2: return "2";
    case TerrainCategory::Terrain3: return "3";
  }
  return "?";
}

std::string_view to_string(Modulation m) {
  switch (m) {
    case Modulation::BPSK: return "BPSK";
    case Modulation::QPSK: return "QPSK";
    case Modulation::QAM16: return "QAM16";
  }
  return "?";
}

TerrainCategory parse_terrain(std::string_view s) {
  if (s == "1" || s == "Terrain1") return TerrainCategory::Terrain1;
  if (s == "2" || s == "Terrain2") return TerrainCategory::Terrain2;
  if (s == "3" || s == "Terrain3") return TerrainCategory::Terrain3;
  throw std::invalid_argument("unknown terrain '" + std::string(s) + "'");
}

Modulation parse_modulation(std::string_view s) {
  if (s == "BPSK") return Modulation::BPSK;
  if (s == "QPSK") return Modulation::QPSK;
  if (s == "QAM16" || s == "16QAM") return Modulation::QAM16;
  throw std::invalid_argument("unknown modulation '" + std::string(s) + "'");
}

TerrainParams TerrainParams::preset(TerrainCategory category) {
  switch (category) {
    case TerrainCategory::Terrain1: return {4.6, 0.0075, 12.6, 0.57, 10.6, 2.3, category};
    case TerrainCategory::Terrain2: return {4.0, 0.0065, 17.1, 0.75, 9.6, 3.0, category};
    case TerrainCategory::Terrain3: return {3.6, 0.005, 20.0, 0.59, 8.2, 1.6, category};
  }
  throw std::invalid_argument("unknown terrain category");
}

void TerrainParams::validate() const {
  if (!(a > 0 && b > 0 && c > 0 && sigma_gamma > 0 && mu_sigma > 0 && sigma_sigma > 0)) {
    throw std::domain_error("terrain constants must be strictly positive");
  }
}

void LinkGeometry::validate() const {
  if (!(reference_m > 0)) throw std::domain_error("reference distance must be positive");
  if (!(distance_m >= reference_m)) {
    throw std::domain_error("distance below reference distance");
  }
  if (!(wavelength_m > 0)) throw std::domain_error("wavelength must be positive");
  if (!(antenna_height_m >= 10.0 && antenna_height_m <= 80.0)) {
    throw std::domain_error("antenna height outside [10, 80] m");
  }
}

ShadowingDraw ShadowingDraw::sample(Rng& rng) {
  ShadowingDraw d;
  d.x = rng.normal();
  d.y = rng.normal();
  d.z = rng.normal();
  return d;
}

ShadowingDraw ShadowingDraw::correlated(const ShadowingDraw& base, const ShadowingDraw& fresh,
                                        double rho) {
  const double w = std::sqrt(std::max(0.0, 1.0 - rho * rho));
  return {rho * base.x + w * fresh.x, rho * base.y + w * fresh.y, rho * base.z + w * fresh.z};
}

void LinkBudget::validate() const {
  if (payload_bits < 1) throw std::domain_error("payload_bits must be >= 1");
}

void ChannelMode::validate() const {
  if (const auto* a = std::get_if<AbstractChannel>(&variant)) {
    if (!(a->error_probability >= 0.0 && a->error_probability < 1.0)) {
      throw std::domain_error("abstract error probability outside [0, 1)");
    }
    return;
  }
  const auto& p = std::get<PhysicalChannel>(variant);
  p.terrain.validate();
  p.geometry.validate();
  p.budget.validate();
}

double free_space_ref_loss(double reference_m, double wavelength_m) {
  if (!(reference_m > 0) || !(wavelength_m > 0)) {
    throw std::domain_error("free-space loss needs positive d0 and wavelength");
  }
  return 20.0 * std::log10(4.0 * std::numbers::pi * reference_m / wavelength_m);
}

namespace {

double path_loss_exponent(const LinkGeometry& geom, const TerrainParams& t) {
  return t.a - t.b * geom.antenna_height_m + t.c / geom.antenna_height_m;
}

}  // namespace

double median_path_loss(const LinkGeometry& geom, const TerrainParams& terrain) {
  geom.validate();
  const double A = free_space_ref_loss(geom.reference_m, geom.wavelength_m);
  return A + 10.0 * path_loss_exponent(geom, terrain) *
                 std::log10(geom.distance_m / geom.reference_m);
}

double sample_path_loss(const LinkGeometry& geom, const TerrainParams& terrain,
                        const ShadowingDraw& draw) {
  const double median = median_path_loss(geom, terrain);
  const double log_ratio = std::log10(geom.distance_m / geom.reference_m);
  return median + 10.0 * draw.x * terrain.sigma_gamma * log_ratio + draw.y * terrain.mu_sigma +
         draw.y * draw.z * terrain.sigma_sigma;
}

double snr_db(const LinkBudget& budget, double path_loss_db) {
  return (budget.tx_power_dbm - path_loss_db) - budget.noise_floor_dbm;
}

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double bit_error_rate(double snr_db, Modulation mod) {
  const double gamma = std::pow(10.0, snr_db / 10.0);
  switch (mod) {
    case Modulation::BPSK: return q_function(std::sqrt(2.0 * gamma));
    case Modulation::QPSK: return q_function(std::sqrt(gamma));
    case Modulation::QAM16: return 0.375 * std::erfc(std::sqrt(gamma / 10.0));
  }
  return 0.5;
}

double packet_error_prob(double snr_db, Modulation mod, int payload_bits) {
  if (payload_bits < 1) throw std::domain_error("payload_bits must be >= 1");
  const double ber = std::clamp(bit_error_rate(snr_db, mod), 0.0, 1.0);
  if (ber >= 1.0) return 1.0;
  // 1 - (1 - ber)^bits without cancellation at tiny ber.
  const double per = -std::expm1(payload_bits * std::log1p(-ber));
  return std::clamp(per, 0.0, 1.0);
}

double packet_error_prob(const ChannelMode& mode, const ShadowingDraw& draw) {
  if (const auto* a = std::get_if<AbstractChannel>(&mode.variant)) return a->error_probability;
  const auto& p = std::get<PhysicalChannel>(mode.variant);
  const double pl = sample_path_loss(p.geometry, p.terrain, draw);
  return packet_error_prob(snr_db(p.budget, pl), p.budget.modulation, p.budget.payload_bits);
}

bool forward_success(const ChannelMode& mode, const ShadowingDraw& draw, Rng& rng) {
  return !rng.bernoulli(packet_error_prob(mode, draw));
}

bool forward_success(const ChannelMode& mode, Rng& rng) {
  if (mode.is_abstract()) return forward_success(mode, ShadowingDraw{}, rng);
  const ShadowingDraw draw = ShadowingDraw::sample(rng);
  return forward_success(mode, draw, rng);
}

}  // namespace ncml
