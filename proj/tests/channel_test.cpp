#include "ncml/channel.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace ncml {
namespace {

// Tail integral of the standard normal density by composite Simpson.
double q_by_quadrature(double x) {
  const int n = 20000;
  const double hi = x + 40.0, h = (hi - x) / n;
  auto phi = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi); };
  double s = phi(x) + phi(hi);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * phi(x + i * h);
  return s * h / 3.0;
}

TEST(QFunction, MatchesQuadrature) {
  for (double x : {-2.0, 0.0, 0.5, 1.0, 2.0, 3.0, 4.5}) {
    EXPECT_NEAR(q_function(x), q_by_quadrature(x), 1e-10 + 1e-8 * q_by_quadrature(x)) << x;
  }
  EXPECT_DOUBLE_EQ(q_function(0.0), 0.5);
}

TEST(PathLoss, ReferenceLossAt1900MHz) {
  const double lambda = 299792458.0 / 1.9e9;
  EXPECT_NEAR(free_space_ref_loss(100.0, lambda), 78.0, 0.05);
}

TEST(PathLoss, Terrain1At200mByHand) {
  const auto t = TerrainParams::preset(TerrainCategory::Terrain1);
  const LinkGeometry g{200.0};
  const double lambda = 299792458.0 / 1.9e9;
  const double A = 20.0 * std::log10(4.0 * std::numbers::pi * 100.0 / lambda);
  const double gamma = 4.6 - 0.0075 * 30.0 + 12.6 / 30.0;
  EXPECT_NEAR(median_path_loss(g, t), A + 10.0 * gamma * std::log10(2.0), 1e-9);
  EXPECT_NEAR(median_path_loss(g, t), 92.46, 0.05);
  EXPECT_NEAR(snr_db(LinkBudget{}, median_path_loss(g, t)), 20.0 - 92.46 + 111.0, 0.05);
}

TEST(PathLoss, ShadowingTermsEnterLinearly) {
  const auto t = TerrainParams::preset(TerrainCategory::Terrain2);
  const LinkGeometry g{300.0};
  const double median = median_path_loss(g, t);
  const double lr = std::log10(3.0);
  EXPECT_NEAR(sample_path_loss(g, t, {1.0, 0.0, 0.0}) - median, 10.0 * t.sigma_gamma * lr, 1e-9);
  EXPECT_NEAR(sample_path_loss(g, t, {0.0, 1.0, 0.0}) - median, t.mu_sigma, 1e-9);
  EXPECT_NEAR(sample_path_loss(g, t, {0.0, 1.0, 1.0}) - median, t.mu_sigma + t.sigma_sigma, 1e-9);
  EXPECT_DOUBLE_EQ(sample_path_loss(g, t, {0.0, 0.0, 1.0}), median);
}

TEST(PathLoss, MonotoneInDistanceAndOrderedByTerrain) {
  for (double d = 100.0; d < 2000.0; d += 25.0) {
    double prev = 0.0;
    for (auto c : {TerrainCategory::Terrain3, TerrainCategory::Terrain2, TerrainCategory::Terrain1}) {
      const double pl = median_path_loss({d}, TerrainParams::preset(c));
      EXPECT_GE(pl + 1e-12, prev) << d;
      prev = pl;
    }
    EXPECT_LT(median_path_loss({d}, TerrainParams::preset(TerrainCategory::Terrain1)),
              median_path_loss({d + 25.0}, TerrainParams::preset(TerrainCategory::Terrain1)));
  }
}

TEST(PathLoss, ShadowingAveragesToMedian) {
  const auto t = TerrainParams::preset(TerrainCategory::Terrain1);
  const LinkGeometry g{400.0};
  Rng rng(11);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += sample_path_loss(g, t, ShadowingDraw::sample(rng));
  // Spread of the random part is about 11 dB; allow 4 sigma of the mean.
  EXPECT_NEAR(sum / n, median_path_loss(g, t), 4.0 * 11.5 / std::sqrt(n));
}

TEST(Geometry, RejectsBadInputs) {
  EXPECT_THROW((LinkGeometry{50.0}.validate()), std::domain_error);
  EXPECT_THROW((LinkGeometry{200.0, 100.0, 0.15, 5.0}.validate()), std::domain_error);
  EXPECT_THROW((LinkGeometry{200.0, 100.0, 0.0}.validate()), std::domain_error);
  EXPECT_NO_THROW(LinkGeometry{100.0}.validate());
}

TEST(ErrorRates, ClosedForms) {
  const double g = std::pow(10.0, 0.8);  // 8 dB
  EXPECT_NEAR(bit_error_rate(8.0, Modulation::BPSK), q_by_quadrature(std::sqrt(2.0 * g)), 1e-12);
  EXPECT_NEAR(bit_error_rate(8.0, Modulation::QPSK), q_by_quadrature(std::sqrt(g)), 1e-12);
  EXPECT_NEAR(bit_error_rate(8.0, Modulation::QAM16), 0.375 * std::erfc(std::sqrt(g / 10.0)), 1e-15);
  EXPECT_LT(bit_error_rate(8.0, Modulation::BPSK), bit_error_rate(8.0, Modulation::QPSK));
  EXPECT_LT(bit_error_rate(8.0, Modulation::QPSK), bit_error_rate(8.0, Modulation::QAM16));
}

TEST(ErrorRates, PacketErrorFromBitError) {
  const double ber = bit_error_rate(6.0, Modulation::BPSK);
  EXPECT_NEAR(packet_error_prob(6.0, Modulation::BPSK, 1024), 1.0 - std::pow(1.0 - ber, 1024),
              1e-12);
  EXPECT_NEAR(packet_error_prob(6.0, Modulation::BPSK, 1), ber, 1e-15);
  double prev = 1.0;
  for (double s = -10.0; s <= 30.0; s += 0.5) {
    const double p = packet_error_prob(s, Modulation::QPSK, 512);
    EXPECT_LE(p, prev);
    EXPECT_GE(p, 0.0);
    prev = p;
  }
}

TEST(ForwardSuccess, AbstractBernoulliBand) {
  const auto mode = ChannelMode::abstract(0.2);
  Rng rng(3);
  const int n = 100000;
  int ok = 0;
  for (int i = 0; i < n; ++i) ok += forward_success(mode, rng);
  const double sd = std::sqrt(n * 0.2 * 0.8);
  EXPECT_NEAR(n - ok, 0.2 * n, 4.0 * sd);
}

TEST(ForwardSuccess, DrawContract) {
  const auto t = TerrainParams::preset(TerrainCategory::Terrain1);
  const auto phys = ChannelMode::physical(t, {400.0}, {});
  Rng a(5), b(5);
  forward_success(phys, a);
  for (int i = 0; i < 7; ++i) b();
  EXPECT_EQ(a(), b());

  Rng c(6), d(6);
  forward_success(ChannelMode::abstract(0.3), c);
  d();
  EXPECT_EQ(c(), d());
}

TEST(ForwardSuccess, LossGrowsWithDistance) {
  const auto t = TerrainParams::preset(TerrainCategory::Terrain1);
  double prev = -1.0;
  for (double d : {200.0, 300.0, 400.0, 500.0, 800.0}) {
    const auto mode = ChannelMode::physical(t, {d}, {});
    Rng rng(9);
    int lost = 0;
    for (int i = 0; i < 20000; ++i) lost += !forward_success(mode, rng);
    const double p = lost / 20000.0;
    EXPECT_GE(p, prev) << d;
    prev = p;
  }
  EXPECT_GT(prev, 0.05);
}

}  // namespace
}  // namespace ncml
