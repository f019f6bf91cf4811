#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "ncml/channel.hpp"
#include "ncml/rng.hpp"

namespace ncml {

enum class Label { NAK = 0, ACK = 1 };
enum class DecodeOutcome { Correct, Flipped, Erased };
enum class TransmitterView { SawACK, SawNAK, SawNothing };

std::string_view to_string(Label l);
std::string_view to_string(DecodeOutcome d);
std::string_view to_string(TransmitterView v);
Label parse_label(std::string_view s);

inline Label opposite(Label l) { return l == Label::ACK ? Label::NAK : Label::ACK; }

inline constexpr std::size_t kNumFeatures = 6;
inline constexpr std::array<std::string_view, kNumFeatures> kFeatureNames = {
    "distance", "noise", "terrain", "snr", "rx", "mod"};

enum FeatureIndex : int {
  kDistance = 0,
  kNoise = 1,
  kTerrain = 2,
  kSnr = 3,
  kRx = 4,
  kMod = 5,
};

// Physical-layer measurements the transmitter takes from one feedback signal
// plus its own configuration. Independent of whether the payload decodes.
struct FeedbackFeatures {
  double distance_m = 0.0;
  double noise_dbm = 0.0;
  TerrainCategory terrain = TerrainCategory::Terrain1;
  double snr_db = 0.0;
  double rx_dbm = 0.0;
  Modulation modulation = Modulation::BPSK;

  // Canonical vector; categorical fields become small integers.
  std::array<double, kNumFeatures> as_vector() const;
  bool operator==(const FeedbackFeatures&) const = default;
};

struct FeedbackObservation {
  FeedbackFeatures features;
  Label true_state = Label::ACK;
  DecodeOutcome decode_outcome = DecodeOutcome::Correct;
};

struct LabeledExample {
  FeedbackFeatures features;
  Label label = Label::ACK;
  bool operator==(const LabeledExample&) const = default;
};

// Everything about one feedback signal that does not depend on the
// receiver's actual ACK/NAK state.
struct FeedbackRealization {
  FeedbackFeatures features;
  DecodeOutcome decode_outcome = DecodeOutcome::Correct;

  FeedbackObservation observe(Label true_state) const {
    return {features, true_state, decode_outcome};
  }
};

// Draws the decode outcome for a feedback signal under a known shadowing
// draw: the signal fails with the reverse packet error probability, and a
// failure is Flipped with probability flip_fraction, Erased otherwise.
// Always consumes two uniforms.
FeedbackRealization realize_feedback(const ChannelMode& reverse_mode, const LinkGeometry& geom,
                                     const TerrainParams& terrain, const LinkBudget& budget,
                                     double flip_fraction, const ShadowingDraw& draw, Rng& rng);

// Independent shadowing draw (six uniforms) followed by realize_feedback.
FeedbackObservation generate_feedback(bool data_received, const ChannelMode& reverse_mode,
                                      const LinkGeometry& geom, const TerrainParams& terrain,
                                      const LinkBudget& budget, double flip_fraction, Rng& rng);

TransmitterView transmitter_view(const FeedbackObservation& obs);

std::vector<LabeledExample> harvest_labels(std::span<const FeedbackObservation> stream);

// Training-set CSV: distance,noise,terrain,snr,rx,mod,label
void write_training_csv(std::ostream& out, std::span<const LabeledExample> examples);
std::vector<LabeledExample> read_training_csv(std::istream& in);

}  // namespace ncml
