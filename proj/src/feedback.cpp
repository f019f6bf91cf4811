#include "ncml/feedback.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ncml {

std::string_view to_string(Label l) { return l == Label::ACK ? "ACK" : "NAK"; }

std::string_view to_string(DecodeOutcome d) {
  switch (d) {
    case DecodeOutcome::Correct: return "Correct";
    case DecodeOutcome::Flipped: return "Flipped";
    case DecodeOutcome::Erased: return "Erased";
  }
  return "?";
}

std::string_view to_string(TransmitterView v) {
  switch (v) {
    case TransmitterView::SawACK: return "SawACK";
    case TransmitterView::SawNAK: return "SawNAK";
    case TransmitterView::SawNothing: return "SawNothing";
  }
  return "?";
}

Label parse_label(std::string_view s) {
  if (s == "ACK" || s == "1") return Label::ACK;
  if (s == "NAK" || s == "0") return Label::NAK;
  throw std::invalid_argument("unknown label '" + std::string(s) + "'");
}

std::array<double, kNumFeatures> FeedbackFeatures::as_vector() const {
  return {distance_m, noise_dbm, static_cast<double>(terrain), snr_db, rx_dbm,
          static_cast<double>(modulation)};
}

FeedbackRealization realize_feedback(const ChannelMode& reverse_mode, const LinkGeometry& geom,
                                     const TerrainParams& terrain, const LinkBudget& budget,
                                     double flip_fraction, const ShadowingDraw& draw, Rng& rng) {
  const double path_loss = sample_path_loss(geom, terrain, draw);
  FeedbackRealization r;
  r.features.distance_m = geom.distance_m;
  r.features.noise_dbm = budget.noise_floor_dbm;
  r.features.terrain = terrain.category;
  r.features.rx_dbm = budget.tx_power_dbm - path_loss;
  r.features.snr_db = snr_db(budget, path_loss);
  r.features.modulation = budget.modulation;

  const double fail_u = rng.uniform();
  const double flip_u = rng.uniform();
  const double per = reverse_mode.is_abstract()
                         ? std::get<AbstractChannel>(reverse_mode.variant).error_probability
                         : packet_error_prob(r.features.snr_db, budget.modulation,
                                             budget.payload_bits);
  if (fail_u < per) {
    r.decode_outcome = flip_u < flip_fraction ? DecodeOutcome::Flipped : DecodeOutcome::Erased;
  }
  return r;
}

FeedbackObservation generate_feedback(bool data_received, const ChannelMode& reverse_mode,
                                      const LinkGeometry& geom, const TerrainParams& terrain,
                                      const LinkBudget& budget, double flip_fraction, Rng& rng) {
  const ShadowingDraw draw = ShadowingDraw::sample(rng);
  return realize_feedback(reverse_mode, geom, terrain, budget, flip_fraction, draw, rng)
      .observe(data_received ? Label::ACK : Label::NAK);
}

TransmitterView transmitter_view(const FeedbackObservation& obs) {
  switch (obs.decode_outcome) {
    case DecodeOutcome::Correct:
      return obs.true_state == Label::ACK ? TransmitterView::SawACK : TransmitterView::SawNAK;
    case DecodeOutcome::Flipped:
      return obs.true_state == Label::ACK ? TransmitterView::SawNAK : TransmitterView::SawACK;
    case DecodeOutcome::Erased:
      return TransmitterView::SawNothing;
  }
  return TransmitterView::SawNothing;
}

std::vector<LabeledExample> harvest_labels(std::span<const FeedbackObservation> stream) {
  std::vector<LabeledExample> out;
  for (const auto& obs : stream) {
    if (obs.decode_outcome == DecodeOutcome::Correct) out.push_back({obs.features, obs.true_state});
  }
  return out;
}

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw std::invalid_argument("training csv line " + std::to_string(line) + ": bad number '" +
                                s + "'");
  }
  return v;
}

}  // namespace

void write_training_csv(std::ostream& out, std::span<const LabeledExample> examples) {
  out << "distance,noise,terrain,snr,rx,mod,label\n";
  for (const auto& e : examples) {
    const auto& f = e.features;
    out << format_double(f.distance_m) << ',' << format_double(f.noise_dbm) << ','
        << static_cast<int>(f.terrain) << ',' << format_double(f.snr_db) << ','
        << format_double(f.rx_dbm) << ',' << static_cast<int>(f.modulation) << ','
        << to_string(e.label) << '\n';
  }
}

std::vector<LabeledExample> read_training_csv(std::istream& in) {
  std::vector<LabeledExample> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("distance", 0) == 0) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != kNumFeatures + 1) {
      throw std::invalid_argument("training csv line " + std::to_string(line_no) +
                                  ": expected 7 columns");
    }
    LabeledExample e;
    e.features.distance_m = parse_double(cells[0], line_no);
    e.features.noise_dbm = parse_double(cells[1], line_no);
    e.features.terrain = parse_terrain(cells[2]);
    e.features.snr_db = parse_double(cells[3], line_no);
    e.features.rx_dbm = parse_double(cells[4], line_no);
    const int mod = static_cast<int>(parse_double(cells[5], line_no));
    if (mod < 0 || mod > 2) {
      throw std::invalid_argument("training csv line " + std::to_string(line_no) +
                                  ": bad modulation");
    }
    e.features.modulation = static_cast<Modulation>(mod);
    e.label = parse_label(cells[6]);
    out.push_back(e);
  }
  return out;
}

}  // namespace ncml
