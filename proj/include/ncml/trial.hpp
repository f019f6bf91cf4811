#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <set>
#include <utility>
#include <vector>

#include "ncml/channel.hpp"
#include "ncml/coding.hpp"
#include "ncml/feedback.hpp"
#include "ncml/learn.hpp"
#include "ncml/metrics.hpp"
#include "ncml/state_map.hpp"

namespace ncml {

struct SchemeConfig {
  Scheme scheme = Scheme::ARQ;
  std::shared_ptr<const ClassifierModel> classifier;
  int packets = 32;   // M
  int receivers = 2;  // K
  int payload_bytes = 128;
  // ML schemes trust a decoded ACK/NAK and only classify erased feedback.
  bool hybrid_ml = false;
  long transmission_cap = 10000;
  long poll_cap = 10000;

  void validate() const;
};

// One receiver's forward and feedback links. The feedback features are
// always computed from the physical description (terrain, geometry,
// feedback budget); the reverse mode decides how often feedback fails.
struct ReceiverLink {
  ChannelMode forward;
  ChannelMode reverse;
  TerrainParams terrain;
  LinkGeometry geometry;
  LinkBudget feedback_budget;
  double flip_fraction = 0.1;
  // Correlation between the forward and feedback shadowing of one slot.
  double reciprocity = 0.97;

  void validate() const;
};

struct SlotRealization {
  bool delivered = true;
  FeedbackRealization feedback;
};

// Source of channel realizations for one trial. Realizations are keyed by
// (slot, receiver), where slot is the index of the data transmission within
// the trial, so two schemes replaying one seed see the same loss trace.
class LinkLayer {
 public:
  virtual ~LinkLayer() = default;
  virtual int receivers() const = 0;
  // first_copy_of is the packet id when this slot carries the first plain
  // transmission of that packet, -1 otherwise.
  virtual SlotRealization realize(long slot, int receiver, int first_copy_of) = 0;
  // Whether a receiver's completion report survives the reverse link.
  virtual bool report_delivered(long poll, int receiver) = 0;
};

// Per slot and receiver: forward shadowing (6 uniforms), forward outcome (1),
// fresh reverse shadowing (6), feedback outcome (2). Polls draw shadowing
// (6) and one outcome uniform from a separate keyed stream.
class StochasticLinks final : public LinkLayer {
 public:
  StochasticLinks(std::vector<ReceiverLink> links, std::uint64_t trial_seed);
  int receivers() const override { return static_cast<int>(links_.size()); }
  SlotRealization realize(long slot, int receiver, int first_copy_of) override;
  bool report_delivered(long poll, int receiver) override;

 private:
  std::vector<ReceiverLink> links_;
  std::uint64_t seed_;
};

// Deterministic links for hand-traced examples: the first plain copy of
// packet m is lost at receiver r iff (m, r) is listed; everything else,
// feedback included, gets through.
class ScriptedLinks final : public LinkLayer {
 public:
  ScriptedLinks(int receivers, std::set<std::pair<int, int>> first_copy_losses)
      : receivers_(receivers), losses_(std::move(first_copy_losses)) {}
  int receivers() const override { return receivers_; }
  SlotRealization realize(long slot, int receiver, int first_copy_of) override;
  bool report_delivered(long, int) override { return true; }

 private:
  int receivers_;
  std::set<std::pair<int, int>> losses_;
};

// Simulates until every receiver holds every packet. The transmitter acts
// on its state map; once the map says everything is delivered it polls the
// receivers, and reported gaps reopen the map for another round. Aborted
// trials (cap exceeded) come back with aborted = true.
TrialRecord run_trial(const SchemeConfig& cfg, LinkLayer& links, std::uint64_t seed,
                      std::ostream* trace = nullptr);

TrialRecord run_trial(const SchemeConfig& cfg, const std::vector<ReceiverLink>& links,
                      std::uint64_t seed, std::ostream* trace = nullptr);

}  // namespace ncml
