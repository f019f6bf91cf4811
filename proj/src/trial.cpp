#include "ncml/trial.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace ncml {

void SchemeConfig::validate() const {
  if (packets < 1) throw std::invalid_argument("packets (M) must be >= 1");
  if (receivers < 1) throw std::invalid_argument("receivers (K) must be >= 1");
  if (payload_bytes < 1) throw std::invalid_argument("payload_bytes must be >= 1");
  if (uses_classifier(scheme) && !classifier) {
    throw std::invalid_argument(std::string(to_string(scheme)) + " requires a classifier");
  }
}

void ReceiverLink::validate() const {
  forward.validate();
  reverse.validate();
  terrain.validate();
  geometry.validate();
  feedback_budget.validate();
  if (!(flip_fraction >= 0.0 && flip_fraction <= 1.0)) {
    throw std::invalid_argument("flip_fraction outside [0, 1]");
  }
  if (!(reciprocity >= 0.0 && reciprocity <= 1.0)) {
    throw std::invalid_argument("reciprocity outside [0, 1]");
  }
}

namespace {

constexpr std::uint64_t kSlotTag = 0x510;
constexpr std::uint64_t kPollTag = 0x9011;
constexpr std::uint64_t kPayloadTag = 0xda7a;

}  // namespace

StochasticLinks::StochasticLinks(std::vector<ReceiverLink> links, std::uint64_t trial_seed)
    : links_(std::move(links)), seed_(trial_seed) {
  for (const auto& l : links_) l.validate();
}

SlotRealization StochasticLinks::realize(long slot, int receiver, int) {
  const auto& link = links_.at(static_cast<std::size_t>(receiver));
  Rng rng(derive_seed({seed_, kSlotTag, static_cast<std::uint64_t>(slot),
                       static_cast<std::uint64_t>(receiver)}));
  const ShadowingDraw forward = ShadowingDraw::sample(rng);
  SlotRealization s;
  s.delivered = forward_success(link.forward, forward, rng);
  const ShadowingDraw fresh = ShadowingDraw::sample(rng);
  const ShadowingDraw reverse = ShadowingDraw::correlated(forward, fresh, link.reciprocity);
  s.feedback = realize_feedback(link.reverse, link.geometry, link.terrain, link.feedback_budget,
                                link.flip_fraction, reverse, rng);
  return s;
}

bool StochasticLinks::report_delivered(long poll, int receiver) {
  const auto& link = links_.at(static_cast<std::size_t>(receiver));
  Rng rng(derive_seed({seed_, kPollTag, static_cast<std::uint64_t>(poll),
                       static_cast<std::uint64_t>(receiver)}));
  const ShadowingDraw draw = ShadowingDraw::sample(rng);
  return forward_success(link.reverse, draw, rng);
}

SlotRealization ScriptedLinks::realize(long, int receiver, int first_copy_of) {
  SlotRealization s;
  s.delivered = first_copy_of < 0 || !losses_.contains({first_copy_of, receiver});
  return s;
}

namespace {

struct AbortTrial {};

class TrialEngine {
 public:
  TrialEngine(const SchemeConfig& cfg, LinkLayer& links, std::uint64_t seed, std::ostream* trace)
      : cfg_(cfg), links_(links), trace_(trace), first_sent_(cfg.packets, false) {
    Rng rng(derive_seed({seed, kPayloadTag}));
    for (int m = 0; m < cfg.packets; ++m) {
      Packet p{m, Bytes(static_cast<std::size_t>(cfg.payload_bytes))};
      for (auto& b : p.payload) b = static_cast<std::uint8_t>(rng() >> 56);
      packets_.push_back(std::move(p));
    }
    for (int r = 0; r < cfg.receivers; ++r) rx_.emplace_back(cfg.packets);
    record_.scheme = cfg.scheme;
    record_.seed = seed;
    record_.K = cfg.receivers;
    record_.M = cfg.packets;
  }

  TrialRecord run() {
    try {
      PacketStateMap map(cfg_.receivers, cfg_.packets, PacketState::Lost);
      bool first_round = true;
      for (;;) {
        if (uses_coding(cfg_.scheme)) {
          if (first_round) transmission_phase(map);
          retransmission_phase(map);
        } else {
          arq_round(map);
        }
        first_round = false;
        auto gaps = poll();
        if (gaps.empty()) break;
        map = PacketStateMap::reopened(cfg_.receivers, cfg_.packets, gaps);
      }
      verify();
    } catch (const AbortTrial&) {
      record_.aborted = true;
      if (trace_) *trace_ << "aborted after n=" << record_.n << " polls=" << record_.polls << '\n';
    }
    return record_;
  }

 private:
  // Transmitter's reading of one feedback observation.
  PacketState decide(const FeedbackObservation& obs) const {
    const TransmitterView view = transmitter_view(obs);
    const bool ml = uses_classifier(cfg_.scheme);
    if (!ml || (cfg_.hybrid_ml && view != TransmitterView::SawNothing)) {
      switch (view) {
        case TransmitterView::SawACK: return PacketState::Received;
        case TransmitterView::SawNAK: return PacketState::Lost;
        case TransmitterView::SawNothing: return PacketState::Unknown;
      }
    }
    return cfg_.classifier->predict(obs.features) == Label::ACK ? PacketState::Received
                                                                 : PacketState::Lost;
  }

  // Broadcasts one (possibly coded) packet and returns each receiver's
  // decoded-state reading as the transmitter sees it.
  std::vector<PacketState> transmit(const CodedPacket& coded) {
    if (record_.n >= cfg_.transmission_cap) throw AbortTrial{};
    const long slot = record_.n++;
    int first_copy_of = -1;
    if (coded.constituents.size() == 1 && !first_sent_[coded.constituents[0]]) {
      first_copy_of = coded.constituents[0];
      first_sent_[first_copy_of] = true;
    }
    if (trace_) {
      *trace_ << "tx " << slot << " [";
      for (std::size_t i = 0; i < coded.constituents.size(); ++i) {
        *trace_ << (i ? "^" : "") << coded.constituents[i];
      }
      *trace_ << "]";
    }
    std::vector<PacketState> seen(cfg_.receivers);
    for (int r = 0; r < cfg_.receivers; ++r) {
      const SlotRealization s = links_.realize(slot, r, first_copy_of);
      if (s.delivered) rx_[r].receive(coded);
      const bool holds_all = std::all_of(coded.constituents.begin(), coded.constituents.end(),
                                         [&](int id) { return rx_[r].has(id); });
      const FeedbackObservation obs = s.feedback.observe(holds_all ? Label::ACK : Label::NAK);
      seen[r] = decide(obs);
      if (trace_) {
        *trace_ << " | R" << r << (s.delivered ? " ok " : " lost ") << to_string(obs.true_state)
                << '/' << to_string(obs.decode_outcome) << " -> " << to_string(seen[r]);
      }
    }
    if (trace_) *trace_ << '\n';
    return seen;
  }

  CodedPacket encode(const std::vector<int>& ids) const {
    std::vector<CodedPacket> parts;
    for (int id : ids) parts.push_back(CodedPacket::plain(packets_[id]));
    return xor_combine(parts);
  }

  void arq_round(PacketStateMap& map) {
    for (int m = 0; m < cfg_.packets; ++m) {
      while (!map.packet_done(m)) {
        const auto seen = transmit(CodedPacket::plain(packets_[m]));
        for (int r = 0; r < cfg_.receivers; ++r) map.update(r, m, seen[r]);
      }
    }
  }

  void transmission_phase(PacketStateMap& map) {
    for (int m = 0; m < cfg_.packets; ++m) {
      const auto seen = transmit(CodedPacket::plain(packets_[m]));
      for (int r = 0; r < cfg_.receivers; ++r) map.update(r, m, seen[r]);
    }
  }

  void retransmission_phase(PacketStateMap& map) {
    while (!map.all_received()) {
      const auto ids = select_combination(map);
      const auto seen = transmit(encode(ids));
      for (int r = 0; r < cfg_.receivers; ++r) {
        if (seen[r] != PacketState::Received) continue;
        for (int m : ids) map.update(r, m, PacketState::Received);
      }
    }
  }

  // Asks every receiver for its missing packets, re-polling those whose
  // report is lost. Returns the reported gaps.
  std::vector<std::pair<int, int>> poll() {
    std::vector<std::pair<int, int>> gaps;
    std::vector<int> pending(cfg_.receivers);
    for (int r = 0; r < cfg_.receivers; ++r) pending[r] = r;
    while (!pending.empty()) {
      if (record_.polls >= cfg_.poll_cap) throw AbortTrial{};
      const long p = record_.polls++;
      std::vector<int> still;
      for (int r : pending) {
        if (!links_.report_delivered(p, r)) {
          still.push_back(r);
          continue;
        }
        for (int m : rx_[r].missing()) gaps.emplace_back(r, m);
      }
      pending = std::move(still);
    }
    if (trace_) *trace_ << "poll -> " << gaps.size() << " gap(s)\n";
    return gaps;
  }

  void verify() const {
    for (const auto& r : rx_) {
      for (const auto& p : packets_) {
        if (!r.has(p.id) || r.payload(p.id) != p.payload) {
          throw std::logic_error("trial finished with a receiver missing or corrupting a packet");
        }
      }
    }
  }

  const SchemeConfig& cfg_;
  LinkLayer& links_;
  std::ostream* trace_;
  std::vector<Packet> packets_;
  std::vector<ReceiverState> rx_;
  std::vector<bool> first_sent_;
  TrialRecord record_;
};

}  // namespace

TrialRecord run_trial(const SchemeConfig& cfg, LinkLayer& links, std::uint64_t seed,
                      std::ostream* trace) {
  cfg.validate();
  if (links.receivers() != cfg.receivers) {
    throw std::invalid_argument("link layer receiver count differs from K");
  }
  return TrialEngine(cfg, links, seed, trace).run();
}

TrialRecord run_trial(const SchemeConfig& cfg, const std::vector<ReceiverLink>& links,
                      std::uint64_t seed, std::ostream* trace) {
  StochasticLinks layer(links, seed);
  return run_trial(cfg, layer, seed, trace);
}

}  // namespace ncml
