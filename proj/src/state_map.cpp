#include "ncml/state_map.hpp"

#include <algorithm>
#include <stdexcept>

namespace ncml {

std::string_view to_string(PacketState s) {
  switch (s) {
    case PacketState::Received: return "Received";
    case PacketState::Lost: return "Lost";
    case PacketState::Unknown: return "Unknown";
  }
  return "?";
}

PacketStateMap::PacketStateMap(int receivers, int packets, PacketState initial)
    : receivers_(receivers), packets_(packets) {
  if (receivers < 1 || packets < 1) throw std::invalid_argument("state map needs K, M >= 1");
  cells_.assign(static_cast<std::size_t>(receivers) * packets, initial);
}

PacketStateMap PacketStateMap::reopened(int receivers, int packets,
                                        std::span<const std::pair<int, int>> lost) {
  PacketStateMap map(receivers, packets, PacketState::Lost);
  std::vector<bool> open(map.cells_.size(), false);
  for (const auto& [r, m] : lost) open[map.index(r, m)] = true;
  for (std::size_t i = 0; i < open.size(); ++i) {
    if (!open[i]) map.cells_[i] = PacketState::Received;
  }
  return map;
}

std::size_t PacketStateMap::index(int r, int m) const {
  if (r < 0 || r >= receivers_ || m < 0 || m >= packets_) {
    throw std::out_of_range("state map index out of range");
  }
  return static_cast<std::size_t>(r) * packets_ + m;
}

bool PacketStateMap::packet_done(int packet) const {
  for (int r = 0; r < receivers_; ++r)
    if (missing(r, packet)) return false;
  return true;
}

bool PacketStateMap::all_received() const {
  return std::all_of(cells_.begin(), cells_.end(),
                     [](PacketState s) { return s == PacketState::Received; });
}

bool PacketStateMap::update(int receiver, int packet, PacketState s) {
  auto& cell = cells_[index(receiver, packet)];
  if (cell == PacketState::Received || cell == s) return false;
  cell = s;
  return true;
}

namespace {

// Extends `chosen` greedily: repeatedly add the packet that serves the most
// new receivers without pushing any receiver to two missing constituents.
int grow(const PacketStateMap& map, std::vector<int>& chosen, std::vector<int>& missing_count) {
  const int K = map.receivers();
  const int M = map.packets();
  int served = 0;
  for (int q = 0; q < K; ++q) served += missing_count[q] == 1;
  for (;;) {
    int best = -1, best_gain = 0;
    for (int m = 0; m < M; ++m) {
      if (std::find(chosen.begin(), chosen.end(), m) != chosen.end()) continue;
      int gain = 0;
      bool ok = true;
      for (int q = 0; q < K && ok; ++q) {
        if (!map.missing(q, m)) continue;
        if (missing_count[q] > 0) ok = false;
        else ++gain;
      }
      if (ok && gain > best_gain) {
        best = m;
        best_gain = gain;
      }
    }
    if (best < 0) return served;
    chosen.push_back(best);
    for (int q = 0; q < K; ++q) missing_count[q] += map.missing(q, best);
    served += best_gain;
  }
}

}  // namespace

std::vector<int> select_combination(const PacketStateMap& map) {
  const int K = map.receivers();
  const int M = map.packets();
  std::vector<int> best;
  int best_served = 0;
  // One greedy run per possible first packet; keep the first best.
  for (int first = 0; first < M; ++first) {
    std::vector<int> missing_count(K, 0);
    int any = 0;
    for (int q = 0; q < K; ++q) {
      missing_count[q] = map.missing(q, first);
      any += missing_count[q];
    }
    if (any == 0) continue;
    std::vector<int> chosen = {first};
    const int served = grow(map, chosen, missing_count);
    if (served > best_served) {
      best_served = served;
      best = std::move(chosen);
    }
  }
  if (best.empty()) throw std::invalid_argument("select_combination: nothing is missing");
  std::sort(best.begin(), best.end());
  return best;
}

int receivers_served(const PacketStateMap& map, std::span<const int> constituents) {
  int served = 0;
  for (int r = 0; r < map.receivers(); ++r) {
    int missing = 0;
    for (int m : constituents) missing += map.missing(r, m);
    served += missing == 1;
  }
  return served;
}

}  // namespace ncml
