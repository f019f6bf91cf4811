#pragma once

#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace ncml {

enum class PacketState { Received, Lost, Unknown };

std::string_view to_string(PacketState s);

// Transmitter belief over (receiver, packet). Received is absorbing.
class PacketStateMap {
 public:
  PacketStateMap(int receivers, int packets, PacketState initial = PacketState::Lost);

  // Everything Received except the listed (receiver, packet) entries, which
  // start Lost.
  static PacketStateMap reopened(int receivers, int packets,
                                 std::span<const std::pair<int, int>> lost);

  int receivers() const { return receivers_; }
  int packets() const { return packets_; }
  PacketState at(int receiver, int packet) const { return cells_[index(receiver, packet)]; }

  // Unknown and Lost both count as missing.
  bool missing(int receiver, int packet) const {
    return at(receiver, packet) != PacketState::Received;
  }
  bool packet_done(int packet) const;
  bool all_received() const;

  // No-op on Received entries. Returns whether the entry changed.
  bool update(int receiver, int packet, PacketState s);

 private:
  std::size_t index(int r, int m) const;

  int receivers_;
  int packets_;
  std::vector<PacketState> cells_;
};

// Greedy instantly-decodable selection. Starting from each packet some
// receiver misses, keep adding the packet that serves the most new
// receivers while no receiver misses two constituents; the best start wins,
// lowest indices on ties. Throws std::invalid_argument when nothing is
// missing.
std::vector<int> select_combination(const PacketStateMap& map);

// Receivers missing exactly one of the constituents.
int receivers_served(const PacketStateMap& map, std::span<const int> constituents);

}  // namespace ncml
