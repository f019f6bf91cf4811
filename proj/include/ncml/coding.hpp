#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ncml {

using Bytes = std::vector<std::uint8_t>;

struct Packet {
  int id = 0;
  Bytes payload;
};

// XOR of the payloads of its constituents. A singleton is a plain packet.
struct CodedPacket {
  std::vector<int> constituents;  // sorted, unique, non-empty
  Bytes payload;

  static CodedPacket plain(const Packet& p) { return {{p.id}, p.payload}; }
  bool operator==(const CodedPacket&) const = default;
};

// Constituents become the symmetric difference of the inputs; payloads are
// XORed. Throws std::invalid_argument on empty input, mismatched lengths, or
// a combination that cancels to nothing.
CodedPacket xor_combine(std::span<const CodedPacket> parts);

class ReceiverState {
 public:
  explicit ReceiverState(int packets) : packets_(static_cast<std::size_t>(packets)) {}

  bool has(int id) const { return packets_.at(static_cast<std::size_t>(id)).has_value(); }
  const Bytes& payload(int id) const { return *packets_.at(static_cast<std::size_t>(id)); }
  int packet_count() const { return static_cast<int>(packets_.size()); }
  std::vector<int> have() const;
  std::vector<int> missing() const;
  bool complete() const;
  const std::vector<CodedPacket>& buffer() const { return buffer_; }

  // Absorbs a received coded packet: decode it if exactly one constituent is
  // missing (then drain the buffer to a fixpoint), drop it if none is, buffer
  // it otherwise. Returns the newly recovered ids in recovery order.
  std::vector<int> receive(const CodedPacket& coded);

 private:
  // Missing constituents of c, up to two.
  int count_missing(const CodedPacket& c, int* first_missing) const;
  void recover(const CodedPacket& c, int id);

  std::vector<std::optional<Bytes>> packets_;
  std::vector<CodedPacket> buffer_;
};

ReceiverState try_decode(ReceiverState rx, const CodedPacket& coded);

}  // namespace ncml
