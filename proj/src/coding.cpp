#include "ncml/coding.hpp"

#include <algorithm>
#include <iterator>
#include <stdexcept>

namespace ncml {

CodedPacket xor_combine(std::span<const CodedPacket> parts) {
  if (parts.empty()) throw std::invalid_argument("xor_combine of nothing");
  CodedPacket out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto& p = parts[i];
    if (p.payload.size() != out.payload.size()) {
      throw std::invalid_argument("xor_combine payload length mismatch");
    }
    std::vector<int> merged;
    std::set_symmetric_difference(out.constituents.begin(), out.constituents.end(),
                                  p.constituents.begin(), p.constituents.end(),
                                  std::back_inserter(merged));
    out.constituents = std::move(merged);
    for (std::size_t k = 0; k < out.payload.size(); ++k) out.payload[k] ^= p.payload[k];
  }
  if (out.constituents.empty()) {
    throw std::invalid_argument("xor_combine cancels to an empty combination");
  }
  return out;
}

std::vector<int> ReceiverState::have() const {
  std::vector<int> out;
  for (int i = 0; i < packet_count(); ++i)
    if (has(i)) out.push_back(i);
  return out;
}

std::vector<int> ReceiverState::missing() const {
  std::vector<int> out;
  for (int i = 0; i < packet_count(); ++i)
    if (!has(i)) out.push_back(i);
  return out;
}

bool ReceiverState::complete() const {
  return std::all_of(packets_.begin(), packets_.end(), [](const auto& p) { return p.has_value(); });
}

int ReceiverState::count_missing(const CodedPacket& c, int* first_missing) const {
  int n = 0;
  for (int id : c.constituents) {
    if (!has(id)) {
      if (n == 0) *first_missing = id;
      if (++n == 2) break;
    }
  }
  return n;
}

void ReceiverState::recover(const CodedPacket& c, int id) {
  Bytes data = c.payload;
  for (int other : c.constituents) {
    if (other == id) continue;
    const Bytes& known = payload(other);
    for (std::size_t k = 0; k < data.size(); ++k) data[k] ^= known[k];
  }
  packets_[static_cast<std::size_t>(id)] = std::move(data);
}

std::vector<int> ReceiverState::receive(const CodedPacket& coded) {
  std::vector<int> recovered;
  int id = -1;
  const int missing = count_missing(coded, &id);
  if (missing == 0) return recovered;
  if (missing >= 2) {
    buffer_.push_back(coded);
    return recovered;
  }
  recover(coded, id);
  recovered.push_back(id);

  bool progress = true;
  while (progress) {
    progress = false;
    for (auto it = buffer_.begin(); it != buffer_.end();) {
      int next = -1;
      const int m = count_missing(*it, &next);
      if (m >= 2) {
        ++it;
        continue;
      }
      if (m == 1) {
        recover(*it, next);
        recovered.push_back(next);
        progress = true;
      }
      it = buffer_.erase(it);
    }
  }
  return recovered;
}

ReceiverState try_decode(ReceiverState rx, const CodedPacket& coded) {
  rx.receive(coded);
  return rx;
}

}  // namespace ncml
