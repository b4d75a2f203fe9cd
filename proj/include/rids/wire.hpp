#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "rids/codec.hpp"
#include "rids/fds.hpp"
#include "rids/mac.hpp"

namespace rids {

// AP to controller transport framing:
//   [magic "RWIR"][kind u8][length u32 LE][payload][crc32 u32 LE]
// The CRC covers the payload only. An empty-payload message is 13 bytes.
inline constexpr std::array<uint8_t, 4> kWireMagic = {'R', 'W', 'I', 'R'};
inline constexpr size_t kWireOverhead = 13;
inline constexpr uint32_t kWireMaxPayload = 16u << 20;

enum class WireKind : uint8_t {
  CaptureBatchMsg = 0,
  BlockNotify = 1,
  Ack = 2,
};

struct WireMessage {
  WireKind kind = WireKind::Ack;
  std::vector<uint8_t> payload;

  bool operator==(const WireMessage&) const = default;
};

// CRC32, IEEE 802.3 polynomial (reflected 0xEDB88320). Check value:
// crc32("123456789") == 0xCBF43926.
inline uint32_t crc32(std::span<const uint8_t> data) {
  static const auto table = [] {
    std::array<uint32_t, 256> t{};
    for (uint32_t i = 0; i < 256; ++i) {
      uint32_t c = i;
      for (int k = 0; k < 8; ++k) c = c & 1 ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      t[i] = c;
    }
    return t;
  }();
  uint32_t crc = 0xFFFFFFFFu;
  for (uint8_t b : data) crc = table[(crc ^ b) & 0xFF] ^ (crc >> 8);
  return crc ^ 0xFFFFFFFFu;
}

enum class ParseStatus : uint8_t {
  Ok,
  NeedMoreData,   // not an error, feed more bytes
  BadMagic,       // stream is not speaking this protocol
  BadChecksum,    // payload corrupted in transit
  Oversize,       // declared length exceeds the payload cap
  BadKind,
};

struct ParseResult {
  ParseStatus status = ParseStatus::NeedMoreData;
  WireMessage message;
  size_t consumed = 0;  // bytes to drop from the stream on Ok
};

inline std::vector<uint8_t> frame_message(const WireMessage& m) {
  std::vector<uint8_t> out;
  out.reserve(kWireOverhead + m.payload.size());
  out.insert(out.end(), kWireMagic.begin(), kWireMagic.end());
  out.push_back(static_cast<uint8_t>(m.kind));
  detail::put_u32(out, static_cast<uint32_t>(m.payload.size()));
  out.insert(out.end(), m.payload.begin(), m.payload.end());
  detail::put_u32(out, crc32(m.payload));
  return out;
}

// Consumes exactly one message from the head of the stream and never reads
// past its end.
inline ParseResult parse_message(std::span<const uint8_t> stream) {
  ParseResult r;
  if (stream.empty()) return r;
  if (stream.size() < 4) {
    if (std::memcmp(stream.data(), kWireMagic.data(), stream.size()) != 0)
      r.status = ParseStatus::BadMagic;
    return r;
  }
  if (std::memcmp(stream.data(), kWireMagic.data(), 4) != 0) {
    r.status = ParseStatus::BadMagic;
    return r;
  }
  if (stream.size() < 9) return r;  // kind + length still missing
  const uint8_t kind = stream[4];
  if (kind > static_cast<uint8_t>(WireKind::Ack)) {
    r.status = ParseStatus::BadKind;
    return r;
  }
  const uint32_t length = detail::get_u32(stream, 5);
  if (length > kWireMaxPayload) {
    r.status = ParseStatus::Oversize;
    return r;
  }
  const size_t total = kWireOverhead + length;
  if (stream.size() < total) return r;
  const auto payload = stream.subspan(9, length);
  const uint32_t expect = detail::get_u32(stream, 9 + length);
  if (crc32(payload) != expect) {
    r.status = ParseStatus::BadChecksum;
    return r;
  }
  r.status = ParseStatus::Ok;
  r.message.kind = static_cast<WireKind>(kind);
  r.message.payload.assign(payload.begin(), payload.end());
  r.consumed = total;
  return r;
}

// CaptureBatch payload: ap mac, u64 trigger_quantum, u32 frame count, frames.
inline std::vector<uint8_t> encode_batch(const CaptureBatch& b) {
  std::vector<uint8_t> out;
  out.insert(out.end(), b.ap_id.octets.begin(), b.ap_id.octets.end());
  detail::put_u64(out, b.trigger_quantum);
  detail::put_u32(out, static_cast<uint32_t>(b.frames.size()));
  for (const Frame& f : b.frames) append_frame(out, f);
  return out;
}

inline CaptureBatch decode_batch(std::span<const uint8_t> payload) {
  if (payload.size() < 18)
    throw DecodeError(payload.size(), "batch", "batch payload too short");
  CaptureBatch b;
  std::memcpy(b.ap_id.octets.data(), payload.data(), 6);
  b.trigger_quantum = detail::get_u64(payload, 6);
  const uint32_t count = detail::get_u32(payload, 14);
  size_t pos = 18;
  b.frames.reserve(count);
  for (uint32_t i = 0; i < count; ++i)
    b.frames.push_back(decode_frame_at(payload, pos));
  if (pos != payload.size())
    throw DecodeError(pos, "batch", "trailing bytes after batch frames");
  return b;
}

struct BlockNotify {
  MacAddr mac;
  uint64_t blocked_at_us = 0;

  bool operator==(const BlockNotify&) const = default;
};

inline std::vector<uint8_t> encode_block_notify(const BlockNotify& n) {
  std::vector<uint8_t> out;
  out.insert(out.end(), n.mac.octets.begin(), n.mac.octets.end());
  detail::put_u64(out, n.blocked_at_us);
  return out;
}

inline BlockNotify decode_block_notify(std::span<const uint8_t> payload) {
  if (payload.size() != 14)
    throw DecodeError(payload.size(), "block_notify", "bad payload size");
  BlockNotify n;
  std::memcpy(n.mac.octets.data(), payload.data(), 6);
  n.blocked_at_us = detail::get_u64(payload, 6);
  return n;
}

}  // namespace rids
