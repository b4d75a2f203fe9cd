#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rids/frame.hpp"

namespace rids {

// Fixed little-endian record layout, in field order:
//   u64 frame_number, u64 timestamp_us, u8 kind, src/dst/bssid (6 octets each),
//   u16 ssid length, ssid bytes, u8 suite, u16 beacon_interval_tu,
//   u8 eapol_msg, u8 retry, u16 reason_code, u8 label
// 45 bytes plus the ssid payload.
inline constexpr size_t kFrameRecordBaseSize = 45;

struct EncodeError : std::runtime_error {
  explicit EncodeError(const std::string& what) : std::runtime_error(what) {}
};

struct DecodeError : std::runtime_error {
  size_t offset;
  std::string field;
  DecodeError(size_t off, std::string fld, const std::string& what)
      : std::runtime_error(what), offset(off), field(std::move(fld)) {}
};

namespace detail {

inline void put_u16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v));
  out.push_back(static_cast<uint8_t>(v >> 8));
}

inline void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

inline void put_u64(std::vector<uint8_t>& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

inline uint16_t get_u16(std::span<const uint8_t> b, size_t pos) {
  return static_cast<uint16_t>(b[pos] | b[pos + 1] << 8);
}

inline uint32_t get_u32(std::span<const uint8_t> b, size_t pos) {
  uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = v << 8 | b[pos + static_cast<size_t>(i)];
  return v;
}

inline uint64_t get_u64(std::span<const uint8_t> b, size_t pos) {
  uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = v << 8 | b[pos + static_cast<size_t>(i)];
  return v;
}

}  // namespace detail

inline void append_frame(std::vector<uint8_t>& out, const Frame& f) {
  if (f.ssid.size() > kMaxSsidBytes)
    throw EncodeError("ssid longer than " + std::to_string(kMaxSsidBytes) +
                      " bytes");
  detail::put_u64(out, f.frame_number);
  detail::put_u64(out, f.timestamp_us);
  out.push_back(static_cast<uint8_t>(f.kind));
  for (const MacAddr* m : {&f.src, &f.dst, &f.bssid})
    out.insert(out.end(), m->octets.begin(), m->octets.end());
  detail::put_u16(out, static_cast<uint16_t>(f.ssid.size()));
  out.insert(out.end(), f.ssid.begin(), f.ssid.end());
  out.push_back(static_cast<uint8_t>(f.suite));
  detail::put_u16(out, f.beacon_interval_tu);
  out.push_back(f.eapol_msg);
  out.push_back(f.retry ? 1 : 0);
  detail::put_u16(out, f.reason_code);
  out.push_back(static_cast<uint8_t>(f.label));
}

inline std::vector<uint8_t> encode_frame(const Frame& f) {
  std::vector<uint8_t> out;
  out.reserve(kFrameRecordBaseSize + f.ssid.size());
  append_frame(out, f);
  return out;
}

// Decodes one record starting at pos, advancing pos past it.
inline Frame decode_frame_at(std::span<const uint8_t> b, size_t& pos) {
  auto need = [&](size_t n, const char* field) {
    if (b.size() - pos < n)
      throw DecodeError(pos, field, "truncated record while reading " +
                                        std::string(field));
  };
  Frame f;
  need(8, "frame_number");
  f.frame_number = detail::get_u64(b, pos);
  pos += 8;
  need(8, "timestamp_us");
  f.timestamp_us = detail::get_u64(b, pos);
  pos += 8;
  need(1, "kind");
  if (b[pos] >= kFrameKindCount)
    throw DecodeError(pos, "kind", "unknown kind code " + std::to_string(b[pos]));
  f.kind = static_cast<FrameKind>(b[pos]);
  pos += 1;
  for (MacAddr* m : {&f.src, &f.dst, &f.bssid}) {
    need(6, "address");
    std::memcpy(m->octets.data(), b.data() + pos, 6);
    pos += 6;
  }
  need(2, "ssid_len");
  uint16_t ssid_len = detail::get_u16(b, pos);
  pos += 2;
  if (ssid_len > kMaxSsidBytes)
    throw DecodeError(pos, "ssid_len", "ssid length " + std::to_string(ssid_len) +
                                           " exceeds cap");
  need(ssid_len, "ssid");
  f.ssid.assign(reinterpret_cast<const char*>(b.data() + pos), ssid_len);
  pos += ssid_len;
  need(1, "suite");
  if (b[pos] >= kSecuritySuiteCount)
    throw DecodeError(pos, "suite", "unknown suite code " + std::to_string(b[pos]));
  f.suite = static_cast<SecuritySuite>(b[pos]);
  pos += 1;
  need(2, "beacon_interval_tu");
  f.beacon_interval_tu = detail::get_u16(b, pos);
  pos += 2;
  need(1, "eapol_msg");
  f.eapol_msg = b[pos];
  pos += 1;
  need(1, "retry");
  f.retry = b[pos] != 0;
  pos += 1;
  need(2, "reason_code");
  f.reason_code = detail::get_u16(b, pos);
  pos += 2;
  need(1, "label");
  if (b[pos] >= kAttackLabelCount)
    throw DecodeError(pos, "label", "unknown label code " + std::to_string(b[pos]));
  f.label = static_cast<AttackLabel>(b[pos]);
  pos += 1;
  return f;
}

// Decodes exactly one record; trailing bytes are an error.
inline Frame decode_frame(std::span<const uint8_t> b) {
  size_t pos = 0;
  Frame f = decode_frame_at(b, pos);
  if (pos != b.size())
    throw DecodeError(pos, "record", "trailing bytes after record");
  return f;
}

inline std::vector<uint8_t> encode_stream(std::span<const Frame> frames) {
  std::vector<uint8_t> out;
  out.reserve(frames.size() * (kFrameRecordBaseSize + 8));
  for (const Frame& f : frames) append_frame(out, f);
  return out;
}

inline std::vector<Frame> decode_stream(std::span<const uint8_t> b) {
  std::vector<Frame> frames;
  size_t pos = 0;
  while (pos < b.size()) frames.push_back(decode_frame_at(b, pos));
  return frames;
}

}  // namespace rids
