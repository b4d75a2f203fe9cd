#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace rids {

// 48-bit hardware address. Canonical text form is lowercase "aa:bb:cc:dd:ee:ff".
struct MacAddr {
  std::array<uint8_t, 6> octets{};

  static std::optional<MacAddr> parse(std::string_view text) {
    if (text.size() != 17) return std::nullopt;
    MacAddr m;
    for (int i = 0; i < 6; ++i) {
      int pos = i * 3;
      if (i > 0 && text[pos - 1] != ':') return std::nullopt;
      int hi = hex_nibble(text[pos]);
      int lo = hex_nibble(text[pos + 1]);
      if (hi < 0 || lo < 0) return std::nullopt;
      m.octets[static_cast<size_t>(i)] = static_cast<uint8_t>(hi << 4 | lo);
    }
    return m;
  }

  std::string to_string() const {
    char buf[18];
    std::snprintf(buf, sizeof buf, "%02x:%02x:%02x:%02x:%02x:%02x", octets[0],
                  octets[1], octets[2], octets[3], octets[4], octets[5]);
    return std::string(buf, 17);
  }

  static constexpr MacAddr broadcast() {
    return MacAddr{{0xff, 0xff, 0xff, 0xff, 0xff, 0xff}};
  }

  bool is_zero() const {
    for (uint8_t b : octets)
      if (b) return false;
    return true;
  }

  auto operator<=>(const MacAddr&) const = default;

 private:
  static int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  }
};

}  // namespace rids

template <>
struct std::hash<rids::MacAddr> {
  size_t operator()(const rids::MacAddr& m) const noexcept {
    uint64_t v = 0;
    for (uint8_t b : m.octets) v = v << 8 | b;
    return std::hash<uint64_t>{}(v);
  }
};
