#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "rids/mac.hpp"

namespace rids {

// Integer codes are part of the on-disk formats and must not be reordered.
enum class FrameKind : uint8_t {
  Beacon = 0,
  ProbeResponse = 1,
  Authentication = 2,
  Deauthentication = 3,
  AssociationRequest = 4,
  AssociationResponse = 5,
  Disassociation = 6,
  SaeCommit = 7,
  SaeConfirm = 8,
  Eapol = 9,
};
inline constexpr int kFrameKindCount = 10;

enum class SecuritySuite : uint8_t {
  Open = 0,
  Wpa2Psk = 1,
  Wpa3Sae = 2,
};
inline constexpr int kSecuritySuiteCount = 3;

enum class AttackLabel : uint8_t {
  Normal = 0,
  Deauth = 1,
  RogueAp = 2,
  EvilTwin = 3,
  Krack = 4,
  BeaconFlood = 5,
};
inline constexpr int kAttackLabelCount = 6;

inline constexpr const char* kFrameKindNames[kFrameKindCount] = {
    "Beacon",         "ProbeResponse",      "Authentication",
    "Deauthentication", "AssociationRequest", "AssociationResponse",
    "Disassociation", "SaeCommit",          "SaeConfirm",
    "Eapol",
};

inline constexpr const char* kSecuritySuiteNames[kSecuritySuiteCount] = {
    "Open",
    "Wpa2Psk",
    "Wpa3Sae",
};

inline constexpr const char* kAttackLabelNames[kAttackLabelCount] = {
    "Normal", "Deauth", "RogueAp", "EvilTwin", "Krack", "BeaconFlood",
};

inline const char* to_string(FrameKind k) {
  return kFrameKindNames[static_cast<uint8_t>(k)];
}
inline const char* to_string(SecuritySuite s) {
  return kSecuritySuiteNames[static_cast<uint8_t>(s)];
}
inline const char* to_string(AttackLabel l) {
  return kAttackLabelNames[static_cast<uint8_t>(l)];
}

inline std::optional<FrameKind> frame_kind_from(std::string_view name) {
  for (int i = 0; i < kFrameKindCount; ++i)
    if (name == kFrameKindNames[i]) return static_cast<FrameKind>(i);
  return std::nullopt;
}
inline std::optional<SecuritySuite> suite_from(std::string_view name) {
  for (int i = 0; i < kSecuritySuiteCount; ++i)
    if (name == kSecuritySuiteNames[i]) return static_cast<SecuritySuite>(i);
  return std::nullopt;
}
inline std::optional<AttackLabel> label_from(std::string_view name) {
  for (int i = 0; i < kAttackLabelCount; ++i)
    if (name == kAttackLabelNames[i]) return static_cast<AttackLabel>(i);
  return std::nullopt;
}

inline constexpr size_t kMaxSsidBytes = 32;

// One management/EAPOL frame record. Value type, shared freely across threads.
struct Frame {
  uint64_t frame_number = 0;
  uint64_t timestamp_us = 0;
  FrameKind kind = FrameKind::Beacon;
  MacAddr src;
  MacAddr dst;
  MacAddr bssid;
  std::string ssid;
  SecuritySuite suite = SecuritySuite::Open;
  uint16_t beacon_interval_tu = 0;  // > 0 iff kind is Beacon/ProbeResponse
  uint8_t eapol_msg = 0;            // 1..4 iff kind is Eapol, else 0
  bool retry = false;
  uint16_t reason_code = 0;  // deauth/disassoc only, else 0
  AttackLabel label = AttackLabel::Normal;

  bool operator==(const Frame&) const = default;
};

inline bool is_beaconish(FrameKind k) {
  return k == FrameKind::Beacon || k == FrameKind::ProbeResponse;
}

// Field consistency check used by generators and tests. Returns a reason on
// failure, nullopt when the frame is well formed.
inline std::optional<std::string> frame_violation(const Frame& f) {
  if (f.ssid.size() > kMaxSsidBytes) return "ssid longer than 32 bytes";
  if ((f.eapol_msg > 0) != (f.kind == FrameKind::Eapol))
    return "eapol_msg must be 1..4 exactly for Eapol frames";
  if (f.kind == FrameKind::Eapol && (f.eapol_msg < 1 || f.eapol_msg > 4))
    return "eapol_msg out of range";
  if ((f.beacon_interval_tu > 0) != is_beaconish(f.kind))
    return "beacon_interval_tu must be positive exactly for Beacon/ProbeResponse";
  if (f.reason_code != 0 && f.kind != FrameKind::Deauthentication &&
      f.kind != FrameKind::Disassociation)
    return "reason_code only valid for Deauthentication/Disassociation";
  return std::nullopt;
}

}  // namespace rids
