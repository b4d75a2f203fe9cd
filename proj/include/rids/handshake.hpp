#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rids/frame.hpp"
#include "rids/mac.hpp"

namespace rids {

struct ApProfile {
  MacAddr bssid;
  std::string ssid;
  SecuritySuite suite = SecuritySuite::Wpa3Sae;
  uint16_t beacon_interval_tu = 100;
  // Testbeds commonly leave management frame protection off even on WPA3
  // capable gear, so the model defaults to off as well.
  bool mfp_enabled = false;
};

enum class ConnectPhase : uint8_t {
  Idle,
  Authenticating,
  Associated,
  HandshakeInProgress,
  Connected,
};

struct HandshakeOrderError : std::runtime_error {
  explicit HandshakeOrderError(const std::string& what)
      : std::runtime_error(what) {}
};

// Tracks one station walking the connection exchange. advance() rejects any
// frame that arrives out of order.
struct StationState {
  MacAddr mac;
  ConnectPhase phase = ConnectPhase::Idle;
  int handshake_step = 0;  // last EAPOL message seen, 0..4
  int sae_commits = 0;
  int sae_confirms = 0;
  std::optional<SecuritySuite> negotiated;

  void advance(const Frame& f) {
    switch (f.kind) {
      case FrameKind::Authentication:
        require(phase == ConnectPhase::Idle, "Authentication outside Idle");
        phase = ConnectPhase::Authenticating;
        return;
      case FrameKind::SaeCommit:
        require(phase == ConnectPhase::Idle ||
                    (phase == ConnectPhase::Authenticating && sae_commits == 1),
                "SaeCommit out of order");
        phase = ConnectPhase::Authenticating;
        ++sae_commits;
        return;
      case FrameKind::SaeConfirm:
        require(phase == ConnectPhase::Authenticating && sae_commits >= 1 &&
                    sae_confirms < 2,
                "SaeConfirm before SaeCommit");
        ++sae_confirms;
        return;
      case FrameKind::AssociationRequest:
        require(phase == ConnectPhase::Authenticating,
                "AssociationRequest before authentication");
        return;
      case FrameKind::AssociationResponse:
        require(phase == ConnectPhase::Authenticating,
                "AssociationResponse before AssociationRequest");
        if (f.suite == SecuritySuite::Open) {
          phase = ConnectPhase::Connected;
          negotiated = f.suite;
        } else {
          phase = ConnectPhase::Associated;
        }
        return;
      case FrameKind::Eapol: {
        bool fresh = phase == ConnectPhase::Associated && f.eapol_msg == 1;
        bool next = phase == ConnectPhase::HandshakeInProgress &&
                    f.eapol_msg == handshake_step + 1;
        require(fresh || next, "Eapol message " + std::to_string(f.eapol_msg) +
                                   " out of order");
        handshake_step = f.eapol_msg;
        if (handshake_step == 4) {
          phase = ConnectPhase::Connected;
          negotiated = f.suite;
        } else {
          phase = ConnectPhase::HandshakeInProgress;
        }
        return;
      }
      default:
        return;  // beacons, deauth, disassoc do not advance the exchange
    }
  }

 private:
  static void require(bool ok, const std::string& what) {
    if (!ok) throw HandshakeOrderError(what);
  }
};

inline constexpr uint64_t kDefaultHandshakeGapUs = 2000;

// Exact connection exchange lengths per suite: Open 3, WPA2 7, WPA3 10.
inline size_t connect_sequence_length(SecuritySuite suite) {
  switch (suite) {
    case SecuritySuite::Open:
      return 3;
    case SecuritySuite::Wpa2Psk:
      return 7;
    case SecuritySuite::Wpa3Sae:
      return 10;
  }
  return 0;
}

// Legitimate connection exchange between sta and ap starting at t0.
// WPA2:  Authentication, AssociationRequest/Response, EAPOL 1-4.
// WPA3:  SAE commit and confirm in both directions replace Authentication,
//        then association and EAPOL as above.
// Open:  authentication and association only.
inline std::vector<Frame> connect_sequence(MacAddr sta, const ApProfile& ap,
                                           uint64_t t0_us,
                                           uint64_t gap_us = kDefaultHandshakeGapUs) {
  std::vector<Frame> frames;
  frames.reserve(connect_sequence_length(ap.suite));
  uint64_t t = t0_us;
  auto emit = [&](FrameKind kind, bool from_sta, uint8_t eapol = 0,
                  const std::string& ssid = "") {
    Frame f;
    f.frame_number = frames.size();
    f.timestamp_us = t;
    f.kind = kind;
    f.src = from_sta ? sta : ap.bssid;
    f.dst = from_sta ? ap.bssid : sta;
    f.bssid = ap.bssid;
    f.ssid = ssid;
    f.suite = ap.suite;
    f.eapol_msg = eapol;
    f.label = AttackLabel::Normal;
    frames.push_back(std::move(f));
    t += gap_us;
  };

  if (ap.suite == SecuritySuite::Wpa3Sae) {
    emit(FrameKind::SaeCommit, true);
    emit(FrameKind::SaeCommit, false);
    emit(FrameKind::SaeConfirm, true);
    emit(FrameKind::SaeConfirm, false);
  } else {
    emit(FrameKind::Authentication, true);
  }
  emit(FrameKind::AssociationRequest, true, 0, ap.ssid);
  emit(FrameKind::AssociationResponse, false);
  if (ap.suite != SecuritySuite::Open) {
    emit(FrameKind::Eapol, false, 1);
    emit(FrameKind::Eapol, true, 2);
    emit(FrameKind::Eapol, false, 3);
    emit(FrameKind::Eapol, true, 4);
  }
  return frames;
}

enum class ValidationResult : uint8_t { Consistent, Mismatch };

// RSNE consistency between the advertised beacon suite and the suite the
// station acknowledges in message 3. A mismatch is the downgrade signal.
inline ValidationResult validate_rsne(SecuritySuite beacon_suite,
                                      SecuritySuite msg3_suite) {
  return beacon_suite == msg3_suite ? ValidationResult::Consistent
                                    : ValidationResult::Mismatch;
}

}  // namespace rids
