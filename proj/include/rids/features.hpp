#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rids/frame.hpp"
#include "rids/handshake.hpp"

namespace rids {

// Fixed 16-slot feature vector. Slots 0-6 describe the frame itself, slots
// 7-15 describe the window it arrived in. The order is part of the trained
// model contract and of the feature CSV export; do not reorder.
enum Feature : size_t {
  kKindCode = 0,
  kEapolMsg = 1,
  kRetry = 2,
  kReasonCode = 3,
  kSuiteCode = 4,
  kBeaconIntervalTu = 5,
  kInterArrivalUs = 6,
  kWindowDeauthCount = 7,
  kWindowBeaconCount = 8,
  kWindowEapol3DupCount = 9,
  kWindowDistinctSrcCount = 10,
  kWindowFrameRateFps = 11,
  kWindowMeanInterArrivalUs = 12,
  kSuiteMismatchFlag = 13,
  kBssidCloneFlag = 14,
  kBeaconIntervalDeviation = 15,
};

inline constexpr size_t kFeatureCount = 16;

inline constexpr const char* kFeatureNames[kFeatureCount] = {
    "kind_code",
    "eapol_msg",
    "retry",
    "reason_code",
    "suite_code",
    "beacon_interval_tu",
    "inter_arrival_us",
    "window_deauth_count",
    "window_beacon_count",
    "window_eapol3_dup_count",
    "window_distinct_src_count",
    "window_frame_rate_fps",
    "window_mean_inter_arrival_us",
    "suite_mismatch_flag",
    "bssid_clone_flag",
    "beacon_interval_deviation",
};

using FeatureVector = std::array<double, kFeatureCount>;

struct LabeledVector {
  FeatureVector features{};
  AttackLabel label = AttackLabel::Normal;
};

// One vector per frame, with aggregates computed over the whole input list
// (the 500ms capture window in live operation). Frames must be time ordered
// and belong to the given AP's context.
//
// beacon_interval_deviation compares how often beacons from the frame's bssid
// actually arrived in the window against the AP profile's advertised cadence;
// with fewer than two beacons from that bssid it falls back to the advertised
// field. That exposes clones that transmit beacons far faster than the
// profile, which is exactly the lure both rogue and flooding tools rely on.
inline std::vector<LabeledVector> extract_window(std::span<const Frame> frames,
                                                 const ApProfile& ap) {
  std::vector<LabeledVector> out;
  if (frames.empty()) return out;
  out.reserve(frames.size());

  uint64_t deauth_count = 0;
  uint64_t beacon_count = 0;
  std::set<MacAddr> srcs;
  std::map<std::pair<MacAddr, MacAddr>, uint64_t> eapol3;  // (src,dst) -> count
  std::map<std::string, std::set<MacAddr>> ssid_bssids;
  std::map<MacAddr, std::string> bssid_ssid;
  struct BeaconTrack {
    uint64_t count = 0;
    uint64_t first_ts = 0;
    uint64_t last_ts = 0;
  };
  std::map<MacAddr, BeaconTrack> beacons_by_bssid;

  for (const Frame& f : frames) {
    srcs.insert(f.src);
    if (f.kind == FrameKind::Deauthentication) ++deauth_count;
    if (f.kind == FrameKind::Beacon) ++beacon_count;
    if (f.kind == FrameKind::Eapol && f.eapol_msg == 3) ++eapol3[{f.src, f.dst}];
    if (!f.ssid.empty()) {
      ssid_bssids[f.ssid].insert(f.bssid);
      bssid_ssid.emplace(f.bssid, f.ssid);
    }
    if (is_beaconish(f.kind)) {
      auto& track = beacons_by_bssid[f.bssid];
      if (track.count == 0) track.first_ts = f.timestamp_us;
      track.last_ts = f.timestamp_us;
      ++track.count;
    }
  }

  uint64_t dup_count = 0;
  for (const auto& [key, n] : eapol3)
    if (n > 1) dup_count += n - 1;

  const size_t n = frames.size();
  const uint64_t span_us = frames.back().timestamp_us - frames.front().timestamp_us;
  const double rate_fps =
      n >= 2 && span_us > 0
          ? static_cast<double>(n - 1) * 1e6 / static_cast<double>(span_us)
          : 0.0;
  const double mean_gap_us =
      n >= 2 ? static_cast<double>(span_us) / static_cast<double>(n - 1) : 0.0;

  const double profile_tu = static_cast<double>(ap.beacon_interval_tu);

  uint64_t prev_ts = frames.front().timestamp_us;
  for (size_t i = 0; i < n; ++i) {
    const Frame& f = frames[i];
    FeatureVector v{};
    v[kKindCode] = static_cast<double>(f.kind);
    v[kEapolMsg] = f.eapol_msg;
    v[kRetry] = f.retry ? 1.0 : 0.0;
    v[kReasonCode] = f.reason_code;
    v[kSuiteCode] = static_cast<double>(f.suite);
    v[kBeaconIntervalTu] = f.beacon_interval_tu;
    v[kInterArrivalUs] =
        i == 0 ? 0.0 : static_cast<double>(f.timestamp_us - prev_ts);
    prev_ts = f.timestamp_us;
    v[kWindowDeauthCount] = static_cast<double>(deauth_count);
    v[kWindowBeaconCount] = static_cast<double>(beacon_count);
    v[kWindowEapol3DupCount] = static_cast<double>(dup_count);
    v[kWindowDistinctSrcCount] = static_cast<double>(srcs.size());
    v[kWindowFrameRateFps] = rate_fps;
    v[kWindowMeanInterArrivalUs] = mean_gap_us;
    v[kSuiteMismatchFlag] = f.suite != ap.suite ? 1.0 : 0.0;

    const std::string* ssid = nullptr;
    if (!f.ssid.empty()) {
      ssid = &f.ssid;
    } else if (auto it = bssid_ssid.find(f.bssid); it != bssid_ssid.end()) {
      ssid = &it->second;
    }
    v[kBssidCloneFlag] =
        ssid && ssid_bssids[*ssid].size() >= 2 ? 1.0 : 0.0;

    double deviation = 0.0;
    if (is_beaconish(f.kind)) {
      const auto& track = beacons_by_bssid[f.bssid];
      if (track.count >= 2) {
        const double observed_tu =
            static_cast<double>(track.last_ts - track.first_ts) /
            static_cast<double>(track.count - 1) / 1024.0;
        deviation = std::abs(observed_tu - profile_tu) / profile_tu;
      } else {
        deviation =
            std::abs(static_cast<double>(f.beacon_interval_tu) - profile_tu) /
            profile_tu;
      }
    }
    v[kBeaconIntervalDeviation] = deviation;

    out.push_back({v, f.label});
  }
  return out;
}

inline std::string features_to_csv(std::span<const LabeledVector> rows) {
  std::string out;
  for (size_t i = 0; i < kFeatureCount; ++i) {
    out += kFeatureNames[i];
    out += ',';
  }
  out += "label\n";
  char buf[64];
  for (const LabeledVector& row : rows) {
    for (double x : row.features) {
      std::snprintf(buf, sizeof buf, "%.17g", x);
      out += buf;
      out += ',';
    }
    out += to_string(row.label);
    out += '\n';
  }
  return out;
}

}  // namespace rids
