#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rids/frame.hpp"
#include "rids/handshake.hpp"
#include "rids/rng.hpp"
#include "rids/scenario.hpp"

namespace rids {

// Reason codes stamped by the generators.
inline constexpr uint16_t kReasonSpoofedDeauth = 7;   // class-3 frame from nonassociated STA
inline constexpr uint16_t kReasonStaLeaving = 8;      // benign disassociation
inline constexpr uint16_t kReasonDeauthLeaving = 3;   // benign deauthentication

namespace detail {

inline constexpr uint64_t kStationSalt = 0x57a0;
inline constexpr uint64_t kAttackSalt = 0xa77a;
inline constexpr uint64_t kTuUs = 1024;  // one beacon time unit in microseconds

inline Frame base_frame(FrameKind kind, uint64_t t_us, MacAddr src, MacAddr dst,
                        MacAddr bssid, SecuritySuite suite, AttackLabel label) {
  Frame f;
  f.timestamp_us = t_us;
  f.kind = kind;
  f.src = src;
  f.dst = dst;
  f.bssid = bssid;
  f.suite = suite;
  f.label = label;
  return f;
}

inline Frame beacon_frame(const ApProfile& ap, uint64_t t_us, AttackLabel label,
                          FrameKind kind = FrameKind::Beacon,
                          MacAddr dst = MacAddr::broadcast()) {
  Frame f = base_frame(kind, t_us, ap.bssid, dst, ap.bssid, ap.suite, label);
  f.ssid = ap.ssid;
  f.beacon_interval_tu = ap.beacon_interval_tu;
  return f;
}

// Uniform attack cadence; the half-step offset keeps frames strictly inside
// the window and clear of any frame placed exactly at start.
inline uint64_t uniform_ts(double start_s, double rate_fps, size_t i) {
  return static_cast<uint64_t>(
      std::llround(start_s * 1e6 + (static_cast<double>(i) + 0.5) / rate_fps * 1e6));
}

}  // namespace detail

inline uint64_t station_stream_seed(uint64_t scenario_seed, size_t station_index) {
  return derive_seed(scenario_seed, detail::kStationSalt + station_index);
}

inline uint64_t attack_stream_seed(uint64_t scenario_seed, size_t attack_index) {
  return derive_seed(scenario_seed, detail::kAttackSalt + attack_index);
}

// Legitimate traffic: AP beacons on their advertised cadence, one connection
// exchange when each station joins (and on the reconnect period if enabled),
// plus per-station Poisson management chatter standing in for the data plane.
inline std::vector<Frame> gen_baseline(const ScenarioConfig& cfg) {
  std::vector<Frame> frames;
  const uint64_t duration_us = static_cast<uint64_t>(cfg.duration_s * 1e6);

  for (size_t i = 0; i < cfg.aps.size(); ++i) {
    const ApProfile& ap = cfg.aps[i];
    const uint64_t period = ap.beacon_interval_tu * detail::kTuUs;
    for (uint64_t t = (i + 1) * 263; t < duration_us; t += period)
      frames.push_back(detail::beacon_frame(ap, t, AttackLabel::Normal));
  }

  for (size_t s = 0; s < cfg.stations.size(); ++s) {
    const StationCfg& sta = cfg.stations[s];
    const ApProfile* ap = find_ap(cfg, sta.ap_bssid);
    if (!ap) throw std::invalid_argument("station references unknown ap");
    const uint64_t join_us = static_cast<uint64_t>(sta.join_s * 1e6);

    auto connect_at = [&](uint64_t t) {
      auto seq = connect_sequence(sta.mac, *ap, t);
      frames.insert(frames.end(), seq.begin(), seq.end());
    };
    connect_at(join_us);
    if (cfg.reconnect_period_s > 0) {
      for (double t = sta.join_s + cfg.reconnect_period_s; t < cfg.duration_s;
           t += cfg.reconnect_period_s)
        connect_at(static_cast<uint64_t>(t * 1e6));
    }

    Rng rng(station_stream_seed(cfg.seed, s));
    double t = static_cast<double>(join_us) + rng.exp_gap_us(cfg.baseline_rate_fps);
    while (t < static_cast<double>(duration_us)) {
      uint64_t roll = rng.below(100);
      Frame f;
      if (roll < 45) {
        f = detail::base_frame(FrameKind::Authentication, static_cast<uint64_t>(t),
                               sta.mac, ap->bssid, ap->bssid, ap->suite,
                               AttackLabel::Normal);
      } else if (roll < 88) {
        f = detail::base_frame(FrameKind::AssociationRequest,
                               static_cast<uint64_t>(t), sta.mac, ap->bssid,
                               ap->bssid, ap->suite, AttackLabel::Normal);
        f.ssid = ap->ssid;
      } else if (roll < 96) {
        f = detail::base_frame(FrameKind::Disassociation, static_cast<uint64_t>(t),
                               sta.mac, ap->bssid, ap->bssid, ap->suite,
                               AttackLabel::Normal);
        f.reason_code = kReasonStaLeaving;
      } else {
        f = detail::base_frame(FrameKind::Deauthentication,
                               static_cast<uint64_t>(t), sta.mac, ap->bssid,
                               ap->bssid, ap->suite, AttackLabel::Normal);
        f.reason_code = kReasonDeauthLeaving;
      }
      frames.push_back(std::move(f));
      t += rng.exp_gap_us(cfg.baseline_rate_fps);
    }
  }

  std::stable_sort(frames.begin(), frames.end(),
                   [](const Frame& a, const Frame& b) {
                     return a.timestamp_us < b.timestamp_us;
                   });
  for (size_t i = 0; i < frames.size(); ++i) frames[i].frame_number = i;
  return frames;
}

// Spoofed deauthentication burst right after a fresh association request from
// the victim, forcing the disconnect.
inline std::vector<Frame> inject_deauth_flood(const AttackSpec& spec,
                                              const ApProfile& ap,
                                              uint64_t /*seed*/) {
  std::vector<Frame> frames;
  if (!(spec.start_s < spec.end_s)) return frames;
  const MacAddr sta = spec.target_sta.value_or(MacAddr{});

  Frame assoc = detail::base_frame(
      FrameKind::AssociationRequest,
      static_cast<uint64_t>(std::llround(spec.start_s * 1e6)), sta, ap.bssid,
      ap.bssid, ap.suite, AttackLabel::Normal);
  assoc.ssid = ap.ssid;
  frames.push_back(std::move(assoc));

  const auto n = static_cast<size_t>(
      std::llround(spec.rate_fps * (spec.end_s - spec.start_s)));
  for (size_t i = 0; i < n; ++i) {
    Frame f = detail::base_frame(FrameKind::Deauthentication,
                                 detail::uniform_ts(spec.start_s, spec.rate_fps, i),
                                 ap.bssid, sta, ap.bssid, ap.suite,
                                 AttackLabel::Deauth);
    f.reason_code = kReasonSpoofedDeauth;
    frames.push_back(std::move(f));
  }
  return frames;
}

inline ApProfile rogue_profile(const ApProfile& legit) {
  ApProfile rogue = legit;
  rogue.suite = SecuritySuite::Wpa2Psk;
  rogue.beacon_interval_tu =
      std::max<uint16_t>(1, static_cast<uint16_t>(legit.beacon_interval_tu / 2));
  return rogue;
}

namespace detail {

inline void rogue_beacons(std::vector<Frame>& out, const AttackSpec& spec,
                          const ApProfile& rogue, double start_s, double end_s) {
  const auto n =
      static_cast<size_t>(std::llround(spec.rate_fps * (end_s - start_s)));
  for (size_t i = 0; i < n; ++i)
    out.push_back(beacon_frame(rogue, uniform_ts(start_s, spec.rate_fps, i),
                               AttackLabel::RogueAp));
}

}  // namespace detail

// Clone of the legitimate AP advertising WPA2 and a halved beacon interval,
// blasted fast enough to win the race for the station. Each lured station
// runs a WPA2 exchange that aborts on the RSNE check in message 3.
inline std::vector<Frame> inject_rogue_ap(const AttackSpec& spec,
                                          const ApProfile& legit,
                                          uint64_t /*seed*/) {
  std::vector<Frame> frames;
  if (!(spec.start_s < spec.end_s)) return frames;
  const ApProfile rogue = rogue_profile(legit);
  detail::rogue_beacons(frames, spec, rogue, spec.start_s, spec.end_s);

  if (spec.target_sta) {
    for (double t = spec.start_s + 0.25; t < spec.end_s; t += 2.0) {
      auto seq = connect_sequence(*spec.target_sta, rogue,
                                  static_cast<uint64_t>(t * 1e6));
      seq.resize(6);  // aborts right after EAPOL message 3
      for (Frame& f : seq) f.label = AttackLabel::RogueAp;
      frames.insert(frames.end(), seq.begin(), seq.end());
    }
  }
  std::stable_sort(frames.begin(), frames.end(),
                   [](const Frame& a, const Frame& b) {
                     return a.timestamp_us < b.timestamp_us;
                   });
  return frames;
}

// Twin AP with a different bssid but otherwise identical advertisement; a
// deauth burst pushes the victim off the legitimate AP first, then the victim
// completes a full exchange with the twin.
inline std::vector<Frame> inject_evil_twin(const AttackSpec& spec,
                                           const ApProfile& legit,
                                           uint64_t /*seed*/) {
  std::vector<Frame> frames;
  if (!(spec.start_s < spec.end_s)) return frames;
  const MacAddr sta = spec.target_sta.value_or(MacAddr{});

  constexpr size_t kBurst = 25;
  for (size_t i = 0; i < kBurst; ++i) {
    Frame f = detail::base_frame(
        FrameKind::Deauthentication,
        static_cast<uint64_t>(std::llround(spec.start_s * 1e6)) + i * 2000,
        legit.bssid, sta, legit.bssid, legit.suite, AttackLabel::EvilTwin);
    f.reason_code = kReasonSpoofedDeauth;
    frames.push_back(std::move(f));
  }

  ApProfile twin = legit;
  twin.bssid = spec.attacker_mac;

  const double beacons_from = spec.start_s + 0.06;
  const auto n = static_cast<size_t>(
      std::llround(spec.rate_fps * (spec.end_s - beacons_from)));
  for (size_t i = 0; i < n; ++i) {
    FrameKind kind = i % 3 == 2 ? FrameKind::ProbeResponse : FrameKind::Beacon;
    MacAddr dst = kind == FrameKind::ProbeResponse && spec.target_sta
                      ? sta
                      : MacAddr::broadcast();
    frames.push_back(detail::beacon_frame(
        twin, detail::uniform_ts(beacons_from, spec.rate_fps, i),
        AttackLabel::EvilTwin, kind, dst));
  }

  if (spec.target_sta) {
    auto seq = connect_sequence(sta, twin,
                                static_cast<uint64_t>((spec.start_s + 0.2) * 1e6));
    for (Frame& f : seq) f.label = AttackLabel::EvilTwin;
    frames.insert(frames.end(), seq.begin(), seq.end());
  }
  std::stable_sort(frames.begin(), frames.end(),
                   [](const Frame& a, const Frame& b) {
                     return a.timestamp_us < b.timestamp_us;
                   });
  return frames;
}

inline constexpr int kKrackDupsPerEpisode = 12;

// Key reinstallation: the WPA2 exchange runs normally up to message 3, the
// attacker then forces retransmissions of message 3 (retry bit set) and the
// final message 4 lands late. Against a WPA3 AP the stream opens with a
// rogue-AP downgrade segment.
inline std::vector<Frame> inject_krack(const AttackSpec& spec,
                                       const ApProfile& target,
                                       uint64_t /*seed*/) {
  std::vector<Frame> frames;
  if (!(spec.start_s < spec.end_s)) return frames;
  const MacAddr sta = spec.target_sta.value_or(MacAddr{});

  ApProfile work = target;
  double episodes_from = spec.start_s;
  if (target.suite == SecuritySuite::Wpa3Sae) {
    work = rogue_profile(target);
    double prefix_end = std::min(spec.start_s + 1.0, spec.end_s);
    detail::rogue_beacons(frames, spec, work, spec.start_s, prefix_end);
    episodes_from = prefix_end + 0.2;
  } else if (target.suite == SecuritySuite::Open) {
    return frames;  // no 4-way handshake to manipulate
  }

  const double episode_frames = 7.0 + kKrackDupsPerEpisode;
  const double episode_gap_s = episode_frames / spec.rate_fps;
  const auto episodes =
      episodes_from >= spec.end_s
          ? size_t{0}
          : static_cast<size_t>(
                std::floor((spec.end_s - episodes_from) / episode_gap_s));
  for (size_t e = 0; e < episodes; ++e) {
    const uint64_t t0 =
        static_cast<uint64_t>(std::llround((episodes_from + static_cast<double>(e) * episode_gap_s) * 1e6));
    auto seq = connect_sequence(sta, work, t0);  // 7 frames ending Eapol(4)
    Frame msg3 = seq[5];
    Frame msg4 = seq[6];
    seq.resize(6);
    frames.insert(frames.end(), seq.begin(), seq.end());
    uint64_t t = seq.back().timestamp_us;
    for (int d = 0; d < kKrackDupsPerEpisode; ++d) {
      t += 3000;
      Frame dup = msg3;
      dup.timestamp_us = t;
      dup.retry = true;
      dup.label = AttackLabel::Krack;
      frames.push_back(std::move(dup));
    }
    msg4.timestamp_us = t + 30000;  // the delayed message 4
    frames.push_back(std::move(msg4));
  }
  std::stable_sort(frames.begin(), frames.end(),
                   [](const Frame& a, const Frame& b) {
                     return a.timestamp_us < b.timestamp_us;
                   });
  return frames;
}

// Beacon and probe-response flood advertising the legitimate SSID from the
// attacker's device. Flood tools announce an open network, so the suite field
// does not match the real AP.
inline std::vector<Frame> inject_beacon_flood(const AttackSpec& spec,
                                              const ApProfile& legit,
                                              uint64_t /*seed*/) {
  std::vector<Frame> frames;
  if (!(spec.start_s < spec.end_s)) return frames;
  ApProfile fake = legit;
  fake.bssid = spec.attacker_mac;
  fake.suite = SecuritySuite::Open;

  const auto n = static_cast<size_t>(
      std::llround(spec.rate_fps * (spec.end_s - spec.start_s)));
  for (size_t i = 0; i < n; ++i) {
    FrameKind kind = i % 3 == 2 ? FrameKind::ProbeResponse : FrameKind::Beacon;
    MacAddr dst = kind == FrameKind::ProbeResponse && spec.target_sta
                      ? *spec.target_sta
                      : MacAddr::broadcast();
    frames.push_back(detail::beacon_frame(
        fake, detail::uniform_ts(spec.start_s, spec.rate_fps, i),
        AttackLabel::BeaconFlood, kind, dst));
  }
  return frames;
}

inline std::vector<Frame> gen_attack_stream(const ScenarioConfig& cfg,
                                            size_t attack_index) {
  const AttackSpec& spec = cfg.attacks.at(attack_index);
  const ApProfile* ap = find_ap(cfg, spec.target_ap);
  if (!ap) throw std::invalid_argument("attack references unknown ap");
  const uint64_t seed = attack_stream_seed(cfg.seed, attack_index);
  switch (spec.label) {
    case AttackLabel::Deauth:
      return inject_deauth_flood(spec, *ap, seed);
    case AttackLabel::RogueAp:
      return inject_rogue_ap(spec, *ap, seed);
    case AttackLabel::EvilTwin:
      return inject_evil_twin(spec, *ap, seed);
    case AttackLabel::Krack:
      return inject_krack(spec, *ap, seed);
    case AttackLabel::BeaconFlood:
      return inject_beacon_flood(spec, *ap, seed);
    case AttackLabel::Normal:
      break;
  }
  throw std::invalid_argument("attack label must not be Normal");
}

// Merged scenario stream plus the index of the generator that produced each
// frame (-1 baseline, otherwise the attack index). Ties on timestamp order
// attacker frames before baseline ones, then keep generation order.
inline std::pair<std::vector<Frame>, std::vector<int>> gen_scenario_traced(
    const ScenarioConfig& cfg) {
  struct Tagged {
    Frame f;
    int origin;
    size_t gen_order;
  };
  std::vector<Tagged> all;
  {
    auto base = gen_baseline(cfg);
    all.reserve(base.size());
    for (auto& f : base) all.push_back({std::move(f), -1, all.size()});
  }
  for (size_t a = 0; a < cfg.attacks.size(); ++a) {
    auto stream = gen_attack_stream(cfg, a);
    for (auto& f : stream)
      all.push_back({std::move(f), static_cast<int>(a), all.size()});
  }
  std::sort(all.begin(), all.end(), [](const Tagged& x, const Tagged& y) {
    if (x.f.timestamp_us != y.f.timestamp_us)
      return x.f.timestamp_us < y.f.timestamp_us;
    bool xa = x.origin >= 0, ya = y.origin >= 0;
    if (xa != ya) return xa;  // attacker before victim
    return x.gen_order < y.gen_order;
  });
  std::vector<Frame> frames;
  std::vector<int> origins;
  frames.reserve(all.size());
  origins.reserve(all.size());
  for (auto& t : all) {
    t.f.frame_number = frames.size();
    frames.push_back(std::move(t.f));
    origins.push_back(t.origin);
  }
  return {std::move(frames), std::move(origins)};
}

inline std::vector<Frame> gen_scenario(const ScenarioConfig& cfg) {
  return gen_scenario_traced(cfg).first;
}

}  // namespace rids
