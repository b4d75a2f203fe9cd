#pragma once

// Shared scenario builders for the unit and acceptance suites.

#include <cstdlib>
#include <string>
#include <vector>

#include "rids/attack_sim.hpp"
#include "rids/frame.hpp"
#include "rids/rng.hpp"
#include "rids/scenario.hpp"

namespace test_support {

inline rids::MacAddr mac(const char* text) {
  auto m = rids::MacAddr::parse(text);
  if (!m) std::abort();
  return *m;
}

inline rids::MacAddr mac_seq(uint8_t group, uint8_t idx) {
  return rids::MacAddr{{0x02, 0x00, 0x00, 0x00, group, idx}};
}

inline const rids::MacAddr kAp1 = mac("02:10:00:00:00:01");
inline const rids::MacAddr kAp2 = mac("02:10:00:00:00:02");

inline rids::ApProfile corp_ap() {
  return {kAp1, "CorpNet", rids::SecuritySuite::Wpa3Sae, 100, false};
}

inline rids::ApProfile legacy_ap() {
  return {kAp2, "LegacyNet", rids::SecuritySuite::Wpa2Psk, 100, false};
}

inline rids::AttackSpec attack(rids::AttackLabel label, uint8_t attacker_idx,
                               rids::MacAddr target_ap,
                               std::optional<rids::MacAddr> target_sta,
                               double start, double end, double rate) {
  rids::AttackSpec a;
  a.label = label;
  a.attacker_mac = mac_seq(0x66, attacker_idx);
  a.target_ap = target_ap;
  a.target_sta = target_sta;
  a.start_s = start;
  a.end_s = end;
  a.rate_fps = rate;
  return a;
}

// Training corpus: two APs, all five attacks staggered in time, a late flash
// crowd of benign joins, periodic reconnects. Roughly 60k frames with every
// label above 14% of the largest class.
inline rids::ScenarioConfig corpus_config(uint64_t seed) {
  rids::ScenarioConfig cfg;
  cfg.duration_s = 100;
  cfg.seed = seed;
  cfg.baseline_rate_fps = 7;
  cfg.reconnect_period_s = 20;
  cfg.aps = {corp_ap(), legacy_ap()};
  for (uint8_t i = 1; i <= 4; ++i)
    cfg.stations.push_back({mac_seq(1, i), kAp1, 0.1 + 0.3 * (i - 1)});
  for (uint8_t i = 1; i <= 3; ++i)
    cfg.stations.push_back({mac_seq(2, i), kAp2, 0.2 + 0.3 * (i - 1)});
  for (uint8_t i = 1; i <= 40; ++i)  // benign flash crowd
    cfg.stations.push_back({mac_seq(3, i), kAp2, 90.1 + 0.012 * (i - 1)});
  cfg.attacks = {
      attack(rids::AttackLabel::Deauth, 1, kAp1, mac_seq(1, 1), 8, 19, 800),
      attack(rids::AttackLabel::RogueAp, 2, kAp1, mac_seq(1, 2), 24, 36, 700),
      attack(rids::AttackLabel::EvilTwin, 3, kAp1, mac_seq(1, 3), 41, 53, 700),
      attack(rids::AttackLabel::Krack, 4, kAp2, mac_seq(2, 1), 58, 70, 1300),
      attack(rids::AttackLabel::BeaconFlood, 5, kAp1, std::nullopt, 75, 82,
             1300),
  };
  return cfg;
}

// One AP, one attack, held-out seed; used to check generalization end to end.
inline rids::ScenarioConfig single_attack_config(rids::AttackLabel label,
                                                 uint64_t seed) {
  rids::ScenarioConfig cfg;
  cfg.duration_s = 30;
  cfg.seed = seed;
  cfg.baseline_rate_fps = 7;
  cfg.reconnect_period_s = 12;
  const bool krack = label == rids::AttackLabel::Krack;
  cfg.aps = {krack ? legacy_ap() : corp_ap()};
  const rids::MacAddr ap = cfg.aps[0].bssid;
  const uint8_t group = krack ? 2 : 1;
  for (uint8_t i = 1; i <= 3; ++i)
    cfg.stations.push_back({mac_seq(group, i), ap, 0.1 + 0.3 * (i - 1)});
  double rate = 600;
  if (label == rids::AttackLabel::RogueAp || label == rids::AttackLabel::EvilTwin)
    rate = 500;
  if (krack || label == rids::AttackLabel::BeaconFlood) rate = 1200;
  std::optional<rids::MacAddr> target_sta = mac_seq(group, 1);
  if (label == rids::AttackLabel::BeaconFlood) target_sta = std::nullopt;
  cfg.attacks = {attack(label, 9, ap, target_sta, 8.5, 20, rate)};
  return cfg;
}

inline rids::ScenarioConfig baseline_config(uint64_t seed, double duration_s) {
  rids::ScenarioConfig cfg;
  cfg.duration_s = duration_s;
  cfg.seed = seed;
  cfg.baseline_rate_fps = 20;
  cfg.reconnect_period_s = 25;
  cfg.aps = {corp_ap()};
  for (uint8_t i = 1; i <= 5; ++i)
    cfg.stations.push_back({mac_seq(1, i), kAp1, 0.1 + 0.35 * (i - 1)});
  return cfg;
}

// A quiet AP hit by a wave of simultaneous legitimate joins: the flood
// detector must trigger but the classifier must stay silent.
inline rids::ScenarioConfig flash_crowd_config(uint64_t seed) {
  rids::ScenarioConfig cfg;
  cfg.duration_s = 25;
  cfg.seed = seed;
  cfg.baseline_rate_fps = 7;
  cfg.aps = {legacy_ap()};
  for (uint8_t i = 1; i <= 3; ++i)
    cfg.stations.push_back({mac_seq(2, i), kAp2, 0.1 + 0.3 * (i - 1)});
  for (uint8_t i = 1; i <= 40; ++i)
    cfg.stations.push_back({mac_seq(4, i), kAp2, 12.1 + 0.012 * (i - 1)});
  return cfg;
}

// Arbitrary frame with valid enum codes; field cross-invariants are allowed
// to be violated since the codecs must round-trip any representable record.
inline rids::Frame random_frame(rids::Rng& rng) {
  static const std::string ssids[] = {
      "",       "CorpNet",        "a,b",          "say \"hi\"",
      "Guest network", "0123456789abcdef0123456789abcdef",
  };
  rids::Frame f;
  f.frame_number = rng.next_u64() >> 20;
  f.timestamp_us = rng.next_u64() >> 24;
  f.kind = static_cast<rids::FrameKind>(rng.below(rids::kFrameKindCount));
  for (auto* m : {&f.src, &f.dst, &f.bssid})
    for (auto& b : m->octets) b = static_cast<uint8_t>(rng.below(256));
  f.ssid = ssids[rng.below(std::size(ssids))];
  f.suite = static_cast<rids::SecuritySuite>(rng.below(rids::kSecuritySuiteCount));
  f.beacon_interval_tu = static_cast<uint16_t>(rng.below(65536));
  f.eapol_msg = static_cast<uint8_t>(rng.below(5));
  f.retry = rng.chance(0.5);
  f.reason_code = static_cast<uint16_t>(rng.below(100));
  f.label = static_cast<rids::AttackLabel>(rng.below(rids::kAttackLabelCount));
  return f;
}

}  // namespace test_support
