#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rids/frame.hpp"
#include "rids/handshake.hpp"
#include "rids/mac.hpp"

namespace rids {

struct AttackSpec {
  AttackLabel label = AttackLabel::Deauth;  // never Normal
  MacAddr attacker_mac;
  MacAddr target_ap;                   // bssid of the attacked AP
  std::optional<MacAddr> target_sta;   // required for all but beacon flood
  double start_s = 0;
  double end_s = 0;
  double rate_fps = 0;  // frames per second emitted by the attacker
};

struct StationCfg {
  MacAddr mac;
  MacAddr ap_bssid;
  double join_s = 0;  // when the station first connects
};

struct ScenarioConfig {
  double duration_s = 10;
  std::vector<ApProfile> aps;
  std::vector<StationCfg> stations;
  double baseline_rate_fps = 20;  // mean legitimate frames/sec per station
  double reconnect_period_s = 0;  // 0 disables periodic re-association
  std::vector<AttackSpec> attacks;
  uint64_t seed = 1;
};

struct ConfigError : std::runtime_error {
  size_t line;
  ConfigError(size_t ln, const std::string& what)
      : std::runtime_error("config line " + std::to_string(ln) + ": " + what),
        line(ln) {}
};

inline const ApProfile* find_ap(const ScenarioConfig& cfg, MacAddr bssid) {
  for (const auto& ap : cfg.aps)
    if (ap.bssid == bssid) return &ap;
  return nullptr;
}

inline std::vector<std::string> validate_config(const ScenarioConfig& cfg) {
  std::vector<std::string> errors;
  if (cfg.duration_s < 1) errors.push_back("duration_s must be >= 1");
  if (cfg.baseline_rate_fps <= 0)
    errors.push_back("baseline_rate_fps must be > 0");
  if (cfg.aps.empty()) errors.push_back("at least one ap required");
  for (const auto& ap : cfg.aps) {
    if (ap.beacon_interval_tu < 1)
      errors.push_back("ap " + ap.bssid.to_string() +
                       ": beacon_interval_tu must be >= 1");
    if (ap.ssid.size() > kMaxSsidBytes)
      errors.push_back("ap " + ap.bssid.to_string() + ": ssid too long");
  }
  for (const auto& sta : cfg.stations) {
    if (!find_ap(cfg, sta.ap_bssid))
      errors.push_back("station " + sta.mac.to_string() +
                       " references unknown ap " + sta.ap_bssid.to_string());
    if (sta.join_s < 0 || sta.join_s >= cfg.duration_s)
      errors.push_back("station " + sta.mac.to_string() +
                       ": join_s outside scenario");
  }
  for (size_t i = 0; i < cfg.attacks.size(); ++i) {
    const AttackSpec& a = cfg.attacks[i];
    std::string tag = "attack #" + std::to_string(i + 1);
    if (a.label == AttackLabel::Normal)
      errors.push_back(tag + ": label must not be Normal");
    if (!(a.start_s < a.end_s))
      errors.push_back(tag + ": start_s must be < end_s");
    if (a.rate_fps <= 0) errors.push_back(tag + ": rate_fps must be > 0");
    if (a.start_s < 0 || a.end_s > cfg.duration_s)
      errors.push_back(tag + ": window outside [0, duration_s]");
    if (!find_ap(cfg, a.target_ap))
      errors.push_back(tag + ": unknown target ap " + a.target_ap.to_string());
    if (a.label != AttackLabel::BeaconFlood && !a.target_sta)
      errors.push_back(tag + ": target_sta required for this attack");
  }
  return errors;
}

namespace detail {

inline std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.emplace_back(line.substr(start, i - start));
  }
  return out;
}

inline double cfg_number(const std::string& tok, size_t ln) {
  try {
    size_t used = 0;
    double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(ln, "bad number '" + tok + "'");
  }
}

inline MacAddr cfg_mac(const std::string& tok, size_t ln) {
  auto m = MacAddr::parse(tok);
  if (!m) throw ConfigError(ln, "bad mac address '" + tok + "'");
  return *m;
}

inline SecuritySuite cfg_suite(const std::string& tok, size_t ln) {
  if (tok == "open") return SecuritySuite::Open;
  if (tok == "wpa2") return SecuritySuite::Wpa2Psk;
  if (tok == "wpa3") return SecuritySuite::Wpa3Sae;
  throw ConfigError(ln, "suite must be open, wpa2 or wpa3, got '" + tok + "'");
}

inline AttackLabel cfg_attack_label(const std::string& tok, size_t ln) {
  if (tok == "deauth") return AttackLabel::Deauth;
  if (tok == "rogueap") return AttackLabel::RogueAp;
  if (tok == "eviltwin") return AttackLabel::EvilTwin;
  if (tok == "krack") return AttackLabel::Krack;
  if (tok == "beaconflood") return AttackLabel::BeaconFlood;
  throw ConfigError(ln, "unknown attack kind '" + tok + "'");
}

}  // namespace detail

// Plain text scenario description, one entry per line:
//   duration_s N / seed N / baseline_rate_fps N / reconnect_period_s N
//   ap <bssid> <ssid> <open|wpa2|wpa3> <beacon_interval_tu> [mfp]
//   sta <mac> <ap-bssid> [join_s]
//   attack <kind> <attacker-mac> <target-ap-bssid> <target-sta|-> <start_s> <end_s> <rate_fps>
// Blank lines and lines starting with # are skipped.
inline ScenarioConfig parse_config(std::string_view text) {
  ScenarioConfig cfg;
  size_t ln = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++ln;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    auto toks = detail::split_ws(raw);
    if (toks.empty() || toks[0][0] == '#') {
      if (end == text.size()) break;
      continue;
    }
    const std::string& key = toks[0];
    auto want = [&](size_t lo, size_t hi) {
      if (toks.size() - 1 < lo || toks.size() - 1 > hi)
        throw ConfigError(ln, "wrong number of fields for '" + key + "'");
    };
    if (key == "duration_s") {
      want(1, 1);
      cfg.duration_s = detail::cfg_number(toks[1], ln);
    } else if (key == "seed") {
      want(1, 1);
      cfg.seed = static_cast<uint64_t>(detail::cfg_number(toks[1], ln));
    } else if (key == "baseline_rate_fps") {
      want(1, 1);
      cfg.baseline_rate_fps = detail::cfg_number(toks[1], ln);
    } else if (key == "reconnect_period_s") {
      want(1, 1);
      cfg.reconnect_period_s = detail::cfg_number(toks[1], ln);
    } else if (key == "ap") {
      want(4, 5);
      ApProfile ap;
      ap.bssid = detail::cfg_mac(toks[1], ln);
      ap.ssid = toks[2];
      ap.suite = detail::cfg_suite(toks[3], ln);
      double tu = detail::cfg_number(toks[4], ln);
      if (tu < 1 || tu > 65535) throw ConfigError(ln, "beacon_interval_tu out of range");
      ap.beacon_interval_tu = static_cast<uint16_t>(tu);
      if (toks.size() == 6) {
        if (toks[5] != "mfp") throw ConfigError(ln, "unknown ap flag '" + toks[5] + "'");
        ap.mfp_enabled = true;
      }
      cfg.aps.push_back(std::move(ap));
    } else if (key == "sta") {
      want(2, 3);
      StationCfg sta;
      sta.mac = detail::cfg_mac(toks[1], ln);
      sta.ap_bssid = detail::cfg_mac(toks[2], ln);
      if (toks.size() == 4) sta.join_s = detail::cfg_number(toks[3], ln);
      cfg.stations.push_back(sta);
    } else if (key == "attack") {
      want(7, 7);
      AttackSpec a;
      a.label = detail::cfg_attack_label(toks[1], ln);
      a.attacker_mac = detail::cfg_mac(toks[2], ln);
      a.target_ap = detail::cfg_mac(toks[3], ln);
      if (toks[4] != "-") a.target_sta = detail::cfg_mac(toks[4], ln);
      a.start_s = detail::cfg_number(toks[5], ln);
      a.end_s = detail::cfg_number(toks[6], ln);
      a.rate_fps = detail::cfg_number(toks[7], ln);
      cfg.attacks.push_back(a);
    } else {
      throw ConfigError(ln, "unknown key '" + key + "'");
    }
    if (end == text.size()) break;
  }
  return cfg;
}

inline std::string format_config(const ScenarioConfig& cfg) {
  std::ostringstream out;
  out << "duration_s " << cfg.duration_s << '\n';
  out << "seed " << cfg.seed << '\n';
  out << "baseline_rate_fps " << cfg.baseline_rate_fps << '\n';
  if (cfg.reconnect_period_s > 0)
    out << "reconnect_period_s " << cfg.reconnect_period_s << '\n';
  for (const auto& ap : cfg.aps) {
    const char* suite = ap.suite == SecuritySuite::Open    ? "open"
                        : ap.suite == SecuritySuite::Wpa2Psk ? "wpa2"
                                                             : "wpa3";
    out << "ap " << ap.bssid.to_string() << ' ' << ap.ssid << ' ' << suite
        << ' ' << ap.beacon_interval_tu;
    if (ap.mfp_enabled) out << " mfp";
    out << '\n';
  }
  for (const auto& sta : cfg.stations) {
    out << "sta " << sta.mac.to_string() << ' ' << sta.ap_bssid.to_string();
    if (sta.join_s > 0) out << ' ' << sta.join_s;
    out << '\n';
  }
  for (const auto& a : cfg.attacks) {
    const char* kind = a.label == AttackLabel::Deauth     ? "deauth"
                       : a.label == AttackLabel::RogueAp  ? "rogueap"
                       : a.label == AttackLabel::EvilTwin ? "eviltwin"
                       : a.label == AttackLabel::Krack    ? "krack"
                                                          : "beaconflood";
    out << "attack " << kind << ' ' << a.attacker_mac.to_string() << ' '
        << a.target_ap.to_string() << ' '
        << (a.target_sta ? a.target_sta->to_string() : std::string("-")) << ' '
        << a.start_s << ' ' << a.end_s << ' ' << a.rate_fps << '\n';
  }
  return out.str();
}

}  // namespace rids
