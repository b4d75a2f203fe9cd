#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "rids/eval.hpp"
#include "rids/fds.hpp"
#include "rids/features.hpp"
#include "rids/handshake.hpp"
#include "rids/model_io.hpp"

namespace rids {

struct Alarm {
  MacAddr ap_id;
  AttackLabel attack = AttackLabel::Deauth;  // never Normal
  double confidence = 0;                     // share of frames voting for it
  std::optional<MacAddr> attacker;           // unknown when spoofing hides it
  uint64_t raised_at_us = 0;
};

struct BlockEntry {
  MacAddr mac;
  uint64_t inserted_at_us = 0;
};

class BlockList {
 public:
  // Idempotent; returns false when the mac was already present.
  bool insert(MacAddr mac, uint64_t now_us) {
    if (macs_.count(mac)) return false;
    macs_.insert(mac);
    entries_.push_back({mac, now_us});
    return true;
  }
  bool contains(MacAddr mac) const { return macs_.count(mac) > 0; }
  const std::vector<BlockEntry>& entries() const { return entries_; }
  size_t size() const { return macs_.size(); }

 private:
  std::set<MacAddr> macs_;
  std::vector<BlockEntry> entries_;
};

struct BlockNotification {
  MacAddr ap_id;
  MacAddr blocked_mac;
  uint64_t at_us = 0;
};

struct ControllerParams {
  // A 500ms capture mixes attack and background traffic; a plain majority
  // would miss low-rate attacks riding on a busy AP.
  double vote_threshold = 0.20;
};

// Second checkpoint: classifies capture batches, raises alarms, attributes
// the attacker and maintains the network-wide block list.
class Controller {
 public:
  Controller(const AnyModel& model, ControllerParams params = {})
      : model_(model), params_(params) {}

  void register_ap(const ApProfile& ap) {
    profiles_[ap.bssid] = ap;
    known_macs_.insert(ap.bssid);
  }
  void register_station(MacAddr mac) { known_macs_.insert(mac); }

  std::optional<Alarm> handle_batch(const CaptureBatch& batch,
                                    const ApProfile& ap) {
    if (batch.frames.empty()) return std::nullopt;
    auto vectors = extract_window(batch.frames, ap);
    std::vector<AttackLabel> preds(vectors.size());
    std::array<uint64_t, kAttackLabelCount> votes{};
    for (size_t i = 0; i < vectors.size(); ++i) {
      preds[i] = predict_any(model_, vectors[i].features);
      ++votes[static_cast<size_t>(preds[i])];
    }
    size_t best = 1;  // most frequent non-Normal class, ties to lower code
    for (size_t c = 2; c < kAttackLabelCount; ++c)
      if (votes[c] > votes[best]) best = c;
    const double share = static_cast<double>(votes[best]) /
                         static_cast<double>(batch.frames.size());
    if (votes[best] == 0 || share <= params_.vote_threshold)
      return std::nullopt;

    Alarm alarm;
    alarm.ap_id = batch.ap_id;
    alarm.attack = static_cast<AttackLabel>(best);
    alarm.confidence = share;
    alarm.raised_at_us = batch.frames.back().timestamp_us;
    alarm.attacker = attribute_attacker(batch, preds, alarm.attack);
    return alarm;
  }

  // Most frequent source among frames predicted as the alarm class. A deauth
  // flood spoofs the AP's own address, so it falls back to the most frequent
  // source that matches no known AP or station, or reports unknown.
  std::optional<MacAddr> attribute_attacker(const CaptureBatch& batch,
                                            std::span<const AttackLabel> preds,
                                            AttackLabel attack) const {
    std::map<MacAddr, uint64_t> src_counts;
    for (size_t i = 0; i < batch.frames.size(); ++i)
      if (preds[i] == attack) ++src_counts[batch.frames[i].src];
    if (src_counts.empty()) return std::nullopt;

    auto most_frequent = [](const std::map<MacAddr, uint64_t>& counts)
        -> std::optional<MacAddr> {
      std::optional<MacAddr> best;
      uint64_t best_n = 0;
      for (const auto& [mac, n] : counts)
        if (n > best_n) {  // map order makes ties resolve to the lowest mac
          best = mac;
          best_n = n;
        }
      return best;
    };

    if (attack == AttackLabel::Deauth) {
      std::map<MacAddr, uint64_t> unknown_srcs;
      for (const auto& [mac, n] : src_counts)
        if (!known_macs_.count(mac)) unknown_srcs[mac] = n;
      return most_frequent(unknown_srcs);  // nullopt when every src is spoofed
    }
    return most_frequent(src_counts);
  }

  // Idempotent insert plus one notification per registered AP.
  std::vector<BlockNotification> broadcast_block(MacAddr mac, uint64_t now_us) {
    std::vector<BlockNotification> notes;
    if (!block_list_.insert(mac, now_us)) return notes;
    notes.reserve(profiles_.size());
    for (const auto& [bssid, profile] : profiles_)
      notes.push_back({bssid, mac, now_us});
    return notes;
  }

  const BlockList& block_list() const { return block_list_; }
  const std::map<MacAddr, ApProfile>& profiles() const { return profiles_; }

 private:
  const AnyModel& model_;
  ControllerParams params_;
  std::map<MacAddr, ApProfile> profiles_;
  std::set<MacAddr> known_macs_;
  BlockList block_list_;
};

inline std::string alarm_log_line(const Alarm& a) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%llu %s %s %.4f %s",
                static_cast<unsigned long long>(a.raised_at_us),
                a.ap_id.to_string().c_str(), to_string(a.attack), a.confidence,
                a.attacker ? a.attacker->to_string().c_str() : "unknown");
  return buf;
}

}  // namespace rids
