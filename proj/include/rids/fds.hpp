#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rids/frame.hpp"
#include "rids/mac.hpp"

namespace rids {

// Per-AP flood detection. Each 1s quantum counts incoming frames (diff) and
// the per-user mean (mean_diff = diff / users). At quantum close:
//
//   if users > 0 and mean_diff > old_mean_diff * 10   -> capture
//   else if diff > old_diff * 15                      -> capture
//
// The mean branch catches single-source floods; the total branch covers
// distributed floods where the per-user mean stays low. A trigger opens a
// 500ms capture window whose frames are handed to the controller.
//
// Baselines old_diff/old_mean_diff are exponential moving averages updated
// only on non-triggering quanta, so a sustained flood cannot drag the
// baseline up. The first quantum only seeds the baseline and never triggers.

struct FdsParams {
  double mean_factor = 10.0;
  double total_factor = 15.0;
  double ema_alpha = 0.25;
  uint64_t quantum_us = 1'000'000;
  uint64_t capture_us = 500'000;
};

struct QuantumStats {
  MacAddr ap_id;
  uint64_t quantum_index = 0;
  uint64_t diff = 0;      // frames counted in the quantum
  uint32_t users = 0;     // associated stations
  double mean_diff = 0;   // defined only when users > 0
};

enum class TriggerDecision : uint8_t { None, Capture };

struct CaptureBatch {
  MacAddr ap_id;
  uint64_t trigger_quantum = 0;
  std::vector<Frame> frames;
};

struct OrderingError : std::runtime_error {
  explicit OrderingError(const std::string& what) : std::runtime_error(what) {}
};

class FloodDetector {
 public:
  explicit FloodDetector(MacAddr ap_id, FdsParams params = {})
      : ap_(ap_id), params_(params) {}

  // Test hook: start from a warmed-up baseline.
  FloodDetector(MacAddr ap_id, double old_diff, double old_mean_diff,
                FdsParams params = {})
      : ap_(ap_id),
        params_(params),
        old_diff_(old_diff),
        old_mean_diff_(old_mean_diff),
        baseline_ready_(true) {}

  MacAddr ap_id() const { return ap_; }
  uint64_t current_quantum() const { return quantum_; }
  const QuantumStats& last_stats() const { return last_stats_; }

  // Frames must arrive in timestamp order and inside the current quantum;
  // close_quantum() advances the quantum boundary.
  void observe(const Frame& f) {
    if (f.timestamp_us < last_ts_)
      throw OrderingError("frame timestamp went backwards");
    if (f.timestamp_us / params_.quantum_us != quantum_)
      throw OrderingError("frame outside current quantum; close_quantum due");
    last_ts_ = f.timestamp_us;
    ++diff_;
    if (capture_) {
      if (f.timestamp_us >= capture_end_us_) {
        finish_capture();
      } else if (f.timestamp_us >= capture_start_us_) {
        capture_->frames.push_back(f);
      }
    }
  }

  // Called once per quantum, after all of its frames were observed.
  TriggerDecision close_quantum(uint32_t users) {
    const uint64_t close_time = (quantum_ + 1) * params_.quantum_us;
    if (capture_ && close_time >= capture_end_us_) finish_capture();

    const auto diff = static_cast<double>(diff_);
    const bool mean_defined = users > 0;
    const double mean_diff = mean_defined ? diff / users : 0.0;
    last_stats_ = {ap_, quantum_, diff_, users, mean_diff};

    TriggerDecision decision = TriggerDecision::None;
    if (baseline_ready_) {
      if (mean_defined && old_mean_diff_ &&
          mean_diff > *old_mean_diff_ * params_.mean_factor) {
        decision = TriggerDecision::Capture;
      } else if (diff > old_diff_ * params_.total_factor) {
        decision = TriggerDecision::Capture;
      }
    }

    if (decision == TriggerDecision::Capture) {
      // Overlap cannot happen with a 500ms window and 1s quanta, but a
      // trigger during an open capture must not start a second batch.
      if (!capture_) {
        capture_.emplace();
        capture_->ap_id = ap_;
        capture_->trigger_quantum = quantum_;
        capture_start_us_ = close_time;
        capture_end_us_ = close_time + params_.capture_us;
      }
    } else if (!baseline_ready_) {
      old_diff_ = diff;
      if (mean_defined) old_mean_diff_ = mean_diff;
      baseline_ready_ = true;
    } else {
      const double a = params_.ema_alpha;
      old_diff_ = (1 - a) * old_diff_ + a * diff;
      if (mean_defined) {
        old_mean_diff_ = old_mean_diff_
                             ? (1 - a) * *old_mean_diff_ + a * mean_diff
                             : mean_diff;
      }
    }

    diff_ = 0;
    ++quantum_;
    last_ts_ = std::max(last_ts_, close_time);
    return decision;
  }

  // Returns each completed capture batch exactly once.
  std::optional<CaptureBatch> take_batch() {
    if (done_.empty()) return std::nullopt;
    CaptureBatch b = std::move(done_.front());
    done_.erase(done_.begin());
    return b;
  }

  bool capture_active() const { return capture_.has_value(); }
  double old_diff() const { return old_diff_; }
  std::optional<double> old_mean_diff() const { return old_mean_diff_; }

 private:
  void finish_capture() {
    done_.push_back(std::move(*capture_));
    capture_.reset();
  }

  MacAddr ap_;
  FdsParams params_;
  uint64_t quantum_ = 0;
  uint64_t diff_ = 0;
  uint64_t last_ts_ = 0;
  double old_diff_ = 0;
  std::optional<double> old_mean_diff_;
  bool baseline_ready_ = false;
  QuantumStats last_stats_;
  std::optional<CaptureBatch> capture_;
  uint64_t capture_start_us_ = 0;
  uint64_t capture_end_us_ = 0;
  std::vector<CaptureBatch> done_;
};

}  // namespace rids
