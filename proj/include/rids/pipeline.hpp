#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "rids/attack_sim.hpp"
#include "rids/controller.hpp"
#include "rids/csv.hpp"
#include "rids/eval.hpp"
#include "rids/fds.hpp"
#include "rids/features.hpp"
#include "rids/forest.hpp"
#include "rids/log.hpp"
#include "rids/logreg.hpp"
#include "rids/model_io.hpp"
#include "rids/scenario.hpp"
#include "rids/tree.hpp"
#include "rids/wire.hpp"

namespace rids {

inline constexpr uint64_t kTrainWindowUs = 500'000;  // matches the capture span

// A frame belongs to an AP's air when it carries the AP's bssid or ssid or is
// addressed to or from it. Clones and twins land on the AP they imitate.
inline const ApProfile* route_frame(const Frame& f,
                                    std::span<const ApProfile> aps) {
  for (const ApProfile& ap : aps) {
    if (f.bssid == ap.bssid || f.src == ap.bssid || f.dst == ap.bssid)
      return &ap;
    if (!f.ssid.empty() && f.ssid == ap.ssid) return &ap;
  }
  return nullptr;
}

// Per-frame labeled vectors over fixed 500ms slices of each AP's stream, the
// same window shape the controller sees at run time.
inline std::vector<LabeledVector> build_training_set(
    std::span<const Frame> frames, std::span<const ApProfile> aps) {
  std::vector<std::vector<Frame>> per_ap(aps.size());
  for (const Frame& f : frames) {
    const ApProfile* ap = route_frame(f, aps);
    if (!ap) continue;
    per_ap[static_cast<size_t>(ap - aps.data())].push_back(f);
  }
  std::vector<LabeledVector> out;
  out.reserve(frames.size());
  for (size_t a = 0; a < aps.size(); ++a) {
    const auto& stream = per_ap[a];
    size_t begin = 0;
    while (begin < stream.size()) {
      const uint64_t window = stream[begin].timestamp_us / kTrainWindowUs;
      size_t end = begin;
      while (end < stream.size() &&
             stream[end].timestamp_us / kTrainWindowUs == window)
        ++end;
      auto vectors = extract_window(
          std::span<const Frame>(stream.data() + begin, end - begin), aps[a]);
      out.insert(out.end(), vectors.begin(), vectors.end());
      begin = end;
    }
  }
  return out;
}

// Stratified split: per label, deterministic shuffle, first train_frac to the
// training side.
inline std::pair<std::vector<LabeledVector>, std::vector<LabeledVector>>
stratified_split(std::span<const LabeledVector> data, double train_frac,
                 uint64_t seed) {
  std::array<std::vector<uint32_t>, kAttackLabelCount> by_label;
  for (size_t i = 0; i < data.size(); ++i)
    by_label[static_cast<size_t>(data[i].label)].push_back(
        static_cast<uint32_t>(i));
  std::vector<LabeledVector> train, test;
  for (size_t c = 0; c < kAttackLabelCount; ++c) {
    auto& idx = by_label[c];
    Rng rng(derive_seed(seed, 0x5011 + c));
    for (size_t i = idx.size(); i > 1; --i)
      std::swap(idx[i - 1], idx[rng.below(i)]);
    const size_t n_train =
        static_cast<size_t>(static_cast<double>(idx.size()) * train_frac);
    for (size_t i = 0; i < idx.size(); ++i)
      (i < n_train ? train : test).push_back(data[idx[i]]);
  }
  return {std::move(train), std::move(test)};
}

enum class ModelKind : uint8_t { LogReg, Tree, Forest };

inline std::optional<ModelKind> model_kind_from(std::string_view name) {
  if (name == "logreg") return ModelKind::LogReg;
  if (name == "tree") return ModelKind::Tree;
  if (name == "forest") return ModelKind::Forest;
  return std::nullopt;
}

inline AnyModel train_model(ModelKind kind, std::span<const LabeledVector> data,
                            uint64_t seed) {
  switch (kind) {
    case ModelKind::Tree:
      return fit_tree(data, TreeParams{12, 2, seed});
    case ModelKind::Forest:
      return fit_forest(data, ForestParams{50, 0, 12, 5, true, seed});
    case ModelKind::LogReg:
      return fit_logreg(data, LogRegParams{500, 0.1, seed});
  }
  throw std::invalid_argument("unknown model kind");
}

struct TrainResult {
  AnyModel model;
  EvalReport report;
  size_t train_samples = 0;
  size_t test_samples = 0;
};

inline TrainResult train_and_evaluate(ModelKind kind,
                                      std::span<const LabeledVector> vectors,
                                      uint64_t seed) {
  auto [train, test] = stratified_split(vectors, 0.7, seed);
  TrainResult r;
  r.model = train_model(kind, train, seed);
  r.report = std::visit(
      [&](const auto& m) { return evaluate(m, std::span<const LabeledVector>(test)); },
      r.model);
  r.train_samples = train.size();
  r.test_samples = test.size();
  return r;
}

// ---------------------------------------------------------------------------
// Replay: frames stream through per-AP flood detectors; completed capture
// batches cross the wire encoding and land at the controller.

struct AlarmEvent {
  uint64_t trigger_quantum = 0;
  Alarm alarm;
  double classify_ms = 0;
  size_t batch_frames = 0;
};

struct AttackOutcome {
  size_t attack_index = 0;
  AttackLabel label = AttackLabel::Deauth;
  uint64_t onset_quantum = 0;
  std::optional<uint64_t> first_trigger_quantum;
  std::optional<int64_t> trigger_latency_quanta;
  bool alarm_matched = false;
};

struct RunReport {
  uint64_t total_frames = 0;
  uint64_t batches = 0;
  uint64_t triggers = 0;
  std::vector<AlarmEvent> alarms;
  std::vector<AttackOutcome> attacks;
  double max_classify_ms = 0;
  double total_classify_ms = 0;
  double wall_ms = 0;

  std::set<AttackLabel> alarm_classes() const {
    std::set<AttackLabel> classes;
    for (const auto& e : alarms) classes.insert(e.alarm.attack);
    return classes;
  }

  // Stable textual form, timing fields excluded, for determinism checks.
  std::string canonical() const {
    std::ostringstream out;
    out << "frames " << total_frames << " batches " << batches << " triggers "
        << triggers << '\n';
    for (const auto& e : alarms)
      out << "alarm q" << e.trigger_quantum << ' '
          << e.alarm.ap_id.to_string() << ' ' << to_string(e.alarm.attack)
          << ' ' << e.alarm.confidence << ' '
          << (e.alarm.attacker ? e.alarm.attacker->to_string()
                               : std::string("unknown"))
          << " n=" << e.batch_frames << '\n';
    for (const auto& a : attacks)
      out << "attack " << a.attack_index << ' ' << to_string(a.label)
          << " onset " << a.onset_quantum << " trigger "
          << (a.first_trigger_quantum ? std::to_string(*a.first_trigger_quantum)
                                      : std::string("-"))
          << " matched " << a.alarm_matched << '\n';
    return out.str();
  }
};

struct ReplayOptions {
  FdsParams fds{};
  ControllerParams controller{};
  std::string alarm_log_path;  // append alarms here when non-empty
};

inline RunReport replay_frames(std::span<const Frame> frames,
                               const ScenarioConfig& cfg, const AnyModel& model,
                               const ReplayOptions& opts = {}) {
  const auto wall_start = std::chrono::steady_clock::now();
  RunReport report;
  report.total_frames = frames.size();

  Controller controller(model, opts.controller);
  for (const ApProfile& ap : cfg.aps) controller.register_ap(ap);
  for (const StationCfg& sta : cfg.stations) controller.register_station(sta.mac);

  std::ofstream alarm_log;
  if (!opts.alarm_log_path.empty())
    alarm_log.open(opts.alarm_log_path, std::ios::app);

  std::vector<FloodDetector> detectors;
  detectors.reserve(cfg.aps.size());
  for (const ApProfile& ap : cfg.aps)
    detectors.emplace_back(ap.bssid, opts.fds);

  // Stations associated by the start of a quantum.
  auto users_at = [&](size_t ap_idx, uint64_t quantum) {
    uint32_t users = 0;
    for (const StationCfg& sta : cfg.stations)
      if (sta.ap_bssid == cfg.aps[ap_idx].bssid &&
          sta.join_s <= static_cast<double>(quantum))
        ++users;
    return users;
  };

  std::map<size_t, std::vector<uint64_t>> trigger_quanta;  // ap index -> quanta

  auto process_batches = [&](size_t ap_idx) {
    FloodDetector& det = detectors[ap_idx];
    while (auto batch = det.take_batch()) {
      ++report.batches;
      // Over the wire and back, exactly as an AP would ship it.
      WireMessage msg{WireKind::CaptureBatchMsg, encode_batch(*batch)};
      auto bytes = frame_message(msg);
      ParseResult parsed = parse_message(bytes);
      if (parsed.status != ParseStatus::Ok)
        throw std::runtime_error("wire transport failed in replay");
      CaptureBatch received = decode_batch(parsed.message.payload);

      const auto t0 = std::chrono::steady_clock::now();
      auto alarm = controller.handle_batch(received, cfg.aps[ap_idx]);
      const auto t1 = std::chrono::steady_clock::now();
      const double ms =
          std::chrono::duration<double, std::milli>(t1 - t0).count();
      report.max_classify_ms = std::max(report.max_classify_ms, ms);
      report.total_classify_ms += ms;
      if (alarm) {
        report.alarms.push_back(
            {received.trigger_quantum, *alarm, ms, received.frames.size()});
        if (alarm_log.is_open())
          alarm_log << alarm_log_line(*alarm) << '\n';
        if (alarm->attacker)
          controller.broadcast_block(*alarm->attacker, alarm->raised_at_us);
      }
    }
  };

  auto close_through = [&](size_t ap_idx, uint64_t quantum_exclusive) {
    FloodDetector& det = detectors[ap_idx];
    while (det.current_quantum() < quantum_exclusive) {
      const uint64_t q = det.current_quantum();
      if (det.close_quantum(users_at(ap_idx, q)) == TriggerDecision::Capture) {
        ++report.triggers;
        trigger_quanta[ap_idx].push_back(q);
      }
      process_batches(ap_idx);
    }
  };

  for (const Frame& f : frames) {
    const ApProfile* ap = route_frame(f, cfg.aps);
    if (!ap) continue;
    const auto ap_idx = static_cast<size_t>(ap - cfg.aps.data());
    close_through(ap_idx, f.timestamp_us / opts.fds.quantum_us);
    detectors[ap_idx].observe(f);
    process_batches(ap_idx);
  }
  const auto final_quantum =
      static_cast<uint64_t>(std::ceil(cfg.duration_s)) + 1;
  for (size_t a = 0; a < cfg.aps.size(); ++a) close_through(a, final_quantum);

  for (size_t i = 0; i < cfg.attacks.size(); ++i) {
    const AttackSpec& spec = cfg.attacks[i];
    AttackOutcome outcome;
    outcome.attack_index = i;
    outcome.label = spec.label;
    outcome.onset_quantum = static_cast<uint64_t>(spec.start_s);
    const ApProfile* target = find_ap(cfg, spec.target_ap);
    const auto ap_idx = static_cast<size_t>(target - cfg.aps.data());
    const uint64_t horizon = static_cast<uint64_t>(std::ceil(spec.end_s)) + 2;
    for (uint64_t q : trigger_quanta[ap_idx]) {
      if (q >= outcome.onset_quantum && q <= horizon) {
        outcome.first_trigger_quantum = q;
        outcome.trigger_latency_quanta =
            static_cast<int64_t>(q) - static_cast<int64_t>(outcome.onset_quantum);
        break;
      }
    }
    for (const AlarmEvent& e : report.alarms)
      if (e.alarm.attack == spec.label && e.alarm.ap_id == spec.target_ap &&
          e.trigger_quantum >= outcome.onset_quantum &&
          e.trigger_quantum <= horizon)
        outcome.alarm_matched = true;
    report.attacks.push_back(outcome);
  }

  report.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - wall_start)
                       .count();
  return report;
}

inline RunReport replay_scenario(const ScenarioConfig& cfg, const AnyModel& model,
                                 const ReplayOptions& opts = {}) {
  auto frames = gen_scenario(cfg);
  return replay_frames(frames, cfg, model, opts);
}

// Scenario-level expectations: every injected attack triggers promptly and
// raises its own class; attack-free scenarios stay silent.
inline bool check_scenario_assertions(const RunReport& report,
                                      const ScenarioConfig& cfg,
                                      std::string* messages = nullptr) {
  std::ostringstream msg;
  bool ok = true;
  auto fail = [&](const std::string& what) {
    ok = false;
    msg << "FAIL: " << what << '\n';
  };
  if (cfg.attacks.empty()) {
    if (!report.alarms.empty())
      fail("attack-free scenario raised " + std::to_string(report.alarms.size()) +
           " alarms");
  } else {
    std::set<AttackLabel> expected;
    for (const auto& a : cfg.attacks) expected.insert(a.label);
    for (const auto& outcome : report.attacks) {
      const std::string tag =
          "attack #" + std::to_string(outcome.attack_index + 1) + " (" +
          to_string(outcome.label) + ")";
      if (!outcome.first_trigger_quantum)
        fail(tag + " never triggered a capture");
      else if (*outcome.trigger_latency_quanta > 2)
        fail(tag + " triggered after " +
             std::to_string(*outcome.trigger_latency_quanta) + " quanta");
      if (!outcome.alarm_matched) fail(tag + " raised no matching alarm");
    }
    if (report.alarm_classes() != expected) {
      std::string got;
      for (AttackLabel l : report.alarm_classes())
        got += std::string(" ") + to_string(l);
      fail("alarm classes {" + got + " } differ from injected set");
    }
  }
  if (messages) *messages = msg.str();
  return ok;
}

// ---------------------------------------------------------------------------
// Dataset directory layout: dataset.bin, dataset.csv, manifest.txt.

struct Manifest {
  uint64_t seed = 0;
  double duration_s = 0;
  uint64_t frames = 0;
  std::array<uint64_t, kAttackLabelCount> label_counts{};
  std::vector<ApProfile> aps;
  std::vector<StationCfg> stations;
};

inline std::string format_manifest(const Manifest& m) {
  std::ostringstream out;
  out << "rids_dataset v1\n";
  out << "seed " << m.seed << '\n';
  out << "duration_s " << m.duration_s << '\n';
  out << "frames " << m.frames << '\n';
  for (int c = 0; c < kAttackLabelCount; ++c)
    out << "label " << kAttackLabelNames[c] << ' '
        << m.label_counts[static_cast<size_t>(c)] << '\n';
  for (const auto& ap : m.aps) {
    const char* suite = ap.suite == SecuritySuite::Open    ? "open"
                        : ap.suite == SecuritySuite::Wpa2Psk ? "wpa2"
                                                             : "wpa3";
    out << "ap " << ap.bssid.to_string() << ' ' << ap.ssid << ' ' << suite
        << ' ' << ap.beacon_interval_tu << (ap.mfp_enabled ? " mfp" : "")
        << '\n';
  }
  for (const auto& sta : m.stations)
    out << "sta " << sta.mac.to_string() << ' ' << sta.ap_bssid.to_string()
        << ' ' << sta.join_s << '\n';
  return out.str();
}

inline Manifest parse_manifest(std::string_view text) {
  Manifest m;
  size_t ln = 0;
  size_t pos = 0;
  bool header_seen = false;
  while (pos <= text.size() && pos != std::string_view::npos) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    bool last = end == text.size();
    pos = end + 1;
    ++ln;
    auto toks = detail::split_ws(raw);
    if (!toks.empty()) {
      if (!header_seen) {
        if (toks[0] != "rids_dataset")
          throw ConfigError(ln, "not a dataset manifest");
        header_seen = true;
      } else if (toks[0] == "seed") {
        m.seed = static_cast<uint64_t>(detail::cfg_number(toks.at(1), ln));
      } else if (toks[0] == "duration_s") {
        m.duration_s = detail::cfg_number(toks.at(1), ln);
      } else if (toks[0] == "frames") {
        m.frames = static_cast<uint64_t>(detail::cfg_number(toks.at(1), ln));
      } else if (toks[0] == "label") {
        auto label = label_from(toks.at(1));
        if (!label) throw ConfigError(ln, "unknown label " + toks[1]);
        m.label_counts[static_cast<size_t>(*label)] =
            static_cast<uint64_t>(detail::cfg_number(toks.at(2), ln));
      } else if (toks[0] == "ap") {
        ApProfile ap;
        ap.bssid = detail::cfg_mac(toks.at(1), ln);
        ap.ssid = toks.at(2);
        ap.suite = detail::cfg_suite(toks.at(3), ln);
        ap.beacon_interval_tu =
            static_cast<uint16_t>(detail::cfg_number(toks.at(4), ln));
        if (toks.size() > 5 && toks[5] == "mfp") ap.mfp_enabled = true;
        m.aps.push_back(std::move(ap));
      } else if (toks[0] == "sta") {
        StationCfg sta;
        sta.mac = detail::cfg_mac(toks.at(1), ln);
        sta.ap_bssid = detail::cfg_mac(toks.at(2), ln);
        if (toks.size() > 3) sta.join_s = detail::cfg_number(toks[3], ln);
        m.stations.push_back(sta);
      } else {
        throw ConfigError(ln, "unknown manifest key '" + toks[0] + "'");
      }
    }
    if (last) break;
  }
  if (!header_seen) throw ConfigError(1, "empty manifest");
  return m;
}

inline void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("short write to " + path);
}

inline void write_binary_file(const std::string& path,
                              std::span<const uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("short write to " + path);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::vector<uint8_t> read_binary_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return std::vector<uint8_t>((std::istreambuf_iterator<char>(in)),
                              std::istreambuf_iterator<char>());
}

inline Manifest manifest_for(const ScenarioConfig& cfg,
                             std::span<const Frame> frames) {
  Manifest m;
  m.seed = cfg.seed;
  m.duration_s = cfg.duration_s;
  m.frames = frames.size();
  for (const Frame& f : frames)
    ++m.label_counts[static_cast<size_t>(f.label)];
  m.aps = cfg.aps;
  m.stations = cfg.stations;
  return m;
}

// Writes dataset.bin, dataset.csv and manifest.txt under dir (created by the
// caller). Returns the manifest.
inline Manifest write_dataset(const std::string& dir,
                              const ScenarioConfig& cfg,
                              std::span<const Frame> frames) {
  Manifest m = manifest_for(cfg, frames);
  write_binary_file(dir + "/dataset.bin", encode_stream(frames));
  write_text_file(dir + "/dataset.csv", frames_to_csv(frames));
  write_text_file(dir + "/manifest.txt", format_manifest(m));
  return m;
}

struct Dataset {
  std::vector<Frame> frames;
  Manifest manifest;
};

inline Dataset load_dataset(const std::string& dir) {
  Dataset d;
  d.manifest = parse_manifest(read_text_file(dir + "/manifest.txt"));
  d.frames = decode_stream(read_binary_file(dir + "/dataset.bin"));
  return d;
}

}  // namespace rids
