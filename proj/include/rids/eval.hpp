#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <span>
#include <string>

#include "rids/features.hpp"
#include "rids/frame.hpp"

namespace rids {

struct EvalReport {
  double accuracy = 0;
  std::array<std::array<uint64_t, kAttackLabelCount>, kAttackLabelCount>
      confusion{};  // [actual][predicted]
  double fpr = 0;   // Normal samples predicted as any attack
  double tpr = 0;   // attack samples predicted as any attack

  bool operator==(const EvalReport&) const = default;
};

template <typename Model>
EvalReport evaluate(const Model& model, std::span<const LabeledVector> test) {
  EvalReport r;
  uint64_t correct = 0;
  uint64_t normal_total = 0, normal_flagged = 0;
  uint64_t attack_total = 0, attack_flagged = 0;
  for (const LabeledVector& s : test) {
    const AttackLabel pred = model.predict(s.features);
    ++r.confusion[static_cast<size_t>(s.label)][static_cast<size_t>(pred)];
    if (pred == s.label) ++correct;
    if (s.label == AttackLabel::Normal) {
      ++normal_total;
      if (pred != AttackLabel::Normal) ++normal_flagged;
    } else {
      ++attack_total;
      if (pred != AttackLabel::Normal) ++attack_flagged;
    }
  }
  const uint64_t total = test.size();
  r.accuracy = total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
  r.fpr = normal_total ? static_cast<double>(normal_flagged) /
                             static_cast<double>(normal_total)
                       : 0.0;
  r.tpr = attack_total ? static_cast<double>(attack_flagged) /
                             static_cast<double>(attack_total)
                       : 1.0;
  return r;
}

inline std::string report_to_text(const EvalReport& r,
                                  const std::string& model_name) {
  char buf[160];
  std::string out;
  std::snprintf(buf, sizeof buf, "accuracy: %.6f\n\n", r.accuracy);
  out += buf;
  out += "confusion matrix (rows actual, columns predicted)\n";
  std::snprintf(buf, sizeof buf, "%-12s", "");
  out += buf;
  for (int c = 0; c < kAttackLabelCount; ++c) {
    std::snprintf(buf, sizeof buf, "%12s", kAttackLabelNames[c]);
    out += buf;
  }
  out += '\n';
  for (int a = 0; a < kAttackLabelCount; ++a) {
    std::snprintf(buf, sizeof buf, "%-12s", kAttackLabelNames[a]);
    out += buf;
    for (int p = 0; p < kAttackLabelCount; ++p) {
      std::snprintf(buf, sizeof buf, "%12llu",
                    static_cast<unsigned long long>(
                        r.confusion[static_cast<size_t>(a)][static_cast<size_t>(p)]));
      out += buf;
    }
    out += '\n';
  }
  out += '\n';
  std::snprintf(buf, sizeof buf, "%-8s%s\n", "Metric", model_name.c_str());
  out += buf;
  std::snprintf(buf, sizeof buf, "%-8s%.5f\n", "FPR", r.fpr);
  out += buf;
  std::snprintf(buf, sizeof buf, "%-8s%.5f\n", "TPR", r.tpr);
  out += buf;
  return out;
}

inline std::string report_to_csv(const EvalReport& r) {
  std::string out = "metric,value\n";
  char buf[96];
  std::snprintf(buf, sizeof buf, "accuracy,%.8f\nfpr,%.8f\ntpr,%.8f\n",
                r.accuracy, r.fpr, r.tpr);
  out += buf;
  for (int a = 0; a < kAttackLabelCount; ++a)
    for (int p = 0; p < kAttackLabelCount; ++p) {
      std::snprintf(buf, sizeof buf, "confusion.%s.%s,%llu\n",
                    kAttackLabelNames[a], kAttackLabelNames[p],
                    static_cast<unsigned long long>(
                        r.confusion[static_cast<size_t>(a)][static_cast<size_t>(p)]));
      out += buf;
    }
  return out;
}

}  // namespace rids
