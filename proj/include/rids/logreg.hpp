#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "rids/features.hpp"
#include "rids/tree.hpp"  // TrainMeta

namespace rids {

struct LogRegParams {
  size_t epochs = 500;
  double learning_rate = 0.1;
  uint64_t seed = 0;
};

// Multiclass softmax regression on standardized features, trained with
// full-batch gradient descent from zero-initialized parameters.
struct LogRegModel {
  size_t n_classes = kAttackLabelCount;
  size_t n_features = kFeatureCount;
  std::vector<double> weights;  // n_classes x n_features, row major
  std::vector<double> bias;     // n_classes
  std::vector<double> mean;     // per-feature standardization
  std::vector<double> stddev;   // zero variance clamps to 1
  TrainMeta meta;

  AttackLabel predict(const FeatureVector& v) const {
    size_t best = 0;
    double best_score = score(0, v);
    for (size_t c = 1; c < n_classes; ++c) {
      double s = score(c, v);
      if (s > best_score) {
        best_score = s;
        best = c;
      }
    }
    return static_cast<AttackLabel>(best);
  }

  double score(size_t cls, const FeatureVector& v) const {
    double s = bias[cls];
    for (size_t f = 0; f < n_features; ++f)
      s += weights[cls * n_features + f] * (v[f] - mean[f]) / stddev[f];
    return s;
  }

  bool operator==(const LogRegModel&) const = default;
};

namespace logreg_detail {

// Mean cross-entropy and its gradients over standardized samples. Kept free
// of the model type so tests can probe it with finite differences.
inline double loss_and_grad(std::span<const double> weights,
                            std::span<const double> bias,
                            std::span<const FeatureVector> z,
                            std::span<const uint8_t> labels, size_t n_classes,
                            std::vector<double>* grad_w,
                            std::vector<double>* grad_b) {
  const size_t n = z.size();
  const size_t d = kFeatureCount;
  if (grad_w) grad_w->assign(weights.size(), 0.0);
  if (grad_b) grad_b->assign(bias.size(), 0.0);
  double loss = 0;
  std::vector<double> logits(n_classes);
  for (size_t i = 0; i < n; ++i) {
    double max_logit = -1e300;
    for (size_t c = 0; c < n_classes; ++c) {
      double s = bias[c];
      for (size_t f = 0; f < d; ++f) s += weights[c * d + f] * z[i][f];
      logits[c] = s;
      max_logit = std::max(max_logit, s);
    }
    double denom = 0;
    for (size_t c = 0; c < n_classes; ++c) {
      logits[c] = std::exp(logits[c] - max_logit);
      denom += logits[c];
    }
    for (size_t c = 0; c < n_classes; ++c) {
      const double p = logits[c] / denom;
      const double indicator = labels[i] == c ? 1.0 : 0.0;
      if (c == labels[i]) loss -= std::log(std::max(p, 1e-300));
      if (grad_w || grad_b) {
        const double g = (p - indicator) / static_cast<double>(n);
        if (grad_b) (*grad_b)[c] += g;
        if (grad_w)
          for (size_t f = 0; f < d; ++f) (*grad_w)[c * d + f] += g * z[i][f];
      }
    }
  }
  return loss / static_cast<double>(n);
}

}  // namespace logreg_detail

inline LogRegModel fit_logreg(std::span<const LabeledVector> data,
                              LogRegParams params = {},
                              std::vector<double>* loss_history = nullptr) {
  if (data.empty()) throw std::invalid_argument("fit_logreg: empty data");
  const size_t n = data.size();
  const size_t d = kFeatureCount;
  const size_t k = kAttackLabelCount;

  LogRegModel model;
  model.meta = {params.seed, n, 0, 0};
  model.mean.assign(d, 0.0);
  model.stddev.assign(d, 0.0);
  for (const auto& s : data)
    for (size_t f = 0; f < d; ++f) model.mean[f] += s.features[f];
  for (size_t f = 0; f < d; ++f) model.mean[f] /= static_cast<double>(n);
  for (const auto& s : data)
    for (size_t f = 0; f < d; ++f) {
      double dlt = s.features[f] - model.mean[f];
      model.stddev[f] += dlt * dlt;
    }
  for (size_t f = 0; f < d; ++f) {
    model.stddev[f] = std::sqrt(model.stddev[f] / static_cast<double>(n));
    if (model.stddev[f] == 0.0) model.stddev[f] = 1.0;
  }

  std::vector<FeatureVector> z(n);
  std::vector<uint8_t> labels(n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t f = 0; f < d; ++f)
      z[i][f] = (data[i].features[f] - model.mean[f]) / model.stddev[f];
    labels[i] = static_cast<uint8_t>(data[i].label);
  }

  model.weights.assign(k * d, 0.0);
  model.bias.assign(k, 0.0);
  std::vector<double> grad_w, grad_b;
  for (size_t epoch = 0; epoch < params.epochs; ++epoch) {
    double loss = logreg_detail::loss_and_grad(model.weights, model.bias, z,
                                               labels, k, &grad_w, &grad_b);
    if (loss_history) loss_history->push_back(loss);
    for (size_t i = 0; i < model.weights.size(); ++i)
      model.weights[i] -= params.learning_rate * grad_w[i];
    for (size_t c = 0; c < k; ++c)
      model.bias[c] -= params.learning_rate * grad_b[c];
  }
  return model;
}

}  // namespace rids
