#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "rids/features.hpp"
#include "rids/frame.hpp"

namespace rids {

// Gini impurity 1 - sum(p_i^2) over the class distribution.
inline double gini(std::span<const uint64_t> counts) {
  uint64_t total = 0;
  for (uint64_t c : counts) total += c;
  if (total == 0) throw std::domain_error("gini of all-zero counts");
  double sum_sq = 0;
  for (uint64_t c : counts) {
    double p = static_cast<double>(c) / static_cast<double>(total);
    sum_sq += p * p;
  }
  return 1.0 - sum_sq;
}

struct TrainMeta {
  uint64_t seed = 0;
  uint64_t n_samples = 0;
  uint32_t max_depth = 0;
  uint32_t min_samples_leaf = 0;
};

struct TreeNode {
  // left == 0 marks a leaf; node 0 is the root and never a child.
  uint16_t feature = 0;
  double threshold = 0;
  uint32_t left = 0;
  uint32_t right = 0;
  std::array<uint32_t, kAttackLabelCount> counts{};

  bool is_leaf() const { return left == 0; }
  bool operator==(const TreeNode&) const = default;
};

struct TreeParams {
  uint32_t max_depth = 12;
  uint32_t min_samples_leaf = 2;
  uint64_t seed = 0;
};

struct TreeModel {
  std::vector<TreeNode> nodes;
  uint32_t max_depth_used = 0;
  TrainMeta meta;

  AttackLabel predict(const FeatureVector& v) const {
    uint32_t idx = 0;
    while (!nodes[idx].is_leaf())
      idx = v[nodes[idx].feature] <= nodes[idx].threshold ? nodes[idx].left
                                                          : nodes[idx].right;
    return leaf_class(nodes[idx]);
  }

  // Normalized class distribution at a leaf; sums to 1.
  static std::array<double, kAttackLabelCount> leaf_distribution(
      const TreeNode& leaf) {
    uint64_t total = 0;
    for (uint32_t c : leaf.counts) total += c;
    std::array<double, kAttackLabelCount> dist{};
    if (total == 0) return dist;
    for (int i = 0; i < kAttackLabelCount; ++i)
      dist[static_cast<size_t>(i)] =
          static_cast<double>(leaf.counts[static_cast<size_t>(i)]) /
          static_cast<double>(total);
    return dist;
  }

  static AttackLabel leaf_class(const TreeNode& leaf) {
    size_t best = 0;
    for (size_t c = 1; c < kAttackLabelCount; ++c)
      if (leaf.counts[c] > leaf.counts[best]) best = c;  // ties keep lower code
    return static_cast<AttackLabel>(best);
  }

  bool operator==(const TreeModel&) const = default;
};

namespace tree_detail {

// Candidate features per split, ascending. The identity sampler gives plain
// CART; the forest narrows it to a random subset.
using FeatureSampler = std::function<std::vector<uint16_t>()>;

inline std::vector<uint16_t> all_features() {
  std::vector<uint16_t> f(kFeatureCount);
  std::iota(f.begin(), f.end(), 0);
  return f;
}

struct Split {
  bool found = false;
  uint16_t feature = 0;
  double threshold = 0;
  double weighted_impurity = 0;
};

// Greedy best split by weighted child gini. Thresholds are midpoints of
// adjacent distinct values; ties resolve to the lowest feature index, then
// the lowest threshold, by strict-improvement scanning in that order.
inline Split best_split(std::span<const LabeledVector> data,
                        std::span<const uint32_t> indices,
                        std::span<const uint16_t> features,
                        uint32_t min_samples_leaf) {
  const size_t n = indices.size();
  Split best;
  std::vector<std::pair<double, uint8_t>> vals(n);
  for (uint16_t f : features) {
    for (size_t i = 0; i < n; ++i) {
      const LabeledVector& s = data[indices[i]];
      vals[i] = {s.features[f], static_cast<uint8_t>(s.label)};
    }
    std::sort(vals.begin(), vals.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    std::array<uint64_t, kAttackLabelCount> left{};
    std::array<uint64_t, kAttackLabelCount> right{};
    for (const auto& [x, y] : vals) ++right[y];

    for (size_t i = 1; i < n; ++i) {
      const auto& [xv, yv] = vals[i - 1];
      ++left[yv];
      --right[yv];
      if (vals[i].first == xv) continue;
      const size_t nl = i;
      const size_t nr = n - i;
      if (nl < min_samples_leaf || nr < min_samples_leaf) continue;
      const double w =
          (static_cast<double>(nl) * gini(left) +
           static_cast<double>(nr) * gini(right)) /
          static_cast<double>(n);
      if (!best.found || w < best.weighted_impurity) {
        best.found = true;
        best.feature = f;
        best.threshold = (xv + vals[i].first) / 2.0;
        best.weighted_impurity = w;
      }
    }
  }
  return best;
}

inline TreeModel fit_tree_impl(std::span<const LabeledVector> data,
                               std::span<const uint32_t> root_indices,
                               const TreeParams& params,
                               const FeatureSampler& sample_features) {
  if (root_indices.empty()) throw std::invalid_argument("fit_tree: empty data");
  TreeModel model;
  model.meta = {params.seed, root_indices.size(), params.max_depth,
                params.min_samples_leaf};

  struct Job {
    std::vector<uint32_t> indices;
    uint32_t node;
    uint32_t depth;
  };
  model.nodes.emplace_back();
  std::vector<Job> stack;
  stack.push_back({{root_indices.begin(), root_indices.end()}, 0, 0});

  while (!stack.empty()) {
    Job job = std::move(stack.back());
    stack.pop_back();
    TreeNode& node = model.nodes[job.node];
    model.max_depth_used = std::max(model.max_depth_used, job.depth);

    std::array<uint64_t, kAttackLabelCount> counts{};
    for (uint32_t i : job.indices) ++counts[static_cast<size_t>(data[i].label)];
    for (size_t c = 0; c < kAttackLabelCount; ++c)
      node.counts[c] = static_cast<uint32_t>(counts[c]);

    const double node_gini = gini(counts);
    const bool pure = node_gini == 0.0;
    if (pure || job.depth >= params.max_depth ||
        job.indices.size() < 2 * params.min_samples_leaf)
      continue;  // leaf

    auto split = best_split(data, job.indices, sample_features(),
                            params.min_samples_leaf);
    if (!split.found || split.weighted_impurity >= node_gini) continue;

    std::vector<uint32_t> left_idx, right_idx;
    left_idx.reserve(job.indices.size());
    for (uint32_t i : job.indices) {
      if (data[i].features[split.feature] <= split.threshold)
        left_idx.push_back(i);
      else
        right_idx.push_back(i);
    }

    const auto left_node = static_cast<uint32_t>(model.nodes.size());
    model.nodes.emplace_back();
    model.nodes.emplace_back();
    TreeNode& parent = model.nodes[job.node];  // emplace may reallocate
    parent.feature = split.feature;
    parent.threshold = split.threshold;
    parent.left = left_node;
    parent.right = left_node + 1;

    stack.push_back({std::move(right_idx), left_node + 1, job.depth + 1});
    stack.push_back({std::move(left_idx), left_node, job.depth + 1});
  }
  return model;
}

}  // namespace tree_detail

inline TreeModel fit_tree(std::span<const LabeledVector> data,
                          TreeParams params = {}) {
  std::vector<uint32_t> indices(data.size());
  std::iota(indices.begin(), indices.end(), 0);
  return tree_detail::fit_tree_impl(data, indices, params,
                                    tree_detail::all_features);
}

}  // namespace rids
