#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "rids/rng.hpp"
#include "rids/tree.hpp"

namespace rids {

struct ForestParams {
  size_t n_trees = 50;
  size_t features_per_split = 0;  // 0 = floor(sqrt(feature count))
  uint32_t max_depth = 12;
  uint32_t min_samples_leaf = 5;
  bool bootstrap = true;  // false = every tree sees the data unchanged
  uint64_t seed = 0;
};

struct ForestModel {
  std::vector<TreeModel> trees;
  uint16_t features_per_split = 0;
  uint8_t bootstrap = 1;
  uint64_t seed = 0;

  // Majority vote across trees; ties go to the lower class code.
  AttackLabel predict(const FeatureVector& v) const {
    std::array<uint32_t, kAttackLabelCount> votes{};
    for (const TreeModel& t : trees)
      ++votes[static_cast<size_t>(t.predict(v))];
    size_t best = 0;
    for (size_t c = 1; c < kAttackLabelCount; ++c)
      if (votes[c] > votes[best]) best = c;
    return static_cast<AttackLabel>(best);
  }

  bool operator==(const ForestModel&) const = default;
};

inline ForestModel fit_forest(std::span<const LabeledVector> data,
                              ForestParams params = {}) {
  if (data.empty()) throw std::invalid_argument("fit_forest: empty data");
  if (params.n_trees == 0) throw std::invalid_argument("fit_forest: n_trees");
  size_t mtry = params.features_per_split;
  if (mtry == 0)
    mtry = static_cast<size_t>(std::floor(std::sqrt(double(kFeatureCount))));
  mtry = std::min(mtry, kFeatureCount);

  ForestModel model;
  model.features_per_split = static_cast<uint16_t>(mtry);
  model.bootstrap = params.bootstrap ? 1 : 0;
  model.seed = params.seed;
  model.trees.reserve(params.n_trees);

  for (size_t t = 0; t < params.n_trees; ++t) {
    Rng rng(derive_seed(params.seed, 0xf0e0 + t));

    std::vector<uint32_t> indices(data.size());
    if (params.bootstrap) {
      for (auto& i : indices)
        i = static_cast<uint32_t>(rng.below(data.size()));
    } else {
      std::iota(indices.begin(), indices.end(), 0);
    }

    // Shared rng: each split draws a fresh subset, all from the tree's stream.
    auto sampler = [&rng, mtry]() {
      std::array<uint16_t, kFeatureCount> pool;
      std::iota(pool.begin(), pool.end(), 0);
      for (size_t i = 0; i < mtry; ++i) {
        size_t j = i + rng.below(kFeatureCount - i);
        std::swap(pool[i], pool[j]);
      }
      std::vector<uint16_t> chosen(pool.begin(),
                                   pool.begin() + static_cast<long>(mtry));
      std::sort(chosen.begin(), chosen.end());
      return chosen;
    };

    TreeParams tp{params.max_depth, params.min_samples_leaf,
                  derive_seed(params.seed, 0xf0e0 + t)};
    TreeModel tree = mtry == kFeatureCount
                         ? tree_detail::fit_tree_impl(
                               data, indices, tp, tree_detail::all_features)
                         : tree_detail::fit_tree_impl(data, indices, tp, sampler);
    model.trees.push_back(std::move(tree));
  }
  return model;
}

}  // namespace rids
