#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stochrank/types.hpp"

namespace stochrank {

// Per-feature split thresholds, strictly increasing. A document goes right at
// border b iff value > b.
struct FeatureBinarization {
  std::vector<std::vector<double>> borders;

  Index num_features() const { return static_cast<Index>(borders.size()); }
};

// Bin index = number of borders strictly below the value, so bin > i is
// exactly "value > borders[i]".
using BinnedMatrix = std::vector<std::vector<std::uint16_t>>;  // per doc

// Symmetric decision table: every node at one depth shares the same split.
// A document's leaf index collects the per-level decisions, level 0 in the
// highest bit.
struct ObliviousTree {
  struct Split {
    Index feature = 0;
    double border = 0.0;
  };
  std::vector<Split> splits;
  Vector leaf_values;  // size 2^depth
};

struct ScaledTree {
  ObliviousTree tree;
  double scale = 1.0;
};

struct Ensemble {
  Index num_features = 0;
  FeatureBinarization binarization;
  std::vector<ScaledTree> trees;
};

// Quantile borders: midpoints between distinct adjacent values when there are
// few, otherwise max_borders cuts with bucket populations within one document
// of each other.
FeatureBinarization compute_borders(ConstMatrixRef features, Index max_borders);

BinnedMatrix bin_features(const FeatureBinarization& bins, ConstMatrixRef features);

// Greedy level-wise fit: at each depth, the single (feature, border) split
// minimizing total squared error across all current leaves; ties break toward
// the lowest feature index, then the lowest border. Leaf value is the mean
// target in the leaf, 0 for an empty leaf. `leaf_of` (optional) receives each
// document's final leaf index.
ObliviousTree fit_oblivious_tree(const BinnedMatrix& binned,
                                 const FeatureBinarization& bins,
                                 ConstVectorRef targets, Index depth,
                                 std::vector<Index>* leaf_of = nullptr);

Index tree_leaf_index(const ObliviousTree& tree, ConstVectorRef features_row);
double tree_value(const ObliviousTree& tree, ConstVectorRef features_row);

double predict_one(const Ensemble& model, ConstVectorRef features_row);
Vector predict(const Ensemble& model, ConstMatrixRef features);

// Versioned flat binary format; round trips are bit-exact.
void save_ensemble(const Ensemble& model, const std::string& path);
Ensemble load_ensemble(const std::string& path);

}  // namespace stochrank
