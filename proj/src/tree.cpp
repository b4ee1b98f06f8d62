#include "stochrank/tree.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace stochrank {

namespace {

constexpr std::uint32_t kMagic = 0x4b4e5253;  // "SRNK"
constexpr std::uint32_t kVersion = 1;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

FeatureBinarization compute_borders(ConstMatrixRef features, Index max_borders) {
  require(max_borders >= 1 && max_borders <= 65535,
          "compute_borders: max_borders out of range");
  const Index docs = features.rows();
  const Index nf = features.cols();
  FeatureBinarization out;
  out.borders.resize(static_cast<std::size_t>(nf));
  std::vector<double> values(static_cast<std::size_t>(docs));
  for (Index f = 0; f < nf; ++f) {
    for (Index i = 0; i < docs; ++i) values[static_cast<std::size_t>(i)] = features(i, f);
    std::sort(values.begin(), values.end());
    auto& borders = out.borders[static_cast<std::size_t>(f)];
    const Index distinct =
        static_cast<Index>(std::unique(values.begin(), values.end()) - values.begin());
    if (distinct <= 1) continue;
    if (distinct - 1 <= max_borders) {
      // values[0..distinct) now hold the distinct sorted values.
      borders.reserve(static_cast<std::size_t>(distinct) - 1);
      for (Index t = 0; t + 1 < distinct; ++t) {
        borders.push_back(0.5 * (values[static_cast<std::size_t>(t)] +
                                 values[static_cast<std::size_t>(t) + 1]));
      }
    } else {
      // Equal-population cuts over the full multiset.
      for (Index i = 0; i < docs; ++i) values[static_cast<std::size_t>(i)] = features(i, f);
      std::sort(values.begin(), values.end());
      borders.reserve(static_cast<std::size_t>(max_borders));
      const Index buckets = max_borders + 1;
      for (Index b = 1; b <= max_borders; ++b) {
        const Index cut = (b * docs) / buckets;
        const double lo = values[static_cast<std::size_t>(cut) - 1];
        const double hi = values[static_cast<std::size_t>(cut)];
        if (hi <= lo) continue;
        const double border = 0.5 * (lo + hi);
        if (!borders.empty() && border <= borders.back()) continue;
        borders.push_back(border);
      }
    }
  }
  return out;
}

BinnedMatrix bin_features(const FeatureBinarization& bins, ConstMatrixRef features) {
  require(bins.num_features() == features.cols(),
          "bin_features: feature count mismatch");
  const Index docs = features.rows();
  const Index nf = features.cols();
  BinnedMatrix out(static_cast<std::size_t>(docs),
                   std::vector<std::uint16_t>(static_cast<std::size_t>(nf)));
  for (Index i = 0; i < docs; ++i) {
    for (Index f = 0; f < nf; ++f) {
      const auto& borders = bins.borders[static_cast<std::size_t>(f)];
      const double v = features(i, f);
      const auto it = std::lower_bound(borders.begin(), borders.end(), v);
      // Number of borders strictly below v; a border equal to v counts as
      // not-below, so equal values go left.
      out[static_cast<std::size_t>(i)][static_cast<std::size_t>(f)] =
          static_cast<std::uint16_t>(it - borders.begin());
    }
  }
  return out;
}

ObliviousTree fit_oblivious_tree(const BinnedMatrix& binned,
                                 const FeatureBinarization& bins,
                                 ConstVectorRef targets, Index depth,
                                 std::vector<Index>* leaf_of) {
  const Index docs = static_cast<Index>(binned.size());
  require(docs == targets.size(), "fit_oblivious_tree: target count mismatch");
  require(depth >= 1 && depth <= 16, "fit_oblivious_tree: depth out of range");
  const Index nf = bins.num_features();

  ObliviousTree tree;
  std::vector<Index> leaf(static_cast<std::size_t>(docs), 0);

  for (Index level = 0; level < depth; ++level) {
    const Index leaves = Index{1} << level;
    double best_score = -1.0;
    Index best_feature = -1;
    Index best_border = -1;

    std::vector<double> sums;
    std::vector<Index> counts;
    for (Index f = 0; f < nf; ++f) {
      const auto& borders = bins.borders[static_cast<std::size_t>(f)];
      const Index nbins = static_cast<Index>(borders.size()) + 1;
      if (nbins == 1) continue;
      sums.assign(static_cast<std::size_t>(leaves * nbins), 0.0);
      counts.assign(static_cast<std::size_t>(leaves * nbins), 0);
      for (Index i = 0; i < docs; ++i) {
        const Index cell =
            leaf[static_cast<std::size_t>(i)] * nbins +
            binned[static_cast<std::size_t>(i)][static_cast<std::size_t>(f)];
        sums[static_cast<std::size_t>(cell)] += targets[i];
        counts[static_cast<std::size_t>(cell)] += 1;
      }
      // Walk borders left to right keeping running left-side aggregates; the
      // score of a split is sum over leaves of sum^2 / count on both sides
      // (minimizing squared error is maximizing that).
      std::vector<double> left_sum(static_cast<std::size_t>(leaves), 0.0);
      std::vector<Index> left_cnt(static_cast<std::size_t>(leaves), 0);
      std::vector<double> total_sum(static_cast<std::size_t>(leaves), 0.0);
      std::vector<Index> total_cnt(static_cast<std::size_t>(leaves), 0);
      for (Index l = 0; l < leaves; ++l) {
        for (Index b = 0; b < nbins; ++b) {
          total_sum[static_cast<std::size_t>(l)] +=
              sums[static_cast<std::size_t>(l * nbins + b)];
          total_cnt[static_cast<std::size_t>(l)] +=
              counts[static_cast<std::size_t>(l * nbins + b)];
        }
      }
      for (Index b = 0; b + 1 < nbins; ++b) {
        double score = 0.0;
        for (Index l = 0; l < leaves; ++l) {
          left_sum[static_cast<std::size_t>(l)] +=
              sums[static_cast<std::size_t>(l * nbins + b)];
          left_cnt[static_cast<std::size_t>(l)] +=
              counts[static_cast<std::size_t>(l * nbins + b)];
          const double ls = left_sum[static_cast<std::size_t>(l)];
          const Index lc = left_cnt[static_cast<std::size_t>(l)];
          const double rs = total_sum[static_cast<std::size_t>(l)] - ls;
          const Index rc = total_cnt[static_cast<std::size_t>(l)] - lc;
          if (lc > 0) score += ls * ls / static_cast<double>(lc);
          if (rc > 0) score += rs * rs / static_cast<double>(rc);
        }
        if (score > best_score) {
          best_score = score;
          best_feature = f;
          best_border = b;
        }
      }
    }

    if (best_feature < 0) break;  // no splittable feature at all
    const double border_value =
        bins.borders[static_cast<std::size_t>(best_feature)]
                    [static_cast<std::size_t>(best_border)];
    tree.splits.push_back({best_feature, border_value});
    for (Index i = 0; i < docs; ++i) {
      const bool right =
          binned[static_cast<std::size_t>(i)][static_cast<std::size_t>(best_feature)] >
          best_border;
      leaf[static_cast<std::size_t>(i)] =
          (leaf[static_cast<std::size_t>(i)] << 1) | (right ? 1 : 0);
    }
  }

  const Index n_leaves = Index{1} << static_cast<Index>(tree.splits.size());
  Vector sums = Vector::Zero(n_leaves);
  std::vector<Index> counts(static_cast<std::size_t>(n_leaves), 0);
  for (Index i = 0; i < docs; ++i) {
    sums[leaf[static_cast<std::size_t>(i)]] += targets[i];
    counts[static_cast<std::size_t>(leaf[static_cast<std::size_t>(i)])] += 1;
  }
  tree.leaf_values = Vector::Zero(n_leaves);
  for (Index l = 0; l < n_leaves; ++l) {
    if (counts[static_cast<std::size_t>(l)] > 0) {
      tree.leaf_values[l] = sums[l] / static_cast<double>(counts[static_cast<std::size_t>(l)]);
    }
  }
  if (leaf_of != nullptr) *leaf_of = std::move(leaf);
  return tree;
}

Index tree_leaf_index(const ObliviousTree& tree, ConstVectorRef features_row) {
  Index leaf = 0;
  for (const auto& split : tree.splits) {
    leaf = (leaf << 1) | (features_row[split.feature] > split.border ? 1 : 0);
  }
  return leaf;
}

double tree_value(const ObliviousTree& tree, ConstVectorRef features_row) {
  return tree.leaf_values[tree_leaf_index(tree, features_row)];
}

double predict_one(const Ensemble& model, ConstVectorRef features_row) {
  require(features_row.size() == model.num_features,
          "predict: feature count mismatch");
  double score = 0.0;
  for (const auto& scaled : model.trees) {
    score += scaled.scale * tree_value(scaled.tree, features_row);
  }
  return score;
}

Vector predict(const Ensemble& model, ConstMatrixRef features) {
  require(features.cols() == model.num_features, "predict: feature count mismatch");
  Vector out(features.rows());
  for (Index i = 0; i < features.rows(); ++i) {
    out[i] = predict_one(model, features.row(i));
  }
  return out;
}

namespace {

template <typename T>
void write_pod(std::ostream& os, const T& value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
  T value{};
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!is) throw std::runtime_error("model file: truncated");
  return value;
}

}  // namespace

void save_ensemble(const Ensemble& model, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open model file for writing: " + path);
  write_pod(os, kMagic);
  write_pod(os, kVersion);
  write_pod<std::int64_t>(os, model.num_features);
  write_pod<std::int64_t>(os, model.binarization.num_features());
  for (const auto& borders : model.binarization.borders) {
    write_pod<std::int64_t>(os, static_cast<std::int64_t>(borders.size()));
    for (double b : borders) write_pod(os, b);
  }
  write_pod<std::int64_t>(os, static_cast<std::int64_t>(model.trees.size()));
  for (const auto& scaled : model.trees) {
    write_pod<std::int64_t>(os, static_cast<std::int64_t>(scaled.tree.splits.size()));
    for (const auto& split : scaled.tree.splits) {
      write_pod<std::int64_t>(os, split.feature);
      write_pod(os, split.border);
    }
    for (Index l = 0; l < scaled.tree.leaf_values.size(); ++l) {
      write_pod(os, scaled.tree.leaf_values[l]);
    }
    write_pod(os, scaled.scale);
  }
  if (!os) throw std::runtime_error("model file: write failed: " + path);
}

Ensemble load_ensemble(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open model file: " + path);
  if (read_pod<std::uint32_t>(is) != kMagic) {
    throw std::runtime_error("model file: bad magic: " + path);
  }
  if (read_pod<std::uint32_t>(is) != kVersion) {
    throw std::runtime_error("model file: unsupported version: " + path);
  }
  Ensemble model;
  model.num_features = read_pod<std::int64_t>(is);
  const auto nf = read_pod<std::int64_t>(is);
  model.binarization.borders.resize(static_cast<std::size_t>(nf));
  for (auto& borders : model.binarization.borders) {
    const auto count = read_pod<std::int64_t>(is);
    borders.resize(static_cast<std::size_t>(count));
    for (auto& b : borders) b = read_pod<double>(is);
  }
  const auto n_trees = read_pod<std::int64_t>(is);
  model.trees.resize(static_cast<std::size_t>(n_trees));
  for (auto& scaled : model.trees) {
    const auto depth = read_pod<std::int64_t>(is);
    scaled.tree.splits.resize(static_cast<std::size_t>(depth));
    for (auto& split : scaled.tree.splits) {
      split.feature = read_pod<std::int64_t>(is);
      split.border = read_pod<double>(is);
    }
    scaled.tree.leaf_values.resize(Index{1} << depth);
    for (Index l = 0; l < scaled.tree.leaf_values.size(); ++l) {
      scaled.tree.leaf_values[l] = read_pod<double>(is);
    }
    scaled.scale = read_pod<double>(is);
  }
  return model;
}

}  // namespace stochrank
