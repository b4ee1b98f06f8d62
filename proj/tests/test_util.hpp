#pragma once

// Test-side oracles: straight-line reimplementations of the metric
// definitions, kept deliberately independent of the library's evaluation
// path (no shared gain/weight code, brute force where the library is
// incremental).

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "stochrank/metric.hpp"
#include "stochrank/rng.hpp"
#include "stochrank/types.hpp"

namespace testutil {

using stochrank::Index;
using stochrank::MetricKind;
using stochrank::MetricSpec;
using stochrank::Rng;
using stochrank::Vector;

inline std::vector<double> oracle_gains(const Vector& labels) {
  bool unit = true;
  for (Index i = 0; i < labels.size(); ++i)
    if (labels[i] < 0.0 || labels[i] > 1.0) unit = false;
  std::vector<double> g(static_cast<std::size_t>(labels.size()));
  for (Index i = 0; i < labels.size(); ++i)
    g[static_cast<std::size_t>(i)] =
        unit ? labels[i] : (std::pow(2.0, labels[i]) - 1.0) / 16.0;
  return g;
}

// Metric value when documents are ranked in the explicit order given
// (order[i] = document at position i).
inline double oracle_value_for_order(const MetricSpec& spec,
                                     const std::vector<Index>& order,
                                     const Vector& labels) {
  const Index n = static_cast<Index>(order.size());
  const std::vector<double> gains = oracle_gains(labels);
  const bool truncated = spec.truncation > 0 && spec.kind != MetricKind::mrr;
  const Index k = truncated ? std::min(spec.truncation, n) : n;
  switch (spec.kind) {
    case MetricKind::dcg:
    case MetricKind::ndcg: {
      double dcg = 0.0;
      for (Index i = 0; i < k; ++i)
        dcg += gains[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] /
               std::log2(static_cast<double>(i) + 2.0);
      if (spec.kind == MetricKind::dcg) return dcg;
      std::vector<double> best = gains;
      std::sort(best.begin(), best.end(), std::greater<>());
      double ideal = 0.0;
      for (Index i = 0; i < k; ++i)
        ideal += best[static_cast<std::size_t>(i)] / std::log2(static_cast<double>(i) + 2.0);
      return ideal == 0.0 ? 1.0 : dcg / ideal;
    }
    case MetricKind::err:
    case MetricKind::mrr: {
      double value = 0.0, reach = 1.0;
      for (Index i = 0; i < k; ++i) {
        const double g = gains[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
        value += g * reach / (static_cast<double>(i) + 1.0);
        reach *= 1.0 - g;
      }
      return value;
    }
    case MetricKind::dcg_rr:
      throw std::logic_error("dcg_rr is not an ordering metric");
  }
  return 0.0;
}

// Calls fn(order) for every descending-score arrangement reachable by
// permuting documents inside tied-score blocks.
inline void for_each_tie_order(const Vector& scores,
                               const std::function<void(const std::vector<Index>&)>& fn) {
  const Index n = scores.size();
  std::vector<Index> docs(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) docs[static_cast<std::size_t>(i)] = i;
  std::stable_sort(docs.begin(), docs.end(),
                   [&](Index a, Index b) { return scores[a] > scores[b]; });

  std::vector<std::pair<std::size_t, std::size_t>> blocks;  // [begin, end)
  for (std::size_t b = 0; b < docs.size();) {
    std::size_t e = b + 1;
    while (e < docs.size() && scores[docs[e]] == scores[docs[b]]) ++e;
    blocks.emplace_back(b, e);
    b = e;
  }

  std::vector<std::vector<Index>> block_docs;
  for (const auto& [b, e] : blocks) {
    std::vector<Index> ids(docs.begin() + static_cast<std::ptrdiff_t>(b),
                           docs.begin() + static_cast<std::ptrdiff_t>(e));
    std::sort(ids.begin(), ids.end());
    block_docs.push_back(std::move(ids));
  }
  std::vector<Index> order(docs.size());
  const std::function<void(std::size_t)> visit = [&](std::size_t block) {
    if (block == blocks.size()) {
      fn(order);
      return;
    }
    std::vector<Index> ids = block_docs[block];
    do {
      std::copy(ids.begin(), ids.end(),
                order.begin() + static_cast<std::ptrdiff_t>(blocks[block].first));
      visit(block + 1);
    } while (std::next_permutation(ids.begin(), ids.end()));
  };
  visit(0);
}

// Minimum metric value over all joint permutations of tied-score blocks:
// the definition the library's tie policy must reproduce.
inline double oracle_worst_value(const MetricSpec& spec, const Vector& scores,
                                 const Vector& labels) {
  double worst = std::numeric_limits<double>::infinity();
  for_each_tie_order(scores, [&](const std::vector<Index>& order) {
    worst = std::min(worst, oracle_value_for_order(spec, order, labels));
  });
  return worst;
}

// Same minimum, with each arrangement priced by the library itself at
// strictly decreasing stand-in scores, so the comparison is bit-exact.
inline double library_worst_value(const MetricSpec& spec, const Vector& scores,
                                  const Vector& labels) {
  double worst = std::numeric_limits<double>::infinity();
  Vector strict(scores.size());
  for_each_tie_order(scores, [&](const std::vector<Index>& order) {
    for (std::size_t pos = 0; pos < order.size(); ++pos)
      strict[order[pos]] = -static_cast<double>(pos);
    worst = std::min(worst, stochrank::eval_metric(spec, strict, labels));
  });
  return worst;
}

inline Vector random_labels(MetricKind kind, Index n, Rng& rng) {
  Vector labels(n);
  for (Index i = 0; i < n; ++i) {
    switch (kind) {
      case MetricKind::dcg:
      case MetricKind::ndcg:
        labels[i] = std::floor(rng.next_uniform() * 5.0);
        break;
      case MetricKind::mrr:
        labels[i] = rng.next_uniform() < 0.5 ? 0.0 : 1.0;
        break;
      default:
        labels[i] = rng.next_uniform();
        break;
    }
  }
  return labels;
}

inline Vector random_scores(Index n, Rng& rng) {
  Vector z(n);
  for (Index i = 0; i < n; ++i) z[i] = rng.next_normal();
  return z;
}

// Scores drawn from a coarse grid, so ties are frequent and transformed
// copies stay exactly representable.
inline Vector grid_scores(Index n, Index levels, Rng& rng) {
  Vector z(n);
  for (Index i = 0; i < n; ++i)
    z[i] = std::floor(rng.next_uniform() * static_cast<double>(levels)) * 0.25 -
           static_cast<double>(levels) * 0.125;
  return z;
}

}  // namespace testutil
