#include "stochrank/metric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace stochrank {

namespace {

constexpr double kGradeScale = 16.0;  // 2^4, for grades in [0, 4]

bool is_integer_grade(double r) {
  const double rounded = std::round(r);
  return std::abs(r - rounded) < 1e-9 && rounded >= 0.0 && rounded <= 4.0;
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

Index effective_truncation(const MetricSpec& spec, Index n) {
  if (spec.kind == MetricKind::mrr || spec.kind == MetricKind::dcg_rr ||
      spec.truncation <= 0) {
    return n;
  }
  return std::min<Index>(spec.truncation, n);
}

Permutation worst_argsort(ConstVectorRef scores, ConstVectorRef relevance,
                          TiePolicy policy) {
  require(scores.size() == relevance.size(),
          "worst_argsort: scores and relevance sizes differ");
  Permutation order(static_cast<std::size_t>(scores.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    if (policy == TiePolicy::worst && relevance[a] != relevance[b]) {
      return relevance[a] < relevance[b];
    }
    return a < b;
  });
  return order;
}

Vector gain_map(ConstVectorRef relevance) {
  const Index n = relevance.size();
  bool unit_interval = true;
  for (Index i = 0; i < n; ++i) {
    require(std::isfinite(relevance[i]) && relevance[i] >= 0.0,
            "labels must be finite and non-negative");
    if (relevance[i] > 1.0) unit_interval = false;
  }
  if (unit_interval) return relevance;
  Vector gains(n);
  for (Index i = 0; i < n; ++i) {
    require(is_integer_grade(relevance[i]),
            "labels above 1 must be integer grades in [0, 4]");
    gains[i] = (std::exp2(std::round(relevance[i])) - 1.0) / kGradeScale;
  }
  return gains;
}

GainDiscount gmc_params(const MetricSpec& spec, ConstVectorRef relevance) {
  require(spec.kind != MetricKind::dcg_rr,
          "gmc_params: fixed-order metric has no product form");
  const Index n = relevance.size();
  require(n > 0, "gmc_params: empty query");
  const Index k = effective_truncation(spec, n);

  GainDiscount out;
  if (spec.kind == MetricKind::mrr) {
    for (Index i = 0; i < n; ++i) {
      require(relevance[i] == 0.0 || relevance[i] == 1.0,
              "mrr requires binary labels; binarize first");
    }
    out.gains = relevance;
  } else {
    out.gains = gain_map(relevance);
  }

  out.weights = Vector::Zero(n);
  switch (spec.kind) {
    case MetricKind::dcg:
      for (Index i = 0; i < k; ++i) {
        out.weights[i] = 1.0 / std::log2(static_cast<double>(i) + 2.0);
      }
      out.discounts = Vector::Ones(n);
      break;
    case MetricKind::ndcg: {
      Vector ideal = out.gains;
      std::sort(ideal.begin(), ideal.end(), std::greater<>());
      double max_dcg = 0.0;
      for (Index i = 0; i < k; ++i) {
        max_dcg += ideal[i] / std::log2(static_cast<double>(i) + 2.0);
      }
      if (max_dcg == 0.0) {
        // No relevant document: the ranking cannot matter. Fixed at 1 so a
        // fully unjudged query never drags the mean down.
        out.constant = true;
        out.constant_value = 1.0;
        out.gains.setZero();
        out.discounts = Vector::Ones(n);
        return out;
      }
      for (Index i = 0; i < k; ++i) {
        out.weights[i] = 1.0 / (max_dcg * std::log2(static_cast<double>(i) + 2.0));
      }
      out.discounts = Vector::Ones(n);
      break;
    }
    case MetricKind::err:
    case MetricKind::mrr:
      for (Index i = 0; i < k; ++i) {
        out.weights[i] = 1.0 / (static_cast<double>(i) + 1.0);
      }
      out.discounts = Vector::Ones(n) - out.gains;
      break;
    case MetricKind::dcg_rr:
      break;  // unreachable
  }
  return out;
}

double eval_metric(const MetricSpec& spec, ConstVectorRef scores,
                   ConstVectorRef relevance) {
  require(scores.size() == relevance.size(),
          "eval_metric: scores and relevance sizes differ");
  if (spec.kind == MetricKind::dcg_rr) return dcg_rr_eval(scores, relevance);

  const GainDiscount gd = gmc_params(spec, relevance);
  if (gd.constant) return gd.constant_value;

  const Permutation order = worst_argsort(scores, gd.gains, spec.tie_policy);
  const Index k = effective_truncation(spec, scores.size());
  double value = 0.0;
  double prefix = 1.0;
  for (Index i = 0; i < k; ++i) {
    const Index doc = order[static_cast<std::size_t>(i)];
    value += gd.weights[i] * gd.gains[doc] * prefix;
    prefix *= gd.discounts[doc];
  }
  return value;
}

double dcg_rr_eval(ConstVectorRef scores, ConstVectorRef relevance) {
  require(scores.size() == relevance.size(),
          "dcg_rr_eval: scores and relevance sizes differ");
  double value = 0.0;
  double rank = 0.0;
  for (Index i = 0; i < scores.size(); ++i) {
    if (scores[i] > 0.0) {
      rank += 1.0;
      value += relevance[i] / rank;
    }
  }
  return value;
}

}  // namespace stochrank
