#include "stochrank/estimators.hpp"

#include <cmath>
#include <stdexcept>

#include "stochrank/ranked_state.hpp"

namespace stochrank {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// Fixed-order metric: the only breaking point of coordinate j is zero.
// jump_j(0) is the value with document j included minus excluded, holding the
// other documents at their noisy inclusion pattern.
Vector dcg_rr_loss_gradient(const SmoothingSpec& smoothing, ConstVectorRef z,
                            ConstVectorRef relevance, Rng& rng) {
  const Index n = z.size();
  const double sigma = smoothing.sigma;
  const Vector eps = sample_noise(smoothing, relevance, rng);
  const Vector noisy = z + sigma * eps;
  Vector g = Vector::Zero(n);
  for (Index j = 0; j < n; ++j) {
    double rank = 0.0;
    double delta = 0.0;
    for (Index i = 0; i < n; ++i) {
      if (i == j) {
        delta += relevance[j] / (rank + 1.0);
        continue;
      }
      if (noisy[i] > 0.0) {
        rank += 1.0;
        if (i > j) {
          // Including j pushes this document one rank deeper.
          delta += relevance[i] * (1.0 / (rank + 1.0) - 1.0 / rank);
        }
      }
    }
    const double density =
        conditional_density(smoothing, relevance[j], (0.0 - z[j]) / sigma);
    g[j] = -delta * density / sigma;
  }
  return g;
}

Vector ccs_loss_gradient(const MetricSpec& metric, const SmoothingSpec& smoothing,
                         ConstVectorRef z, ConstVectorRef relevance, Rng& rng) {
  const Index n = z.size();
  const double sigma = smoothing.sigma;
  if (metric.kind == MetricKind::dcg_rr) {
    return dcg_rr_loss_gradient(smoothing, z, relevance, rng);
  }
  const Vector eps = sample_noise(smoothing, relevance, rng);
  const RankedState state = build_ranked_state(metric, z + sigma * eps, relevance);
  Vector g = Vector::Zero(n);
  if (state.constant || n < 2) return g;
  // Jumps are structurally zero once the crossing happens entirely below the
  // truncation boundary.
  const Index last_break = std::min<Index>(n - 1, state.k);
  for (Index j = 0; j < n; ++j) {
    const Index pos_j = state.position[static_cast<std::size_t>(j)];
    double acc = 0.0;
    for (Index s = 0; s <= last_break; ++s) {
      if (s == pos_j) continue;
      const double delta = jump_at(state, pos_j, s);
      if (delta == 0.0) continue;
      const double t = (state.noisy[s] - z[j]) / sigma;
      acc += delta * conditional_density(smoothing, relevance[j], t);
    }
    g[j] = -acc / sigma;
  }
  return g;
}

}  // namespace

Vector center_scores(ConstVectorRef z) {
  return (z.array() - z.mean()).matrix();
}

GradientEstimate ccs_gradient(const MetricSpec& metric, const SmoothingSpec& smoothing,
                              ConstVectorRef z, ConstVectorRef relevance,
                              std::uint64_t stream_key) {
  require(z.size() == relevance.size(), "ccs_gradient: size mismatch");
  require(smoothing.sigma > 0.0, "ccs_gradient: sigma must be positive");
  Rng rng(stream_key);
  GradientEstimate out;
  out.g = ccs_loss_gradient(metric, smoothing, z, relevance, rng);
  out.kind = EstimatorKind::ccs;
  out.stream_key = stream_key;
  return out;
}

Vector sfa_project(ConstVectorRef g, ConstVectorRef z, double nu) {
  require(nu >= 0.0, "sfa_project: nu must be >= 0");
  const double norm = z.norm();
  if (norm == 0.0 && nu == 0.0) return g;
  const Vector u = z / (norm + nu);
  return g - g.dot(u) * u;
}

GradientEstimate reinforce_gradient(const MetricSpec& metric, ConstVectorRef z,
                                    ConstVectorRef relevance, double sigma,
                                    std::uint64_t stream_key) {
  require(z.size() == relevance.size(), "reinforce_gradient: size mismatch");
  require(sigma > 0.0, "reinforce_gradient: sigma must be positive");
  Rng rng(stream_key);
  Vector eps(z.size());
  for (Index j = 0; j < z.size(); ++j) eps[j] = rng.next_normal();
  const double base = eval_metric(metric, z, relevance);
  const double shifted = eval_metric(metric, z + sigma * eps, relevance);
  GradientEstimate out;
  // loss = -metric, so the score-function weight is -(shifted - base).
  out.g = (-(shifted - base) / sigma) * eps;
  out.kind = EstimatorKind::reinforce;
  out.stream_key = stream_key;
  return out;
}

GradientEstimate estimate_gradient(const EstimatorConfig& config,
                                   const MetricSpec& metric, ConstVectorRef z,
                                   ConstVectorRef relevance,
                                   std::uint64_t stream_key) {
  require(config.samples_per_estimate >= 1,
          "estimate_gradient: samples_per_estimate must be >= 1");
  Vector sum = Vector::Zero(z.size());
  for (Index m = 0; m < config.samples_per_estimate; ++m) {
    const std::uint64_t key =
        config.samples_per_estimate == 1
            ? stream_key
            : derive_stream(stream_key, StreamPurpose::estimator_probe,
                            static_cast<std::uint64_t>(m));
    if (config.kind == EstimatorKind::reinforce) {
      sum += reinforce_gradient(metric, z, relevance, config.smoothing.sigma, key).g;
    } else {
      sum += ccs_gradient(metric, config.smoothing, z, relevance, key).g;
    }
  }
  GradientEstimate out;
  out.g = sum / static_cast<double>(config.samples_per_estimate);
  out.kind = config.kind;
  out.stream_key = stream_key;
  if (config.kind == EstimatorKind::ccs_sfa) {
    out.g = sfa_project(out.g, z, config.nu);
  }
  return out;
}

}  // namespace stochrank
