#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stochrank/dataset.hpp"
#include "stochrank/estimators.hpp"
#include "stochrank/metric.hpp"
#include "stochrank/tree.hpp"
#include "stochrank/types.hpp"

namespace stochrank {

// sgb: plain gradient boosting (no shrink, no injected noise).
// sglb: Langevin boosting; each iteration shrinks the model by
//       (1 - model_shrink_rate * learning_rate) and adds Gaussian noise of
//       variance 2 / (diffusion_temperature * learning_rate) to the fit
//       targets, which makes the ensemble sample from a tempered posterior
//       instead of descending into the nearest basin.
enum class BoostMode { sgb, sglb };

enum class ModelSelect { final_iterate, best_valid };

struct TrainConfig {
  Index iterations = 1000;
  double learning_rate = 0.1;
  Index depth = 6;
  double model_shrink_rate = 1e-3;       // sglb only
  double diffusion_temperature = 1e8;    // sglb only; +inf degenerates to sgb
  BoostMode mode = BoostMode::sglb;
  EstimatorConfig estimator;
  MetricSpec metric;
  std::uint64_t seed = 0;
  Index max_borders = 254;
  ModelSelect select = ModelSelect::final_iterate;
  Index threads = 0;  // 0: STOCHRANK_THREADS or hardware
};

struct IterationRecord {
  Index iteration = 0;
  double train_metric = 0.0;
  std::optional<double> valid_metric;
  double wall_ms = 0.0;
};

struct TrainResult {
  Ensemble model;
  std::vector<IterationRecord> log;
  Index best_iteration = -1;  // by validation metric; -1 when no valid set
};

// Incremental trainer; step() is one boosting iteration. Kept public so a
// single iteration can be pinned against an independently scripted step.
class Booster {
 public:
  Booster(TrainConfig config, const RankingDataset& train,
          const RankingDataset* valid);

  IterationRecord step();
  Index iteration() const { return iteration_; }
  const Vector& train_scores() const { return train_scores_; }
  const Ensemble& model() const { return model_; }
  double train_metric() const;

  TrainResult finish();

 private:
  TrainConfig config_;
  const RankingDataset& train_;
  const RankingDataset* valid_;
  BinnedMatrix binned_;
  Ensemble model_;
  Vector train_scores_;
  Vector valid_scores_;
  Index iteration_ = 0;
  std::vector<IterationRecord> log_;
  Index best_iteration_ = -1;
  double best_valid_ = 0.0;
  std::vector<double> best_scales_;  // model scales at the best iteration

  double mean_metric(const Vector& scores, const RankingDataset& data) const;
};

TrainResult train(const TrainConfig& config, const RankingDataset& train_data,
                  const RankingDataset* valid_data = nullptr);

// Mean metric over the dataset's queries at the model's scores.
double evaluate(const Ensemble& model, const RankingDataset& data,
                const MetricSpec& metric);
double evaluate_scores(const Vector& scores, const RankingDataset& data,
                       const MetricSpec& metric);

// Per-query metric values (paired-test input).
Vector per_query_metric(const Vector& scores, const RankingDataset& data,
                        const MetricSpec& metric);

}  // namespace stochrank
