#include "stochrank/booster.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "stochrank/threading.hpp"

namespace stochrank {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

Booster::Booster(TrainConfig config, const RankingDataset& train,
                 const RankingDataset* valid)
    : config_(std::move(config)), train_(train), valid_(valid) {
  require(config_.iterations >= 0, "train: iterations must be >= 0");
  require(config_.learning_rate > 0.0 && config_.learning_rate <= 1.0,
          "train: learning_rate must be in (0, 1]");
  require(config_.depth >= 1 && config_.depth <= 16,
          "train: depth must be in [1, 16]");
  require(config_.model_shrink_rate >= 0.0, "train: model_shrink_rate must be >= 0");
  require(config_.diffusion_temperature > 0.0,
          "train: diffusion_temperature must be > 0");
  require(train_.num_docs() > 0, "train: empty dataset");
  if (valid_ != nullptr) {
    require(valid_->num_features() == train_.num_features(),
            "train: validation feature count differs from train");
  }
  model_.num_features = train_.num_features();
  model_.binarization = compute_borders(train_.features, config_.max_borders);
  binned_ = bin_features(model_.binarization, train_.features);
  train_scores_ = Vector::Zero(train_.num_docs());
  if (valid_ != nullptr) valid_scores_ = Vector::Zero(valid_->num_docs());
}

double Booster::mean_metric(const Vector& scores, const RankingDataset& data) const {
  return evaluate_scores(scores, data, config_.metric);
}

double Booster::train_metric() const { return mean_metric(train_scores_, train_); }

IterationRecord Booster::step() {
  const auto started = std::chrono::steady_clock::now();
  const Index n_docs = train_.num_docs();
  const Index n_queries = train_.num_queries();
  const bool translation_invariant = config_.metric.kind != MetricKind::dcg_rr;

  Vector targets(n_docs);
  const Index threads = resolve_threads(config_.threads);
  parallel_for(n_queries, threads, [&](Index q) {
    const Index begin = train_.query_begin(q);
    const Index count = train_.query_size(q);
    Vector z = train_scores_.segment(begin, count);
    if (translation_invariant) z = center_scores(z);
    const std::uint64_t key =
        derive_stream(config_.seed, StreamPurpose::smoothing_noise,
                      static_cast<std::uint64_t>(iteration_),
                      static_cast<std::uint64_t>(q));
    const GradientEstimate est = estimate_gradient(
        config_.estimator, config_.metric, z, train_.labels.segment(begin, count), key);
    targets.segment(begin, count) = -est.g;
  });

  double shrink = 1.0;
  if (config_.mode == BoostMode::sglb) {
    shrink = 1.0 - config_.model_shrink_rate * config_.learning_rate;
    require(shrink > 0.0, "train: model_shrink_rate * learning_rate must be < 1");
    const double noise_sd = std::sqrt(
        2.0 / (config_.diffusion_temperature * config_.learning_rate));
    Rng rng(derive_stream(config_.seed, StreamPurpose::langevin_noise,
                          static_cast<std::uint64_t>(iteration_)));
    for (Index i = 0; i < n_docs; ++i) targets[i] += noise_sd * rng.next_normal();
  }

  if (!targets.allFinite()) {
    throw std::runtime_error(
        "train: non-finite fit targets at iteration " + std::to_string(iteration_) +
        "; check labels and smoothing parameters");
  }

  std::vector<Index> leaf_of;
  ObliviousTree tree = fit_oblivious_tree(binned_, model_.binarization, targets,
                                          config_.depth, &leaf_of);

  if (shrink != 1.0) {
    train_scores_ *= shrink;
    if (valid_ != nullptr) valid_scores_ *= shrink;
    for (auto& scaled : model_.trees) scaled.scale *= shrink;
  }
  for (Index i = 0; i < n_docs; ++i) {
    train_scores_[i] += config_.learning_rate *
                        tree.leaf_values[leaf_of[static_cast<std::size_t>(i)]];
  }
  if (valid_ != nullptr) {
    for (Index i = 0; i < valid_->num_docs(); ++i) {
      valid_scores_[i] += config_.learning_rate *
                          tree_value(tree, valid_->features.row(i));
    }
  }
  model_.trees.push_back({std::move(tree), config_.learning_rate});

  IterationRecord record;
  record.iteration = iteration_;
  record.train_metric = mean_metric(train_scores_, train_);
  if (valid_ != nullptr) {
    record.valid_metric = mean_metric(valid_scores_, *valid_);
    if (best_iteration_ < 0 || *record.valid_metric > best_valid_) {
      best_valid_ = *record.valid_metric;
      best_iteration_ = iteration_;
      best_scales_.resize(model_.trees.size());
      for (std::size_t t = 0; t < model_.trees.size(); ++t) {
        best_scales_[t] = model_.trees[t].scale;
      }
    }
  }
  record.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - started)
                       .count();
  log_.push_back(record);
  ++iteration_;
  return record;
}

TrainResult Booster::finish() {
  TrainResult result;
  if (config_.select == ModelSelect::best_valid && best_iteration_ >= 0) {
    result.model.num_features = model_.num_features;
    result.model.binarization = model_.binarization;
    result.model.trees.assign(model_.trees.begin(),
                              model_.trees.begin() + best_iteration_ + 1);
    for (std::size_t t = 0; t < result.model.trees.size(); ++t) {
      result.model.trees[t].scale = best_scales_[t];
    }
  } else {
    result.model = model_;
  }
  result.log = std::move(log_);
  result.best_iteration = best_iteration_;
  return result;
}

TrainResult train(const TrainConfig& config, const RankingDataset& train_data,
                  const RankingDataset* valid_data) {
  Booster booster(config, train_data, valid_data);
  for (Index t = 0; t < config.iterations; ++t) booster.step();
  return booster.finish();
}

Vector per_query_metric(const Vector& scores, const RankingDataset& data,
                        const MetricSpec& metric) {
  require(scores.size() == data.num_docs(), "per_query_metric: score count mismatch");
  Vector values(data.num_queries());
  for (Index q = 0; q < data.num_queries(); ++q) {
    values[q] = eval_metric(metric, scores.segment(data.query_begin(q), data.query_size(q)),
                            data.labels.segment(data.query_begin(q), data.query_size(q)));
  }
  return values;
}

double evaluate_scores(const Vector& scores, const RankingDataset& data,
                       const MetricSpec& metric) {
  return per_query_metric(scores, data, metric).mean();
}

double evaluate(const Ensemble& model, const RankingDataset& data,
                const MetricSpec& metric) {
  return evaluate_scores(predict(model, data.features), data, metric);
}

}  // namespace stochrank
