#include "stochrank/cli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stochrank/dataset.hpp"
#include "stochrank/estimators.hpp"
#include "stochrank/ranked_state.hpp"
#include "stochrank/rng.hpp"
#include "stochrank/smoothing.hpp"
#include "stochrank/stats.hpp"
#include "stochrank/tree.hpp"

namespace stochrank::cli {
namespace {

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

[[noreturn]] void bad_value(const std::string& what, const std::string& value,
                            const std::string& expected) {
  throw std::invalid_argument("unknown " + what + " '" + value + "' (expected " +
                              expected + ")");
}

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

File open_out(const std::string& path) {
  File f(std::fopen(path.c_str(), "wb"));
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  return f;
}

void write_iteration_log(const std::vector<IterationRecord>& log,
                         const std::string& path) {
  File f = open_out(path);
  std::fprintf(f.get(), "iteration,train_metric,valid_metric,wall_ms\n");
  for (const IterationRecord& rec : log) {
    std::fprintf(f.get(), "%lld,%.17g,", static_cast<long long>(rec.iteration),
                 rec.train_metric);
    if (rec.valid_metric) std::fprintf(f.get(), "%.17g", *rec.valid_metric);
    std::fprintf(f.get(), ",%.6g\n", rec.wall_ms);
  }
}

// Per-query metric values with an explicit label vector, so reciprocal-rank
// metrics can run on binarized labels without copying the feature matrix.
Vector per_query_values(const RankingDataset& data, const Vector& labels,
                        const Vector& scores, const MetricSpec& spec) {
  Vector out(data.num_queries());
  for (Index q = 0; q < data.num_queries(); ++q) {
    const Index begin = data.query_begin(q);
    const Index size = data.query_size(q);
    out[q] = eval_metric(spec, scores.segment(begin, size),
                         labels.segment(begin, size));
  }
  return out;
}

Vector labels_for(const MetricSpec& spec, const Vector& labels) {
  return spec.kind == MetricKind::mrr ? binarize_labels(labels) : labels;
}

RankingDataset load_dataset(const std::string& path, const MetricSpec& spec) {
  RankingDataset data = parse_svmlight(path);
  if (spec.kind == MetricKind::mrr) data = binarize_labels(data);
  return data;
}

Vector random_labels(const MetricSpec& spec, Index n, Rng& rng) {
  Vector labels(n);
  for (Index i = 0; i < n; ++i) {
    switch (spec.kind) {
      case MetricKind::dcg:
      case MetricKind::ndcg:
        labels[i] = std::floor(rng.next_uniform() * 5.0);
        break;
      case MetricKind::mrr:
        labels[i] = rng.next_uniform() < 0.5 ? 0.0 : 1.0;
        break;
      case MetricKind::err:
      case MetricKind::dcg_rr:
        labels[i] = rng.next_uniform();
        break;
    }
  }
  return labels;
}

Vector random_scores(Index n, Rng& rng) {
  Vector z(n);
  for (Index i = 0; i < n; ++i) z[i] = rng.next_normal();
  return z;
}

struct MomentAccumulator {
  Vector sum;
  Vector sum_sq;
  Index count = 0;

  explicit MomentAccumulator(Index n) : sum(Vector::Zero(n)), sum_sq(Vector::Zero(n)) {}

  void add(const Vector& x) {
    sum += x;
    sum_sq += x.cwiseProduct(x);
    ++count;
  }
  Vector mean() const { return sum / static_cast<double>(count); }
  // Per-coordinate sample variance of a single draw.
  Vector variance() const {
    const double c = static_cast<double>(count);
    return (sum_sq - sum.cwiseProduct(sum) / c) / (c - 1.0);
  }
  Vector se() const { return (variance() / static_cast<double>(count)).cwiseSqrt(); }
};

}  // namespace

MetricSpec parse_metric(const std::string& name) {
  const std::string s = lower(name);
  const std::size_t at = s.find('@');
  const std::string base = s.substr(0, at);
  MetricSpec spec;
  if (base == "dcg") {
    spec.kind = MetricKind::dcg;
  } else if (base == "ndcg") {
    spec.kind = MetricKind::ndcg;
  } else if (base == "err") {
    spec.kind = MetricKind::err;
  } else if (base == "mrr") {
    spec.kind = MetricKind::mrr;
  } else if (base == "dcg_rr") {
    spec.kind = MetricKind::dcg_rr;
  } else {
    bad_value("metric", name, "dcg|ndcg|err|mrr|dcg_rr, optionally with @k");
  }
  if (at != std::string::npos) {
    if (spec.kind == MetricKind::mrr || spec.kind == MetricKind::dcg_rr)
      throw std::invalid_argument("metric '" + name + "' does not take a cutoff");
    const char* first = s.data() + at + 1;
    const char* last = s.data() + s.size();
    long long k = 0;
    const auto [ptr, ec] = std::from_chars(first, last, k);
    if (ec != std::errc() || ptr != last || k < 1)
      throw std::invalid_argument("bad cutoff in metric '" + name + "'");
    spec.truncation = static_cast<Index>(k);
  }
  return spec;
}

std::string metric_name(const MetricSpec& spec) {
  std::string base;
  switch (spec.kind) {
    case MetricKind::dcg: base = "dcg"; break;
    case MetricKind::ndcg: base = "ndcg"; break;
    case MetricKind::err: base = "err"; break;
    case MetricKind::mrr: return "mrr";
    case MetricKind::dcg_rr: return "dcg_rr";
  }
  if (spec.truncation > 0) base += "@" + std::to_string(spec.truncation);
  return base;
}

EstimatorKind parse_estimator(const std::string& name) {
  const std::string s = lower(name);
  if (s == "ccs") return EstimatorKind::ccs;
  if (s == "ccs_sfa") return EstimatorKind::ccs_sfa;
  if (s == "reinforce") return EstimatorKind::reinforce;
  bad_value("estimator", name, "ccs|ccs_sfa|reinforce");
}

BoostMode parse_mode(const std::string& name) {
  const std::string s = lower(name);
  if (s == "sgb") return BoostMode::sgb;
  if (s == "sglb") return BoostMode::sglb;
  bad_value("mode", name, "sgb|sglb");
}

ModelSelect parse_select(const std::string& name) {
  const std::string s = lower(name);
  if (s == "final" || s == "final_iterate") return ModelSelect::final_iterate;
  if (s == "best" || s == "best_valid") return ModelSelect::best_valid;
  bad_value("select", name, "final|best_valid");
}

SmoothingFamily parse_smoothing(const std::string& name) {
  const std::string s = lower(name);
  if (s == "centered") return SmoothingFamily::centered;
  if (s == "shifted" || s == "relevance_shifted") return SmoothingFamily::relevance_shifted;
  bad_value("smoothing", name, "centered|shifted");
}

TrainConfig make_train_config(const RunConfig& run) {
  TrainConfig cfg;
  cfg.iterations = run.iterations;
  cfg.learning_rate = run.learning_rate;
  cfg.depth = run.depth;
  cfg.model_shrink_rate = run.model_shrink_rate;
  cfg.diffusion_temperature = run.diffusion_temperature;
  cfg.mode = parse_mode(run.mode);
  cfg.metric = parse_metric(run.metrics.front());
  cfg.estimator.kind = parse_estimator(run.estimator);
  cfg.estimator.smoothing.family = parse_smoothing(run.smoothing);
  cfg.estimator.smoothing.mu = run.mu;
  cfg.estimator.smoothing.sigma = run.sigma;
  cfg.estimator.nu = run.nu;
  cfg.estimator.samples_per_estimate = run.samples;
  cfg.seed = run.seed;
  cfg.max_borders = run.max_borders;
  cfg.select = parse_select(run.select);
  cfg.threads = run.threads;
  return cfg;
}

int cmd_train(const RunConfig& run) {
  const TrainConfig cfg = make_train_config(run);
  const RankingDataset train_data = load_dataset(run.train_path, cfg.metric);
  std::optional<RankingDataset> valid_data;
  if (!run.valid_path.empty()) valid_data = load_dataset(run.valid_path, cfg.metric);

  const TrainResult result =
      train(cfg, train_data, valid_data ? &*valid_data : nullptr);

  save_ensemble(result.model, run.model_out);
  if (!run.log_out.empty()) write_iteration_log(result.log, run.log_out);

  std::printf("trained iterations=%lld train_metric=%.17g",
              static_cast<long long>(cfg.iterations),
              evaluate(result.model, train_data, cfg.metric));
  if (valid_data)
    std::printf(" valid_metric=%.17g", evaluate(result.model, *valid_data, cfg.metric));
  if (result.best_iteration >= 0)
    std::printf(" best_iteration=%lld", static_cast<long long>(result.best_iteration));
  std::printf(" model=%s\n", run.model_out.c_str());
  return 0;
}

int cmd_eval(const RunConfig& run) {
  const Ensemble model = load_ensemble(run.model_path);
  const RankingDataset data = parse_svmlight(run.data_path);
  if (data.num_features() != model.num_features)
    throw std::runtime_error("dataset has " + std::to_string(data.num_features()) +
                             " features but the model expects " +
                             std::to_string(model.num_features));
  const Vector scores = predict(model, data.features);

  std::optional<Ensemble> baseline;
  Vector baseline_scores;
  if (!run.baseline_model_path.empty()) {
    baseline = load_ensemble(run.baseline_model_path);
    if (data.num_features() != baseline->num_features)
      throw std::runtime_error("dataset/baseline model feature count mismatch");
    baseline_scores = predict(*baseline, data.features);
  }

  File report;
  if (!run.report_out.empty()) {
    report = open_out(run.report_out);
    std::fprintf(report.get(), baseline ? "metric,query_id,value,baseline_value\n"
                                        : "metric,query_id,value\n");
  }

  for (const std::string& name : run.metrics) {
    const MetricSpec spec = parse_metric(name);
    const Vector labels = labels_for(spec, data.labels);
    const Vector values = per_query_values(data, labels, scores, spec);
    std::printf("metric=%s mean=%.17g", metric_name(spec).c_str(), values.mean());
    Vector baseline_values;
    if (baseline) {
      baseline_values = per_query_values(data, labels, baseline_scores, spec);
      const PairedTTest tt = paired_t_test(values, baseline_values);
      std::printf(" baseline_mean=%.17g mean_diff=%.17g t=%.17g p_one_tailed=%.17g dof=%lld",
                  baseline_values.mean(), tt.mean_diff, tt.t, tt.p_one_tailed,
                  static_cast<long long>(tt.dof));
      if (tt.degenerate) std::printf(" degenerate=1");
    }
    std::printf("\n");
    if (report) {
      for (Index q = 0; q < data.num_queries(); ++q) {
        std::fprintf(report.get(), "%s,%lld,%.17g", metric_name(spec).c_str(),
                     static_cast<long long>(data.query_ids[static_cast<std::size_t>(q)]),
                     values[q]);
        if (baseline) std::fprintf(report.get(), ",%.17g", baseline_values[q]);
        std::fprintf(report.get(), "\n");
      }
    }
  }
  return 0;
}

int cmd_gradcheck(const RunConfig& run) {
  const MetricSpec spec = parse_metric(run.metrics.front());
  SmoothingSpec smoothing;
  smoothing.family = parse_smoothing(run.smoothing);
  smoothing.mu = run.mu;
  smoothing.sigma = run.sigma;

  const Index n = run.gradcheck_n;
  Rng label_rng(derive_stream(run.seed, StreamPurpose::fuzz, 1));
  Rng score_rng(derive_stream(run.seed, StreamPurpose::fuzz, 2));
  const Vector labels = random_labels(spec, n, label_rng);
  const Vector z = random_scores(n, score_rng);

  // Central finite differences of the Monte-Carlo smoothed loss, common
  // random draws on both sides of each coordinate bump.
  const double h = run.fd_step;
  MomentAccumulator fd(n);
  {
    Vector diff(n);
    for (Index m = 0; m < run.fd_draws; ++m) {
      Rng rng(derive_stream(run.seed, StreamPurpose::smoothing_noise, static_cast<std::uint64_t>(m)));
      const Vector eps = sample_noise(smoothing, labels, rng);
      Vector base = z + smoothing.sigma * eps;
      for (Index j = 0; j < n; ++j) {
        const double saved = base[j];
        base[j] = saved + h;
        const double up = eval_metric(spec, base, labels);
        base[j] = saved - h;
        const double down = eval_metric(spec, base, labels);
        base[j] = saved;
        diff[j] = -(up - down) / (2.0 * h);
      }
      fd.add(diff);
    }
  }

  EstimatorConfig ccs_config;
  ccs_config.kind = EstimatorKind::ccs;
  ccs_config.smoothing = smoothing;
  MomentAccumulator ccs(n);
  MomentAccumulator reinforce(n);
  for (Index m = 0; m < run.gradcheck_draws; ++m) {
    const std::uint64_t mm = static_cast<std::uint64_t>(m);
    ccs.add(estimate_gradient(ccs_config, spec, z, labels,
                              derive_stream(run.seed, StreamPurpose::estimator_probe, mm, 0))
                .g);
    reinforce.add(reinforce_gradient(spec, z, labels, smoothing.sigma,
                                     derive_stream(run.seed, StreamPurpose::estimator_probe, mm, 1))
                      .g);
  }

  const Vector fd_mean = fd.mean(), fd_se = fd.se();
  const Vector ccs_mean = ccs.mean(), ccs_se = ccs.se();
  const Vector reinforce_mean = reinforce.mean(), reinforce_se = reinforce.se();
  // The score-function estimator targets the centered-noise objective, so it
  // is only comparable against the finite differences when the shift is off.
  const bool check_reinforce =
      smoothing.family == SmoothingFamily::centered || smoothing.mu == 0.0;

  File out;
  if (!run.out_path.empty()) {
    out = open_out(run.out_path);
    std::fprintf(out.get(),
                 "coordinate,fd_mean,fd_se,ccs_mean,ccs_se,ccs_gap_se,"
                 "reinforce_mean,reinforce_se\n");
  }

  bool pass = true;
  std::printf("gradcheck metric=%s smoothing=%s mu=%g sigma=%g n=%lld draws=%lld fd_draws=%lld\n",
              metric_name(spec).c_str(),
              smoothing.family == SmoothingFamily::centered ? "centered" : "shifted",
              smoothing.mu, smoothing.sigma, static_cast<long long>(n),
              static_cast<long long>(run.gradcheck_draws),
              static_cast<long long>(run.fd_draws));
  std::printf("%4s %15s %12s %15s %12s %8s %s\n", "j", "fd_mean", "fd_se", "ccs_mean",
              "ccs_se", "gap_se", "ok");
  for (Index j = 0; j < n; ++j) {
    const double combined = std::sqrt(fd_se[j] * fd_se[j] + ccs_se[j] * ccs_se[j]);
    const double gap = std::abs(ccs_mean[j] - fd_mean[j]) / std::max(combined, 1e-300);
    const bool ok = gap <= 4.0;
    pass = pass && ok;
    std::printf("%4lld %15.8g %12.3g %15.8g %12.3g %8.2f %s\n", static_cast<long long>(j),
                fd_mean[j], fd_se[j], ccs_mean[j], ccs_se[j], gap, ok ? "yes" : "NO");
    if (check_reinforce) {
      const double rc = std::sqrt(fd_se[j] * fd_se[j] + reinforce_se[j] * reinforce_se[j]);
      const double rgap = std::abs(reinforce_mean[j] - fd_mean[j]) / std::max(rc, 1e-300);
      if (rgap > 4.0) {
        pass = false;
        std::printf("     reinforce off at j=%lld: mean=%.8g gap_se=%.2f\n",
                    static_cast<long long>(j), reinforce_mean[j], rgap);
      }
    }
    if (out)
      std::fprintf(out.get(), "%lld,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                   static_cast<long long>(j), fd_mean[j], fd_se[j], ccs_mean[j],
                   ccs_se[j], gap, reinforce_mean[j], reinforce_se[j]);
  }
  const double var_ccs = ccs.variance().mean();
  const double var_reinforce = reinforce.variance().mean();
  std::printf("variance per draw: ccs=%.6g reinforce=%.6g ratio=%.3g\n", var_ccs,
              var_reinforce, var_reinforce / std::max(var_ccs, 1e-300));
  std::printf("gradcheck %s\n", pass ? "PASS" : "FAIL");
  return pass ? 0 : 1;
}

int cmd_synthetic(const RunConfig& run) {
  if (!run.out_path.empty()) {
    const RankingDataset data = synthetic_dataset();
    write_svmlight(data, run.out_path);
    std::printf("wrote %s (%s)\n", run.out_path.c_str(), dataset_summary(data).c_str());
  }
  if (!run.reproduce) return 0;

  const RankingDataset data = synthetic_dataset();
  TrainConfig sglb_cfg;
  sglb_cfg.iterations = run.iterations;
  sglb_cfg.learning_rate = 0.1;
  sglb_cfg.depth = 3;
  sglb_cfg.model_shrink_rate = 1e-3;
  sglb_cfg.diffusion_temperature = 1e3;
  sglb_cfg.mode = BoostMode::sglb;
  sglb_cfg.metric = parse_metric("ndcg@3");
  sglb_cfg.estimator.kind = EstimatorKind::ccs_sfa;
  sglb_cfg.estimator.smoothing = {SmoothingFamily::relevance_shifted, 1.0, 1.0};
  sglb_cfg.threads = run.threads;

  TrainConfig sgb_cfg = sglb_cfg;
  sgb_cfg.mode = BoostMode::sgb;
  sgb_cfg.model_shrink_rate = 0.0;
  sgb_cfg.estimator.kind = EstimatorKind::ccs;
  sgb_cfg.estimator.smoothing = {SmoothingFamily::centered, 0.0, 1.0};

  Index reached = 0, stalled = 0;
  for (Index s = 0; s < run.seeds; ++s) {
    sglb_cfg.seed = static_cast<std::uint64_t>(s);
    sgb_cfg.seed = static_cast<std::uint64_t>(s);
    const double t0 = now_seconds();
    const TrainResult a = train(sglb_cfg, data);
    const double t1 = now_seconds();
    const TrainResult b = train(sgb_cfg, data);
    const double t2 = now_seconds();
    // The Langevin run is a sampler, not a descent: the claim is that it
    // visits the global optimum within the budget, so score its best iterate.
    double sglb_best = a.log.front().train_metric;
    Index best_at = a.log.front().iteration;
    for (const IterationRecord& rec : a.log) {
      if (rec.train_metric > sglb_best) {
        sglb_best = rec.train_metric;
        best_at = rec.iteration;
      }
    }
    const double sgb_final = b.log.back().train_metric;
    if (sglb_best >= 0.9165) ++reached;
    if (sgb_final < 0.9165) ++stalled;
    std::printf(
        "seed=%lld sglb_best=%.6f@%lld final=%.6f (%.1fs) sgb_final=%.6f (%.1fs)\n",
        static_cast<long long>(s), sglb_best, static_cast<long long>(best_at),
        a.log.back().train_metric, t1 - t0, sgb_final, t2 - t1);
  }
  std::printf("sglb visited 0.917 within the budget: %lld/%lld; sgb stalled below: %lld/%lld\n",
              static_cast<long long>(reached), static_cast<long long>(run.seeds),
              static_cast<long long>(stalled), static_cast<long long>(run.seeds));
  return 0;
}

int cmd_bench(const RunConfig& run) {
  const MetricSpec spec = parse_metric("ndcg@" + std::to_string(run.bench_k));
  EstimatorConfig config;
  config.kind = EstimatorKind::ccs;
  config.smoothing = {SmoothingFamily::relevance_shifted, 1.0, 1.0};

  File out;
  if (!run.out_path.empty()) {
    out = open_out(run.out_path);
    std::fprintf(out.get(), "n,ms_per_pass,normalized_ns\n");
  }

  std::printf("%8s %14s %16s\n", "n", "ms_per_pass", "ns/(n*(k+lg n))");
  double norm_min = 0.0, norm_max = 0.0;
  for (Index p = 8; p <= 14; ++p) {
    const Index n = Index{1} << p;
    Rng label_rng(derive_stream(run.seed, StreamPurpose::fuzz, 10, static_cast<std::uint64_t>(n)));
    Rng score_rng(derive_stream(run.seed, StreamPurpose::fuzz, 11, static_cast<std::uint64_t>(n)));
    const Vector labels = random_labels(spec, n, label_rng);
    const Vector z = random_scores(n, score_rng);

    const auto pass = [&](std::uint64_t key) {
      return estimate_gradient(config, spec, z, labels, key).g.sum();
    };
    double sink = pass(derive_stream(run.seed, StreamPurpose::estimator_probe, 0,
                                     static_cast<std::uint64_t>(n)));
    double t0 = now_seconds();
    sink += pass(derive_stream(run.seed, StreamPurpose::estimator_probe, 1,
                               static_cast<std::uint64_t>(n)));
    const double probe = now_seconds() - t0;
    const Index reps = std::clamp<Index>(static_cast<Index>(0.05 / std::max(probe, 1e-6)), 3, 200);
    t0 = now_seconds();
    for (Index r = 0; r < reps; ++r)
      sink += pass(derive_stream(run.seed, StreamPurpose::estimator_probe,
                                 static_cast<std::uint64_t>(2 + r),
                                 static_cast<std::uint64_t>(n)));
    const double per_pass = (now_seconds() - t0) / static_cast<double>(reps);
    const double work = static_cast<double>(n) *
                        (static_cast<double>(run.bench_k) + std::log2(static_cast<double>(n)));
    const double normalized = per_pass * 1e9 / work;
    norm_min = (p == 8) ? normalized : std::min(norm_min, normalized);
    norm_max = (p == 8) ? normalized : std::max(norm_max, normalized);
    std::printf("%8lld %14.4f %16.2f\n", static_cast<long long>(n), per_pass * 1e3,
                normalized);
    if (out)
      std::fprintf(out.get(), "%lld,%.17g,%.17g\n", static_cast<long long>(n),
                   per_pass * 1e3, normalized);
    if (sink == 0.12345) std::printf("#\n");  // keep the passes from being elided
  }
  const double band = norm_max / std::max(norm_min, 1e-300);
  std::printf("normalized cost band (max/min over n): %.2f %s\n", band,
              band <= 8.0 ? "(flat within a small factor)" : "(WARN: wider than 8x)");

  // Single-move updates against full recomputation at n = 4096.
  {
    const Index n = 4096;
    Rng label_rng(derive_stream(run.seed, StreamPurpose::fuzz, 20));
    Rng score_rng(derive_stream(run.seed, StreamPurpose::fuzz, 21));
    Rng move_rng(derive_stream(run.seed, StreamPurpose::fuzz, 22));
    const Vector labels = random_labels(spec, n, label_rng);
    const Vector z = random_scores(n, score_rng);
    const RankedState state = build_ranked_state(spec, z, labels);
    const Index moves = 20000;
    std::vector<Index> pos(moves);
    std::vector<double> target(moves);
    const double lo = z.minCoeff() - 1.0, hi = z.maxCoeff() + 1.0;
    for (Index m = 0; m < moves; ++m) {
      pos[m] = static_cast<Index>(move_rng.next_uniform() * static_cast<double>(n));
      target[m] = lo + (hi - lo) * move_rng.next_uniform();
    }
    double sink = 0.0;
    double t0 = now_seconds();
    for (Index m = 0; m < moves; ++m) sink += delta_eval(state, pos[m], target[m]);
    const double fast = (now_seconds() - t0) / static_cast<double>(moves);
    Vector scratch = z;
    t0 = now_seconds();
    for (Index m = 0; m < moves; ++m) {
      const Index doc = state.order[static_cast<std::size_t>(pos[m])];
      const double saved = scratch[doc];
      scratch[doc] = target[m];
      sink += eval_metric(spec, scratch, labels);
      scratch[doc] = saved;
    }
    const double naive = (now_seconds() - t0) / static_cast<double>(moves);
    std::printf("single-move update at n=%lld: %.3f us vs naive %.3f us (%.0fx)\n",
                static_cast<long long>(n), fast * 1e6, naive * 1e6, naive / fast);
    if (sink == 0.54321) std::printf("#\n");
  }
  return 0;
}

int run_cli(int argc, const char* const* argv) {
  RunConfig run;
  CLI::App app{"gradient-boosted ranker trained on smoothed ranking metrics"};
  app.set_config("--config", "", "flat key=value option file");
  app.require_subcommand(1);

  app.add_option("--train", run.train_path, "training dataset (svmlight, .gz ok)");
  app.add_option("--valid", run.valid_path, "validation dataset");
  app.add_option("--data", run.data_path, "dataset to evaluate");
  app.add_option("--model", run.model_path, "model file to load");
  app.add_option("--baseline", run.baseline_model_path, "baseline model for the paired test");
  app.add_option("--model_out", run.model_out, "where to write the trained model");
  app.add_option("--log", run.log_out, "per-iteration metric CSV");
  app.add_option("--report", run.report_out, "per-query metric CSV (eval)");
  app.add_option("--out", run.out_path, "command-specific output file");

  app.add_option("--metric", run.metrics, "metric, e.g. ndcg@10, err@5, mrr, dcg_rr");
  app.add_option("--estimator", run.estimator, "ccs|ccs_sfa|reinforce");
  app.add_option("--mode", run.mode, "sgb|sglb");
  app.add_option("--select", run.select, "final|best_valid");
  app.add_option("--smoothing", run.smoothing, "centered|shifted");

  app.add_option("--iterations", run.iterations, "boosting iterations");
  app.add_option("--learning_rate", run.learning_rate, "per-tree step size");
  app.add_option("--depth", run.depth, "tree depth");
  app.add_option("--model_shrink_rate", run.model_shrink_rate, "per-iteration shrink rate");
  app.add_option("--diffusion_temperature", run.diffusion_temperature,
                 "inverse noise temperature (inf disables noise)");
  app.add_option("--mu", run.mu, "relevance shift of the smoothing noise");
  app.add_option("--sigma", run.sigma, "smoothing noise scale");
  app.add_option("--nu", run.nu, "scale guard of the score-direction projection");
  app.add_option("--samples", run.samples, "noise draws averaged per gradient");
  app.add_option("--max_borders", run.max_borders, "histogram borders per feature");
  app.add_option("--seed", run.seed, "random seed");
  app.add_option("--threads", run.threads, "worker threads (0: STOCHRANK_THREADS or hardware)");
  app.add_flag("--unsafe", run.unsafe, "skip the hyperparameter sanity ranges");

  app.add_option("--gradcheck_n", run.gradcheck_n, "documents in the gradcheck instance");
  app.add_option("--gradcheck_draws", run.gradcheck_draws, "estimator draws");
  app.add_option("--fd_draws", run.fd_draws, "finite-difference draws");
  app.add_option("--fd_step", run.fd_step, "finite-difference step");
  app.add_option("--bench_k", run.bench_k, "metric cutoff used by bench");
  app.add_option("--seeds", run.seeds, "seeds for synthetic --reproduce");
  app.add_flag("--reproduce", run.reproduce, "rerun the two-optimum study");

  CLI::App* c_train = app.add_subcommand("train", "fit a model");
  CLI::App* c_eval = app.add_subcommand("eval", "evaluate a model, optionally against a baseline");
  CLI::App* c_gradcheck = app.add_subcommand("gradcheck", "estimator vs finite differences");
  CLI::App* c_synthetic = app.add_subcommand("synthetic", "two-optimum instance tools");
  CLI::App* c_bench = app.add_subcommand("bench", "gradient pass timing");
  for (CLI::App* sub : {c_train, c_eval, c_gradcheck, c_synthetic, c_bench})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::vector<std::string> problems;
  const auto require = [&](bool ok, const std::string& message) {
    if (!ok) problems.push_back(message);
  };
  require(run.learning_rate > 0.0 && std::isfinite(run.learning_rate),
          "--learning_rate must be positive");
  require(run.iterations >= 1, "--iterations must be at least 1");
  require(run.depth >= 1 && run.depth <= 16, "--depth must be in [1, 16]");
  require(run.model_shrink_rate >= 0.0, "--model_shrink_rate must be non-negative");
  require(run.model_shrink_rate * run.learning_rate < 1.0,
          "--model_shrink_rate * --learning_rate must stay below 1");
  require(run.diffusion_temperature > 0.0, "--diffusion_temperature must be positive");
  require(run.mu >= 0.0, "--mu must be non-negative");
  require(run.sigma > 0.0, "--sigma must be positive");
  require(run.nu >= 0.0, "--nu must be non-negative");
  require(run.samples >= 1, "--samples must be at least 1");
  require(run.max_borders >= 1 && run.max_borders <= 65535,
          "--max_borders must be in [1, 65535]");
  require(run.threads >= 0, "--threads must be non-negative");
  require(!run.metrics.empty(), "--metric must not be empty");
  require(run.gradcheck_n >= 2 && run.gradcheck_n <= 64,
          "--gradcheck_n must be in [2, 64]");
  require(run.gradcheck_draws >= 100, "--gradcheck_draws must be at least 100");
  require(run.fd_draws >= 100, "--fd_draws must be at least 100");
  require(run.fd_step > 0.0, "--fd_step must be positive");
  require(run.bench_k >= 1, "--bench_k must be at least 1");
  require(run.seeds >= 1, "--seeds must be at least 1");
  if (!run.unsafe) {
    require(run.learning_rate <= 1.0,
            "--learning_rate above 1 is outside the sane range (--unsafe to override)");
    require(run.iterations <= 1000000,
            "--iterations above 1e6 is outside the sane range (--unsafe to override)");
    require(run.mu <= 100.0, "--mu above 100 is outside the sane range (--unsafe to override)");
    require(run.sigma >= 1e-6 && run.sigma <= 100.0,
            "--sigma outside [1e-6, 100] is outside the sane range (--unsafe to override)");
    require(run.samples <= 4096,
            "--samples above 4096 is outside the sane range (--unsafe to override)");
  }
  try {
    for (const std::string& name : run.metrics) (void)parse_metric(name);
    (void)parse_estimator(run.estimator);
    (void)parse_mode(run.mode);
    (void)parse_select(run.select);
    (void)parse_smoothing(run.smoothing);
  } catch (const std::invalid_argument& e) {
    problems.emplace_back(e.what());
  }

  const std::string command = app.get_subcommands().front()->get_name();
  if (command == "train") require(!run.train_path.empty(), "train needs --train");
  if (command == "eval") {
    require(!run.data_path.empty(), "eval needs --data");
    require(!run.model_path.empty(), "eval needs --model");
  }
  if (command == "synthetic")
    require(!run.out_path.empty() || run.reproduce, "synthetic needs --out and/or --reproduce");
  if (!problems.empty()) {
    for (const std::string& p : problems) std::fprintf(stderr, "error: %s\n", p.c_str());
    return 2;
  }

  try {
    if (command == "train") return cmd_train(run);
    if (command == "eval") return cmd_eval(run);
    if (command == "gradcheck") return cmd_gradcheck(run);
    if (command == "synthetic") return cmd_synthetic(run);
    return cmd_bench(run);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace stochrank::cli
