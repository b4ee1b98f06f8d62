#pragma once

#include <string>
#include <vector>

#include "stochrank/booster.hpp"
#include "stochrank/metric.hpp"

namespace stochrank::cli {

// Everything a run needs; populated from defaults, then a flat key=value
// config file, then command-line flags (last writer wins).
struct RunConfig {
  std::string train_path;
  std::string valid_path;
  std::string data_path;
  std::string model_path;
  std::string baseline_model_path;
  std::string model_out = "model.bin";
  std::string log_out;
  std::string report_out;

  std::vector<std::string> metrics{"ndcg@10"};  // eval accepts several
  std::string estimator = "ccs_sfa";
  std::string mode = "sglb";
  std::string select = "final";
  std::string smoothing = "shifted";

  Index iterations = 1000;
  double learning_rate = 0.1;
  Index depth = 6;
  double model_shrink_rate = 1e-3;
  double diffusion_temperature = 1e8;
  double mu = 1.0;
  double sigma = 1.0;
  double nu = 1e-2;
  Index samples = 1;
  Index max_borders = 254;
  std::uint64_t seed = 0;
  Index threads = 0;
  bool unsafe = false;

  // gradcheck / bench knobs
  Index gradcheck_n = 4;
  Index gradcheck_draws = 200000;
  Index fd_draws = 100000;
  double fd_step = 1e-2;
  Index bench_k = 10;
  Index seeds = 10;
  bool reproduce = false;
  std::string out_path;
};

MetricSpec parse_metric(const std::string& name);
std::string metric_name(const MetricSpec& spec);
EstimatorKind parse_estimator(const std::string& name);
BoostMode parse_mode(const std::string& name);
ModelSelect parse_select(const std::string& name);
SmoothingFamily parse_smoothing(const std::string& name);

TrainConfig make_train_config(const RunConfig& run);

int cmd_train(const RunConfig& run);
int cmd_eval(const RunConfig& run);
int cmd_gradcheck(const RunConfig& run);
int cmd_synthetic(const RunConfig& run);
int cmd_bench(const RunConfig& run);

// Full dispatcher: parses argv, applies the config file, validates, runs.
// Exit status: 0 success, 1 runtime failure, 2 usage/config error.
int run_cli(int argc, const char* const* argv);

}  // namespace stochrank::cli
