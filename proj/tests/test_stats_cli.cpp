#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "stochrank/dataset.hpp"
#include "stochrank/stats.hpp"
#include "stochrank/types.hpp"

using namespace stochrank;

namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Index>(values.size()));
  Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

TEST_CASE("paired test matches reference statistics") {
  const Vector a = vec({0.82, 0.91, 0.75, 0.88, 0.64, 0.97});
  const Vector b = vec({0.78, 0.86, 0.79, 0.81, 0.60, 0.91});
  const PairedTTest r = paired_t_test(a, b);
  CHECK(r.dof == 5);
  CHECK_FALSE(r.degenerate);
  CHECK(r.mean_diff == doctest::Approx(0.036666666666666646).epsilon(1e-12));
  CHECK(r.t == doctest::Approx(2.2837506959778477).epsilon(1e-12));
  CHECK(r.p_one_tailed == doctest::Approx(0.035601675111527085).epsilon(1e-12));

  const Vector a2 = vec({0.5, 0.61, 0.49, 0.72});
  const Vector b2 = vec({0.55, 0.60, 0.50, 0.70});
  const PairedTTest r2 = paired_t_test(a2, b2);
  CHECK(r2.dof == 3);
  CHECK(r2.t == doctest::Approx(-0.48454371185234896).epsilon(1e-12));
  CHECK(r2.p_one_tailed == doctest::Approx(0.66941251201922691).epsilon(1e-12));
}

TEST_CASE("zero-variance differences fall back to sign logic") {
  const Vector a = vec({0.4, 0.6, 0.8});
  PairedTTest r = paired_t_test(a, a);
  CHECK(r.degenerate);
  CHECK(r.t == 0.0);
  CHECK(r.p_one_tailed == 0.5);

  r = paired_t_test((a.array() + 0.1).matrix(), a);
  CHECK(r.degenerate);
  CHECK(std::isinf(r.t));
  CHECK(r.t > 0.0);
  CHECK(r.p_one_tailed == 0.0);

  r = paired_t_test((a.array() - 0.1).matrix(), a);
  CHECK(r.degenerate);
  CHECK(r.t < 0.0);
  CHECK(r.p_one_tailed == 1.0);
}

TEST_CASE("paired test input validation") {
  CHECK_THROWS_AS((void)paired_t_test(vec({1.0, 2.0}), vec({1.0})), std::invalid_argument);
  CHECK_THROWS_AS((void)paired_t_test(vec({1.0}), vec({1.0})), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// End-to-end runs of the command-line binary (path via STOCHRANK_CLI).

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

class CliFixture {
 public:
  CliFixture() {
    const char* cli = std::getenv("STOCHRANK_CLI");
    REQUIRE_MESSAGE(cli != nullptr, "STOCHRANK_CLI must point at the binary");
    cli_ = cli;
    char tmpl[] = "/tmp/stochrank_cli_XXXXXX";
    REQUIRE(mkdtemp(tmpl) != nullptr);
    dir_ = tmpl;
  }
  ~CliFixture() { std::filesystem::remove_all(dir_); }

  std::filesystem::path path(const std::string& name) const { return dir_ / name; }

  RunResult run(const std::string& args) const {
    const std::filesystem::path out = dir_ / "stdout.txt";
    const std::filesystem::path err = dir_ / "stderr.txt";
    const std::string cmd =
        cli_ + " " + args + " >" + out.string() + " 2>" + err.string();
    const int raw = std::system(cmd.c_str());
    RunResult result;
    result.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    result.out = read_file(out);
    result.err = read_file(err);
    return result;
  }

  std::filesystem::path write_dataset(const std::string& name) const {
    const std::filesystem::path file = dir_ / name;
    write_svmlight(synthetic_dataset(), file.string());
    return file;
  }

 private:
  std::string cli_;
  std::filesystem::path dir_;
};

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

TEST_CASE("usage errors exit with status 2, help with 0") {
  CliFixture cli;
  CHECK(cli.run("").code == 2);
  CHECK(cli.run("--help").code == 0);
  CHECK(cli.run("--no-such-flag train").code == 2);
  CHECK(cli.run("train").code == 2);  // --train is required
  RunResult r = cli.run("eval --data missing.txt --model m.bin --metric ndcg@0");
  CHECK(r.code == 2);
  CHECK(contains(r.err, "error:"));
  CHECK(cli.run("train --train x.txt --learning_rate 0").code == 2);
}

TEST_CASE("runtime failures exit with status 1") {
  CliFixture cli;
  const RunResult r = cli.run("train --train /nonexistent/data.txt --iterations 1");
  CHECK(r.code == 1);
  CHECK(contains(r.err, "error:"));
}

TEST_CASE("train, evaluate and compare end to end") {
  CliFixture cli;
  const auto data = cli.write_dataset("train.txt");
  const auto model = cli.path("model.bin");
  const auto log = cli.path("log.csv");

  RunResult r = cli.run("train --train " + data.string() + " --valid " + data.string() +
                        " --iterations 5 --depth 2 --metric ndcg@3 --seed 3" +
                        " --model_out " + model.string() + " --log " + log.string());
  CHECK(r.code == 0);
  CHECK(contains(r.out, "trained iterations=5"));
  CHECK(contains(r.out, "valid_metric="));
  REQUIRE(std::filesystem::exists(model));
  CHECK(count_lines(read_file(log)) == 6);  // header + one row per iteration

  r = cli.run("eval --data " + data.string() + " --model " + model.string() +
              " --metric ndcg@3 --metric mrr --report " + cli.path("report.csv").string());
  CHECK(r.code == 0);
  CHECK(contains(r.out, "ndcg@3 mean="));
  CHECK(contains(r.out, "mrr mean="));
  CHECK(contains(read_file(cli.path("report.csv")), "metric,query_id,value"));

  // A model compared against itself has zero-variance differences.
  r = cli.run("eval --data " + data.string() + " --model " + model.string() +
              " --baseline " + model.string() + " --metric ndcg@3");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "baseline_mean="));
  CHECK(contains(r.out, "degenerate=1"));
}

TEST_CASE("config file values load and the command line overrides them") {
  CliFixture cli;
  const auto data = cli.write_dataset("train.txt");
  const auto cfg = cli.path("run.cfg");
  {
    std::ofstream out(cfg);
    out << "iterations=3\nlearning_rate=0\ndepth=2\nmetric=ndcg@3\n";
  }
  const std::string base = "train --train " + data.string() + " --config " + cfg.string() +
                           " --model_out " + cli.path("m.bin").string();
  CHECK(cli.run(base).code == 2);  // learning_rate=0 from the file is rejected
  const RunResult r = cli.run(base + " --learning_rate 0.1");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "trained iterations=3"));
}

TEST_CASE("out-of-range hyperparameters need --unsafe") {
  CliFixture cli;
  const auto data = cli.write_dataset("train.txt");
  const std::string base = "train --train " + data.string() +
                           " --iterations 2 --depth 2 --metric ndcg@3 --mu 1000" +
                           " --model_out " + cli.path("m.bin").string();
  const RunResult rejected = cli.run(base);
  CHECK(rejected.code == 2);
  CHECK(contains(rejected.err, "--unsafe"));
  CHECK(cli.run(base + " --unsafe").code == 0);
}

TEST_CASE("graded labels are binarized for reciprocal-rank training") {
  CliFixture cli;
  const auto data = cli.write_dataset("train.txt");
  const RunResult r = cli.run("train --train " + data.string() +
                              " --iterations 3 --depth 2 --metric mrr --model_out " +
                              cli.path("m.bin").string());
  CHECK(r.code == 0);
  CHECK(contains(r.out, "trained iterations=3"));
}

TEST_CASE("estimator gradcheck passes on a small instance") {
  CliFixture cli;
  const RunResult r = cli.run(
      "gradcheck --gradcheck_n 3 --gradcheck_draws 40000 --fd_draws 40000"
      " --metric ndcg@2 --seed 3 --out " + cli.path("gradcheck.csv").string());
  CHECK(r.code == 0);
  CHECK(contains(r.out, "gradcheck PASS"));
  CHECK(contains(read_file(cli.path("gradcheck.csv")), "coordinate,fd_mean"));
}

TEST_CASE("synthetic dataset writing and the two-optimum study run") {
  CliFixture cli;
  const auto file = cli.path("synthetic.txt");
  CHECK(cli.run("synthetic --out " + file.string()).code == 0);
  const RankingDataset parsed = parse_svmlight(file.string());
  CHECK(parsed.num_queries() == 2);
  CHECK(parsed.num_docs() == 5);

  const RunResult r = cli.run("synthetic --reproduce --seeds 2 --iterations 60");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "visited"));
}

}  // namespace
