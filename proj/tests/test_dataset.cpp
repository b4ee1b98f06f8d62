#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <zlib.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "stochrank/dataset.hpp"

using namespace stochrank;

namespace {

struct TempPath {
  std::string path;
  explicit TempPath(const std::string& name) : path("dataset_test_" + name) {}
  ~TempPath() { std::remove(path.c_str()); }
};

RankingDataset parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse_svmlight_stream(in, "inline");
}

}  // namespace

TEST_CASE("basic parsing: labels, qids, sparse features, comments") {
  const RankingDataset data = parse_text(
      "2 qid:7 1:0.5 3:-1.25  # trailing comment\n"
      "\n"
      "0 qid:7 2:4\n"
      "1 qid:9 1:1 2:2 3:3\n");
  CHECK(data.num_docs() == 3);
  CHECK(data.num_features() == 3);
  CHECK(data.num_queries() == 2);
  CHECK(data.labels[0] == 2.0);
  CHECK(data.labels[1] == 0.0);
  CHECK(data.features(0, 0) == 0.5);
  CHECK(data.features(0, 1) == 0.0);  // absent -> 0
  CHECK(data.features(0, 2) == -1.25);
  CHECK(data.features(1, 1) == 4.0);
  CHECK(data.query_ids == std::vector<std::int64_t>{7, 9});
  CHECK(data.query_offsets == std::vector<Index>{0, 2, 3});
}

TEST_CASE("non-contiguous qid lines merge, keeping both orders") {
  const RankingDataset data = parse_text(
      "1 qid:5 1:1\n"
      "2 qid:6 1:2\n"
      "3 qid:5 1:3\n"
      "4 qid:6 1:4\n");
  // First-appearance query order: 5 then 6; in-file document order inside each.
  CHECK(data.query_ids == std::vector<std::int64_t>{5, 6});
  CHECK(data.query_offsets == std::vector<Index>{0, 2, 4});
  CHECK(data.labels[0] == 1.0);
  CHECK(data.labels[1] == 3.0);
  CHECK(data.labels[2] == 2.0);
  CHECK(data.labels[3] == 4.0);
  CHECK(data.features(1, 0) == 3.0);
}

TEST_CASE("parse errors carry the source name and line number") {
  const auto message_of = [](const std::string& text) {
    try {
      (void)parse_text(text);
      return std::string("no error");
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
  };
  CHECK(message_of("1 qid:1 1:1\nbogus qid:1 1:1\n").find("inline:2") == 0);
  CHECK(message_of("1 qid:1 0:1\n").find("inline:1") == 0);   // 1-based indices
  CHECK(message_of("1 qid:1 1:abc\n").find("inline:1") == 0);
  CHECK(message_of("1 1:1\n").find("inline:1") == 0);          // missing qid
  CHECK(message_of("").find("no documents") != std::string::npos);
  CHECK_THROWS_AS((void)parse_svmlight("no_such_file.txt"), ParseError);
}

TEST_CASE("write/parse round trip preserves everything") {
  const RankingDataset data = parse_text(
      "2.5 qid:3 1:0.1 2:-7\n"
      "0 qid:3 2:0.30000000000000004\n"
      "1 qid:12 1:1e-300\n");
  TempPath file("roundtrip.txt");
  write_svmlight(data, file.path);
  const RankingDataset back = parse_svmlight(file.path);
  CHECK(back.query_ids == data.query_ids);
  CHECK(back.query_offsets == data.query_offsets);
  CHECK((back.labels - data.labels).norm() == 0.0);
  CHECK((back.features - data.features).norm() == 0.0);
}

TEST_CASE("gzip-compressed files are read transparently") {
  const std::string text = "3 qid:1 1:0.5 2:1\n1 qid:1 1:-2\n0 qid:2 2:3\n";
  TempPath file("data.txt.gz");
  gzFile gz = gzopen(file.path.c_str(), "wb");
  REQUIRE(gz != nullptr);
  REQUIRE(gzwrite(gz, text.data(), static_cast<unsigned>(text.size())) ==
          static_cast<int>(text.size()));
  gzclose(gz);
  const RankingDataset data = parse_svmlight(file.path);
  CHECK(data.num_docs() == 3);
  CHECK(data.num_queries() == 2);
  CHECK(data.labels[0] == 3.0);
  CHECK(data.features(2, 1) == 3.0);
}

TEST_CASE("two-query conflict instance is exactly the documented one") {
  const RankingDataset data = synthetic_dataset();
  REQUIRE(data.num_docs() == 5);
  REQUIRE(data.num_features() == 3);
  CHECK(data.query_offsets == std::vector<Index>{0, 3, 5});
  CHECK(data.query_ids == std::vector<std::int64_t>{1, 2});
  const double rows[5][4] = {{1, 0, 0, 3}, {0, 1, 0, 2}, {0, 0, 1, 1},
                             {0, 0, 1, 3}, {1, 0, 0, 2}};
  for (Index i = 0; i < 5; ++i) {
    for (Index f = 0; f < 3; ++f) CHECK(data.features(i, f) == rows[i][f]);
    CHECK(data.labels[i] == rows[i][3]);
  }
  CHECK(dataset_summary(data) ==
        "queries=2 docs=5 features=3 label_min=1 label_max=3 max_query_docs=3");
}

TEST_CASE("label binarization") {
  Vector labels(4);
  labels << 0, 2, 0.5, -1;
  const Vector binary = binarize_labels(labels);
  CHECK(binary[0] == 0.0);
  CHECK(binary[1] == 1.0);
  CHECK(binary[2] == 1.0);
  CHECK(binary[3] == 0.0);

  const RankingDataset data = binarize_labels(synthetic_dataset());
  for (Index i = 0; i < data.num_docs(); ++i) CHECK(data.labels[i] == 1.0);
}
