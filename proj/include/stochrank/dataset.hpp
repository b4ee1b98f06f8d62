#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "stochrank/types.hpp"

namespace stochrank {

// Dense query-grouped ranking data. Documents of query q occupy rows
// [query_offsets[q], query_offsets[q + 1]).
struct RankingDataset {
  Matrix features;
  Vector labels;
  std::vector<Index> query_offsets;   // size num_queries + 1, starts at 0
  std::vector<std::int64_t> query_ids;

  Index num_docs() const { return features.rows(); }
  Index num_features() const { return features.cols(); }
  Index num_queries() const {
    return static_cast<Index>(query_ids.size());
  }
  Index query_begin(Index q) const { return query_offsets[static_cast<std::size_t>(q)]; }
  Index query_size(Index q) const {
    return query_offsets[static_cast<std::size_t>(q) + 1] -
           query_offsets[static_cast<std::size_t>(q)];
  }
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "label qid:<id> <index>:<value> ... # comment" with 1-based feature
// indices; absent features are 0. Lines of one qid need not be contiguous:
// groups merge, keeping first-appearance query order and in-file document
// order. Errors carry the 1-based line number. Files whose first two bytes
// are the gzip magic are decompressed transparently.
RankingDataset parse_svmlight(const std::string& path);
RankingDataset parse_svmlight_stream(std::istream& in, const std::string& name);

void write_svmlight(const RankingDataset& data, const std::string& path);

// Two-query, three-feature-vector conflict instance: per-query optimal
// orderings of the shared score assignment disagree, producing one global and
// one locally attracting optimum.
RankingDataset synthetic_dataset();

// 1 if label > 0 else 0 (reciprocal-rank preprocessing).
Vector binarize_labels(ConstVectorRef labels);
RankingDataset binarize_labels(const RankingDataset& data);

// Deterministic one-line-per-field summary (counts, label histogram bounds).
std::string dataset_summary(const RankingDataset& data);

}  // namespace stochrank
