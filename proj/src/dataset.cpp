#include "stochrank/dataset.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace stochrank {

namespace {

struct RawDoc {
  double label = 0.0;
  std::vector<std::pair<Index, double>> features;  // 0-based index
};

[[noreturn]] void fail(const std::string& name, std::size_t line_no,
                       const std::string& what) {
  throw ParseError(name + ":" + std::to_string(line_no) + ": " + what);
}

double parse_double(std::string_view token, const std::string& name,
                    std::size_t line_no, const char* what) {
  double value = 0.0;
  const auto result =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (result.ec != std::errc{} || result.ptr != token.data() + token.size()) {
    fail(name, line_no, std::string("bad ") + what + ": '" + std::string(token) + "'");
  }
  return value;
}

RankingDataset assemble(std::vector<RawDoc>&& docs,
                        std::vector<std::int64_t>&& doc_qid, Index max_feature) {
  // Group by qid, keeping first-appearance order of queries and in-file order
  // of documents inside each query.
  std::vector<std::int64_t> query_order;
  std::map<std::int64_t, Index> query_index;
  for (std::int64_t qid : doc_qid) {
    if (query_index.emplace(qid, static_cast<Index>(query_order.size())).second) {
      query_order.push_back(qid);
    }
  }
  const Index n_queries = static_cast<Index>(query_order.size());
  std::vector<Index> sizes(static_cast<std::size_t>(n_queries), 0);
  for (std::int64_t qid : doc_qid) {
    sizes[static_cast<std::size_t>(query_index[qid])] += 1;
  }

  RankingDataset out;
  out.query_ids = std::move(query_order);
  out.query_offsets.resize(static_cast<std::size_t>(n_queries) + 1, 0);
  for (Index q = 0; q < n_queries; ++q) {
    out.query_offsets[static_cast<std::size_t>(q) + 1] =
        out.query_offsets[static_cast<std::size_t>(q)] + sizes[static_cast<std::size_t>(q)];
  }

  const Index n_docs = static_cast<Index>(docs.size());
  out.features = Matrix::Zero(n_docs, max_feature);
  out.labels.resize(n_docs);
  std::vector<Index> cursor(out.query_offsets.begin(), out.query_offsets.end() - 1);
  for (Index i = 0; i < n_docs; ++i) {
    const Index q = query_index[doc_qid[static_cast<std::size_t>(i)]];
    const Index row = cursor[static_cast<std::size_t>(q)]++;
    out.labels[row] = docs[static_cast<std::size_t>(i)].label;
    for (const auto& [f, v] : docs[static_cast<std::size_t>(i)].features) {
      out.features(row, f) = v;
    }
  }
  return out;
}

}  // namespace

RankingDataset parse_svmlight_stream(std::istream& in, const std::string& name) {
  std::vector<RawDoc> docs;
  std::vector<std::int64_t> doc_qid;
  Index max_feature = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    std::string_view body(line);
    if (hash != std::string::npos) body = body.substr(0, hash);

    std::size_t pos = 0;
    auto next_token = [&]() -> std::string_view {
      while (pos < body.size() && (body[pos] == ' ' || body[pos] == '\t' ||
                                   body[pos] == '\r')) {
        ++pos;
      }
      const std::size_t start = pos;
      while (pos < body.size() && body[pos] != ' ' && body[pos] != '\t' &&
             body[pos] != '\r') {
        ++pos;
      }
      return body.substr(start, pos - start);
    };

    const std::string_view label_tok = next_token();
    if (label_tok.empty()) continue;  // blank or comment-only line

    RawDoc doc;
    doc.label = parse_double(label_tok, name, line_no, "label");

    const std::string_view qid_tok = next_token();
    if (!qid_tok.starts_with("qid:")) {
      fail(name, line_no, "expected qid:<id> after the label");
    }
    std::int64_t qid = 0;
    {
      const auto digits = qid_tok.substr(4);
      const auto result =
          std::from_chars(digits.data(), digits.data() + digits.size(), qid);
      if (result.ec != std::errc{} || result.ptr != digits.data() + digits.size()) {
        fail(name, line_no, "bad qid: '" + std::string(qid_tok) + "'");
      }
    }

    for (std::string_view tok = next_token(); !tok.empty(); tok = next_token()) {
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos) {
        fail(name, line_no, "bad feature token: '" + std::string(tok) + "'");
      }
      Index feature = 0;
      const auto idx = tok.substr(0, colon);
      const auto result =
          std::from_chars(idx.data(), idx.data() + idx.size(), feature);
      if (result.ec != std::errc{} || result.ptr != idx.data() + idx.size() ||
          feature < 1) {
        fail(name, line_no,
             "bad feature index (1-based integer expected): '" + std::string(tok) + "'");
      }
      const double value =
          parse_double(tok.substr(colon + 1), name, line_no, "feature value");
      doc.features.emplace_back(feature - 1, value);
      max_feature = std::max(max_feature, feature);
    }

    docs.push_back(std::move(doc));
    doc_qid.push_back(qid);
  }
  if (docs.empty()) throw ParseError(name + ": no documents");
  return assemble(std::move(docs), std::move(doc_qid), max_feature);
}

RankingDataset parse_svmlight(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw ParseError(path + ": cannot open");
  unsigned char magic[2] = {0, 0};
  probe.read(reinterpret_cast<char*>(magic), 2);
  probe.close();
  if (magic[0] == 0x1f && magic[1] == 0x8b) {
    gzFile gz = gzopen(path.c_str(), "rb");
    if (gz == nullptr) throw ParseError(path + ": cannot open");
    std::string text;
    char buffer[1 << 16];
    int got = 0;
    while ((got = gzread(gz, buffer, sizeof(buffer))) > 0) {
      text.append(buffer, static_cast<std::size_t>(got));
    }
    const bool bad = (got < 0);
    gzclose(gz);
    if (bad) throw ParseError(path + ": gzip decompression failed");
    std::istringstream in(text);
    return parse_svmlight_stream(in, path);
  }
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open");
  return parse_svmlight_stream(in, path);
}

void write_svmlight(const RankingDataset& data, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  char buffer[64];
  for (Index q = 0; q < data.num_queries(); ++q) {
    for (Index i = data.query_begin(q); i < data.query_begin(q) + data.query_size(q); ++i) {
      std::snprintf(buffer, sizeof(buffer), "%.17g", data.labels[i]);
      os << buffer << " qid:" << data.query_ids[static_cast<std::size_t>(q)];
      for (Index f = 0; f < data.num_features(); ++f) {
        if (data.features(i, f) != 0.0) {
          std::snprintf(buffer, sizeof(buffer), "%.17g", data.features(i, f));
          os << ' ' << (f + 1) << ':' << buffer;
        }
      }
      os << '\n';
    }
  }
  if (!os) throw std::runtime_error("write failed: " + path);
}

RankingDataset synthetic_dataset() {
  RankingDataset out;
  out.features = Matrix::Zero(5, 3);
  out.labels.resize(5);
  // Query 1: three one-hot documents labeled 3, 2, 1.
  out.features(0, 0) = 1.0;
  out.features(1, 1) = 1.0;
  out.features(2, 2) = 1.0;
  out.labels[0] = 3.0;
  out.labels[1] = 2.0;
  out.labels[2] = 1.0;
  // Query 2: the third and first feature vectors, labeled 3 and 2: the
  // queries disagree about the relative order of those two score values.
  out.features(3, 2) = 1.0;
  out.features(4, 0) = 1.0;
  out.labels[3] = 3.0;
  out.labels[4] = 2.0;
  out.query_offsets = {0, 3, 5};
  out.query_ids = {1, 2};
  return out;
}

Vector binarize_labels(ConstVectorRef labels) {
  Vector out(labels.size());
  for (Index i = 0; i < labels.size(); ++i) out[i] = labels[i] > 0.0 ? 1.0 : 0.0;
  return out;
}

RankingDataset binarize_labels(const RankingDataset& data) {
  RankingDataset out = data;
  out.labels = binarize_labels(data.labels);
  return out;
}

std::string dataset_summary(const RankingDataset& data) {
  std::ostringstream os;
  os << "queries=" << data.num_queries() << " docs=" << data.num_docs()
     << " features=" << data.num_features();
  if (data.num_docs() > 0) {
    os << " label_min=" << data.labels.minCoeff()
       << " label_max=" << data.labels.maxCoeff();
    Index largest = 0;
    for (Index q = 0; q < data.num_queries(); ++q) {
      largest = std::max(largest, data.query_size(q));
    }
    os << " max_query_docs=" << largest;
  }
  return os.str();
}

}  // namespace stochrank
