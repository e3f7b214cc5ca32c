/* Copyright 2026 The CIP Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "cip/scm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cip/error.hpp"
#include "cip/parallel.hpp"

namespace cip {

namespace {

using Dense = std::vector<double>;  // row-major

Dense to_dense(const TokenMatrix& m) { return Dense(m.data().begin(), m.data().end()); }

void add_pe(Dense& x, std::size_t rows, std::size_t cols) {
  const auto pe = positional_encoding(rows, cols);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += pe[i];
}

Dense matmul(const Dense& a, std::size_t rows, std::size_t inner, const TokenMatrix& b) {
  const std::size_t out_cols = b.cols();
  Dense out(rows * out_cols, 0.0);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = 0; k < inner; ++k) {
      const double aik = a[i * inner + k];
      for (std::size_t j = 0; j < out_cols; ++j) out[i * out_cols + j] += aik * b(k, j);
    }
  return out;
}

// Row i of softmax(q k^T / sqrt(dim)) written to `out`.
void softmax_row(const double* q, const Dense& keys, std::size_t n_keys, std::size_t dim,
                 double* out) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  double mx = -INFINITY;
  for (std::size_t j = 0; j < n_keys; ++j) {
    const double* k = keys.data() + j * dim;
    double dot = 0.0;
    for (std::size_t d = 0; d < dim; ++d) dot += q[d] * k[d];
    out[j] = dot * scale;
    mx = std::max(mx, out[j]);
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < n_keys; ++j) {
    out[j] = std::exp(out[j] - mx);
    sum += out[j];
  }
  for (std::size_t j = 0; j < n_keys; ++j) out[j] /= sum;
}

Dense attention_map(const Dense& q, std::size_t n_q, const Dense& k, std::size_t n_k,
                    std::size_t dim, unsigned threads) {
  Dense attn(n_q * n_k);
  parallel_for(n_q, threads, [&](std::size_t i) {
    softmax_row(q.data() + i * dim, k, n_k, dim, attn.data() + i * n_k);
  });
  return attn;
}

Dense column_means(const Dense& attn, std::size_t n_q, std::size_t n_k, std::size_t n_cols,
                   unsigned threads) {
  Dense w(n_cols, 0.0);
  parallel_for(n_cols, threads, [&](std::size_t j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n_q; ++i) s += attn[i * n_k + j];
    w[j] = s / static_cast<double>(n_q);
  });
  return w;
}

}  // namespace

std::vector<double> positional_encoding(std::size_t length, std::size_t channels) {
  require(channels % 2 == 0, "positional encoding needs an even channel dim");
  std::vector<double> pe(length * channels);
  for (std::size_t j = 0; j < channels / 2; ++j) {
    const double freq =
        std::pow(10000.0, static_cast<double>(2 * j) / static_cast<double>(channels));
    for (std::size_t i = 0; i < length; ++i) {
      const double angle = static_cast<double>(i) / freq;
      pe[i * channels + 2 * j] = std::sin(angle);
      pe[i * channels + 2 * j + 1] = std::cos(angle);
    }
  }
  return pe;
}

AttentionScores score(const TokenMatrix& detailed, const TokenMatrix& adaptive,
                      const TokenMatrix& global, const TokenMatrix& text,
                      const ScoreOptions& options) {
  const std::size_t C = detailed.cols();
  for (const TokenMatrix* m : {&detailed, &adaptive, &global, &text}) {
    require(m->rows() >= 1, "score: empty token matrix");
    require(m->cols() == C, "score: channel dim mismatch");
    require(m->all_finite(), "score: non-finite input entry");
  }
  require((options.query_proj == nullptr) == (options.key_proj == nullptr),
          "score: query and key projections must be given together");

  const TokenMatrix* parts[] = {&adaptive, &global, &text};
  const TokenMatrix query = concat_rows(parts, TokenLevel::kText);
  const std::size_t n_q = query.rows();
  const std::size_t n_k = detailed.rows();

  Dense q = to_dense(query);
  Dense k = to_dense(detailed);
  if (options.use_pe) {
    add_pe(q, n_q, C);
    add_pe(k, n_k, C);
  }
  std::size_t dim = C;
  if (options.query_proj) {
    const TokenMatrix& wq = *options.query_proj;
    const TokenMatrix& wk = *options.key_proj;
    require(wq.rows() == C && wk.rows() == C, "score: projection input dim must equal C");
    require(wq.cols() == wk.cols(), "score: projection output dims differ");
    require(wq.all_finite() && wk.all_finite(), "score: non-finite projection entry");
    q = matmul(q, n_q, C, wq);
    k = matmul(k, n_k, C, wk);
    dim = wq.cols();
  }

  AttentionScores s;
  s.queries = n_q;
  s.keys = n_k;
  s.matrix = attention_map(q, n_q, k, n_k, dim, options.threads);
  s.weights = column_means(s.matrix, n_q, n_k, n_k, options.threads);
  return s;
}

std::size_t kept_count(std::size_t length, double drop_ratio) {
  require(drop_ratio >= 0.0 && drop_ratio < 1.0, "drop_ratio must be in [0, 1)");
  // Drop ratios are given as decimals, so (1 - 0.9) * 15 must round like
  // 1.5 even though the binary product is 1.4999999999999996.
  const double x = (1.0 - drop_ratio) * static_cast<double>(length);
  const double k = std::floor(x + 0.5 + 1e-9 * std::max(1.0, x));
  return std::max<std::size_t>(1, static_cast<std::size_t>(k));
}

std::vector<std::size_t> top_k_indices(const std::vector<double>& weights, std::size_t k) {
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  k = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (weights[a] != weights[b]) return weights[a] > weights[b];
                      return a < b;
                    });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

CompressionResult compress(const TokenMatrix& detailed, const AttentionScores& scores,
                           double drop_ratio) {
  require(scores.weights.size() == detailed.rows(),
          "compress: scores were not computed for this detailed matrix");
  CompressionResult r;
  r.original_length = detailed.rows();
  r.drop_ratio = drop_ratio;
  r.kept_indices = top_k_indices(scores.weights, kept_count(detailed.rows(), drop_ratio));
  std::vector<float> data;
  data.reserve(r.kept_indices.size() * detailed.cols());
  for (std::size_t idx : r.kept_indices) {
    auto row = detailed.row(idx);
    data.insert(data.end(), row.begin(), row.end());
  }
  r.detailed = TokenMatrix(r.kept_indices.size(), detailed.cols(), TokenLevel::kDetailed,
                           std::move(data));
  return r;
}

TokenMatrix assemble_llm_input(const CompressionResult& compressed,
                               const TokenMatrix& adaptive, const TokenMatrix& global,
                               const TokenMatrix& text) {
  require(text.rows() >= 1, "assemble: text must have at least one token");
  const TokenMatrix* parts[] = {&compressed.detailed, &adaptive, &global, &text};
  return concat_rows(parts, TokenLevel::kDetailed);
}

std::vector<double> fastv_baseline_score(const TokenMatrix& all_tokens,
                                         std::size_t visual_tokens, int k_layer,
                                         bool use_pe) {
  require(k_layer >= 1, "fastv: k_layer must be >= 1");
  require(all_tokens.all_finite(), "fastv: non-finite input entry");
  require(visual_tokens >= 1 && visual_tokens <= all_tokens.rows(),
          "fastv: visual token count out of range");
  const std::size_t n = all_tokens.rows();
  const std::size_t C = all_tokens.cols();
  Dense x = to_dense(all_tokens);
  if (use_pe) add_pe(x, n, C);
  for (int layer = 1; layer < k_layer; ++layer) {
    const Dense attn = attention_map(x, n, x, n, C, 1);
    Dense next = x;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double a = attn[i * n + j];
        for (std::size_t d = 0; d < C; ++d) next[i * C + d] += a * x[j * C + d];
      }
    x = std::move(next);
  }
  const Dense attn = attention_map(x, n, x, n, C, 1);
  return column_means(attn, n, n, visual_tokens, 1);
}

}  // namespace cip
