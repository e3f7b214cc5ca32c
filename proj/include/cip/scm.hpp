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

#pragma once

#include <cstddef>
#include <vector>

#include "cip/tensor.hpp"

namespace cip {

/// Sinusoidal encoding over token index, L x C row-major:
/// (i, 2j) -> sin(i / 10000^(2j/C)), (i, 2j+1) -> cos(i / 10000^(2j/C)).
/// C must be even.
std::vector<double> positional_encoding(std::size_t length, std::size_t channels);

struct ScoreOptions {
  bool use_pe = true;
  // Optional C x D query/key projections, stored as TokenMatrix (rows = C,
  // cols = D). Both or neither. Applied after the positional encoding.
  const TokenMatrix* query_proj = nullptr;
  const TokenMatrix* key_proj = nullptr;
  unsigned threads = 1;
};

/// Cross-scale attention of [adaptive; global; text] queries over detailed
/// keys. `matrix` is (L2+L3+T) x L1, row-stochastic; `weights` holds its
/// column means.
struct AttentionScores {
  std::size_t queries = 0;
  std::size_t keys = 0;
  std::vector<double> matrix;
  std::vector<double> weights;

  double at(std::size_t q, std::size_t k) const { return matrix[q * keys + k]; }
};

AttentionScores score(const TokenMatrix& detailed, const TokenMatrix& adaptive,
                      const TokenMatrix& global, const TokenMatrix& text,
                      const ScoreOptions& options = {});

struct CompressionResult {
  std::size_t original_length = 0;  // L1
  double drop_ratio = 0.0;
  std::vector<std::size_t> kept_indices;  // ascending
  TokenMatrix detailed;                   // kept rows, original order

  std::size_t kept() const { return kept_indices.size(); }
  double ratio() const {
    return static_cast<double>(kept_indices.size()) / static_cast<double>(original_length);
  }
};

/// K = max(1, round((1 - drop_ratio) * L1)).
std::size_t kept_count(std::size_t length, double drop_ratio);

/// Indices of the `k` largest weights (ties toward the smaller index),
/// returned in ascending index order.
std::vector<std::size_t> top_k_indices(const std::vector<double>& weights, std::size_t k);

CompressionResult compress(const TokenMatrix& detailed, const AttentionScores& scores,
                           double drop_ratio);

/// [compressed detailed; adaptive; global; text].
TokenMatrix assemble_llm_input(const CompressionResult& compressed,
                               const TokenMatrix& adaptive, const TokenMatrix& global,
                               const TokenMatrix& text);

/// Naive FastV-style comparison scorer. Runs `k_layer - 1` residual
/// self-attention layers with identity projections over the whole sequence,
/// then returns the column means of layer k's attention map restricted to the
/// first `visual_tokens` positions.
std::vector<double> fastv_baseline_score(const TokenMatrix& all_tokens,
                                         std::size_t visual_tokens, int k_layer = 2,
                                         bool use_pe = true);

}  // namespace cip
