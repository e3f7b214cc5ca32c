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
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cip {

enum class TokenLevel : std::uint8_t {
  kDetailed = 0,
  kAdaptive = 1,
  kGlobal = 2,
  kText = 3,
};

std::string_view to_string(TokenLevel level);
std::optional<TokenLevel> parse_token_level(std::string_view s);

/// L x C float32 token embeddings, row-major, tagged with the pyramid level
/// (or text) they came from.
class TokenMatrix {
 public:
  TokenMatrix() = default;
  TokenMatrix(std::size_t rows, std::size_t cols, TokenLevel level);
  TokenMatrix(std::size_t rows, std::size_t cols, TokenLevel level,
              std::vector<float> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  TokenLevel level() const { return level_; }
  void set_level(TokenLevel level) { level_ = level; }

  std::span<float> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const float> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  float operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  float& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  const std::vector<float>& data() const { return data_; }
  std::vector<float>& data() { return data_; }

  bool all_finite() const;

  bool operator==(const TokenMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  TokenLevel level_ = TokenLevel::kDetailed;
  std::vector<float> data_;
};

/// Row concatenation; all inputs must share the channel dim.
TokenMatrix concat_rows(std::span<const TokenMatrix* const> parts, TokenLevel level);

// CIPT binary format:
//   "CIPT" | u32 rank (=2) | u32 L | u32 C | L*C float32 | u8 level tag
// All integers and floats little-endian.
std::vector<std::uint8_t> encode_cipt(const TokenMatrix& m);
TokenMatrix decode_cipt(std::span<const std::uint8_t> bytes);
void write_cipt(const TokenMatrix& m, const std::string& path);
TokenMatrix read_cipt(const std::string& path);

}  // namespace cip
