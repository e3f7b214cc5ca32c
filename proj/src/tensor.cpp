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

#include "cip/tensor.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "cip/error.hpp"

namespace cip {

namespace {

constexpr char kMagic[4] = {'C', 'I', 'P', 'T'};
constexpr std::size_t kHeaderBytes = 16;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

std::string_view to_string(TokenLevel level) {
  switch (level) {
    case TokenLevel::kDetailed: return "detailed";
    case TokenLevel::kAdaptive: return "adaptive";
    case TokenLevel::kGlobal: return "global";
    case TokenLevel::kText: return "text";
  }
  return "?";
}

std::optional<TokenLevel> parse_token_level(std::string_view s) {
  for (TokenLevel v : {TokenLevel::kDetailed, TokenLevel::kAdaptive,
                       TokenLevel::kGlobal, TokenLevel::kText})
    if (to_string(v) == s) return v;
  return std::nullopt;
}

TokenMatrix::TokenMatrix(std::size_t rows, std::size_t cols, TokenLevel level)
    : rows_(rows), cols_(cols), level_(level), data_(rows * cols, 0.0f) {
  require(rows >= 1 && cols >= 1, "token matrix dims must be positive");
}

TokenMatrix::TokenMatrix(std::size_t rows, std::size_t cols, TokenLevel level,
                         std::vector<float> data)
    : rows_(rows), cols_(cols), level_(level), data_(std::move(data)) {
  require(rows >= 1 && cols >= 1, "token matrix dims must be positive");
  require(data_.size() == rows * cols, "token matrix data size mismatch");
}

bool TokenMatrix::all_finite() const {
  for (float v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

TokenMatrix concat_rows(std::span<const TokenMatrix* const> parts, TokenLevel level) {
  require(!parts.empty(), "concat_rows: no inputs");
  const std::size_t c = parts.front()->cols();
  std::size_t rows = 0;
  for (const TokenMatrix* p : parts) {
    require(p->cols() == c, "concat_rows: channel dim mismatch");
    rows += p->rows();
  }
  std::vector<float> data;
  data.reserve(rows * c);
  for (const TokenMatrix* p : parts)
    data.insert(data.end(), p->data().begin(), p->data().end());
  return TokenMatrix(rows, c, level, std::move(data));
}

std::vector<std::uint8_t> encode_cipt(const TokenMatrix& m) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + m.data().size() * 4 + 1);
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  put_u32(out, 2);
  put_u32(out, static_cast<std::uint32_t>(m.rows()));
  put_u32(out, static_cast<std::uint32_t>(m.cols()));
  for (float v : m.data()) put_u32(out, std::bit_cast<std::uint32_t>(v));
  out.push_back(static_cast<std::uint8_t>(m.level()));
  return out;
}

TokenMatrix decode_cipt(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderBytes || std::memcmp(bytes.data(), kMagic, 4) != 0)
    fail(ErrorCode::kFormat, "CIPT: bad magic");
  if (get_u32(bytes.data() + 4) != 2) fail(ErrorCode::kFormat, "CIPT: rank must be 2");
  const std::uint64_t rows = get_u32(bytes.data() + 8);
  const std::uint64_t cols = get_u32(bytes.data() + 12);
  if (rows == 0 || cols == 0) fail(ErrorCode::kFormat, "CIPT: zero dimension");
  const std::uint64_t payload = rows * cols * 4;
  if (bytes.size() != kHeaderBytes + payload + 1)
    fail(ErrorCode::kFormat, "CIPT: size does not match header dims");
  const std::uint8_t tag = bytes.back();
  if (tag > 3) fail(ErrorCode::kFormat, "CIPT: unknown level tag " + std::to_string(tag));
  std::vector<float> data(rows * cols);
  const std::uint8_t* p = bytes.data() + kHeaderBytes;
  for (std::size_t i = 0; i < data.size(); ++i, p += 4)
    data[i] = std::bit_cast<float>(get_u32(p));
  return TokenMatrix(rows, cols, static_cast<TokenLevel>(tag), std::move(data));
}

void write_cipt(const TokenMatrix& m, const std::string& path) {
  const auto bytes = encode_cipt(m);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::kIo, "write failed: " + path);
}

TokenMatrix read_cipt(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_cipt(bytes);
}

}  // namespace cip
