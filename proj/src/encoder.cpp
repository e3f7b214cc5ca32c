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

#include "cip/encoder.hpp"

#include <cctype>

#include "cip/error.hpp"
#include "cip/parallel.hpp"
#include "cip/rng.hpp"

namespace cip {

namespace {

constexpr std::uint64_t kProjectionStream = 0x5eed0f1a11e5ull;
constexpr std::uint64_t kTextStream = 0x7e47ull;

// C x F projection, row-major, drawn uniform in [-1, 1).
std::vector<double> projection(int channels, int features, std::uint64_t seed) {
  SplitMix64 rng(seed ^ kProjectionStream);
  std::vector<double> w(static_cast<std::size_t>(channels) * features);
  for (double& v : w) v = rng.next_signed();
  return w;
}

}  // namespace

int tokens_per_tile(int tile_side, const EncoderConfig& cfg) {
  require(cfg.patch >= 1 && cfg.downsample >= 1, "patch and downsample must be >= 1");
  const int block = cfg.patch * cfg.downsample;
  require(tile_side % block == 0,
          "tile_side " + std::to_string(tile_side) + " not divisible by patch*downsample " +
              std::to_string(block));
  const int side = tile_side / block;
  return side * side;
}

TokenLevel token_level_for(LevelName level) {
  switch (level) {
    case LevelName::kDetailed: return TokenLevel::kDetailed;
    case LevelName::kAdaptive: return TokenLevel::kAdaptive;
    case LevelName::kGlobal: return TokenLevel::kGlobal;
  }
  return TokenLevel::kDetailed;
}

TokenMatrix encode_tiles(const TileSet& tiles, const EncoderConfig& cfg,
                         unsigned threads) {
  require(!tiles.tiles.empty(), "encode_tiles: empty tile set");
  require(cfg.channels >= 1, "channels must be >= 1");
  const int tile_side = tiles.tiles.front().image.width();
  for (const Tile& t : tiles.tiles)
    require(t.image.width() == tile_side && t.image.height() == tile_side,
            "encode_tiles: tiles must be square and equally sized");
  const int per_tile = tokens_per_tile(tile_side, cfg);
  const int grid_side = tile_side / (cfg.patch * cfg.downsample);
  const int merge = cfg.downsample;
  const int features = 3 * merge * merge;
  const auto weights = projection(cfg.channels, features, cfg.seed);
  const double patch_area = static_cast<double>(cfg.patch) * cfg.patch;

  const std::size_t C = static_cast<std::size_t>(cfg.channels);
  TokenMatrix out(tiles.tiles.size() * static_cast<std::size_t>(per_tile), C,
                  token_level_for(tiles.level));

  parallel_for(tiles.tiles.size(), threads, [&](std::size_t ti) {
    const RasterImage& img = tiles.tiles[ti].image;
    std::vector<double> feat(static_cast<std::size_t>(features));
    for (int gy = 0; gy < grid_side; ++gy) {
      for (int gx = 0; gx < grid_side; ++gx) {
        // Patch means for the merge x merge patches of this token, row-major,
        // scaled to [0, 1].
        std::size_t f = 0;
        for (int my = 0; my < merge; ++my) {
          for (int mx = 0; mx < merge; ++mx) {
            const int x0 = (gx * merge + mx) * cfg.patch;
            const int y0 = (gy * merge + my) * cfg.patch;
            std::uint64_t sum[3] = {0, 0, 0};
            for (int y = y0; y < y0 + cfg.patch; ++y) {
              const std::uint8_t* p = img.pixel(x0, y);
              for (int x = 0; x < cfg.patch; ++x, p += 3) {
                sum[0] += p[0];
                sum[1] += p[1];
                sum[2] += p[2];
              }
            }
            for (int c = 0; c < 3; ++c)
              feat[f++] = static_cast<double>(sum[c]) / patch_area / 255.0;
          }
        }
        const std::size_t token =
            ti * static_cast<std::size_t>(per_tile) + static_cast<std::size_t>(gy) * grid_side + gx;
        auto row = out.row(token);
        for (std::size_t j = 0; j < C; ++j) {
          const double* w = weights.data() + j * features;
          double acc = 0.0;
          for (int k = 0; k < features; ++k) acc += w[k] * feat[static_cast<std::size_t>(k)];
          row[j] = static_cast<float>(acc / features);
        }
      }
    }
  });
  return out;
}

TokenMatrix embed_text(std::string_view prompt, int channels, std::uint64_t seed) {
  require(channels >= 1, "channels must be >= 1");
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < prompt.size()) {
    while (i < prompt.size() && std::isspace(static_cast<unsigned char>(prompt[i]))) ++i;
    const std::size_t start = i;
    while (i < prompt.size() && !std::isspace(static_cast<unsigned char>(prompt[i]))) ++i;
    if (i > start) words.push_back(prompt.substr(start, i - start));
  }
  require(!words.empty(), "embed_text: empty prompt");

  const std::uint64_t salt = SplitMix64(seed ^ kTextStream).next();
  const std::size_t C = static_cast<std::size_t>(channels);
  TokenMatrix out(words.size(), C, TokenLevel::kText);
  for (std::size_t w = 0; w < words.size(); ++w) {
    SplitMix64 rng(fnv1a64(words[w]) ^ salt);
    auto row = out.row(w);
    for (std::size_t j = 0; j < C; ++j) row[j] = static_cast<float>(rng.next_signed());
  }
  return out;
}

}  // namespace cip
