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

#include <cstdint>
#include <string_view>

#include "cip/tensor.hpp"
#include "cip/tiler.hpp"

namespace cip {

// Deterministic stand-in for vision encoder + MLP. Only the token shapes and
// reproducibility are meaningful; the embeddings carry no learned semantics.
struct EncoderConfig {
  int patch = 14;
  int downsample = 2;
  int channels = 64;
  std::uint64_t seed = 0;
};

int tokens_per_tile(int tile_side, const EncoderConfig& cfg);

/// Encodes every tile of `tiles`, concatenated in grid order. Each token
/// averages the RGB of one patch x patch block for each of the downsample^2
/// patches it merges, then applies a seed-derived linear map to C dims that
/// is shared by all tiles.
TokenMatrix encode_tiles(const TileSet& tiles, const EncoderConfig& cfg,
                         unsigned threads = 1);

/// One token per whitespace-delimited word. Each row depends only on the word
/// bytes and the seed.
TokenMatrix embed_text(std::string_view prompt, int channels, std::uint64_t seed);

TokenLevel token_level_for(LevelName level);

}  // namespace cip
