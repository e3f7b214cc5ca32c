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
#include <string>
#include <vector>

#include "cip/ratio_planner.hpp"

namespace cip {

/// Row-major interleaved 8-bit RGB raster.
class RasterImage {
 public:
  static constexpr int kChannels = 3;

  RasterImage() = default;
  RasterImage(int width, int height);  // zero-filled
  RasterImage(int width, int height, std::vector<std::uint8_t> samples);

  int width() const { return width_; }
  int height() const { return height_; }
  Dims dims() const { return {width_, height_}; }
  bool empty() const { return samples_.empty(); }

  std::uint8_t* pixel(int x, int y) {
    return samples_.data() + (static_cast<std::size_t>(y) * width_ + x) * kChannels;
  }
  const std::uint8_t* pixel(int x, int y) const {
    return samples_.data() + (static_cast<std::size_t>(y) * width_ + x) * kChannels;
  }

  const std::vector<std::uint8_t>& samples() const { return samples_; }
  std::vector<std::uint8_t>& samples() { return samples_; }

  bool operator==(const RasterImage&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> samples_;
};

struct Tile {
  int index = 0;
  int row = 0;
  int col = 0;
  Rect source;  // in the resized level canvas
  RasterImage image;
};

struct TileSet {
  LevelName level = LevelName::kDetailed;
  AspectRatio grid;
  int lattice_rows = 1;
  int lattice_cols = 1;
  std::vector<Tile> tiles;
};

/// Bilinear resize with half-pixel centers and round-half-to-even, evaluated
/// in exact integer arithmetic so output bytes do not depend on the platform.
RasterImage resize(const RasterImage& img, Dims target);

/// Copies `rect` out of `img`; the rect must lie inside the image.
RasterImage crop(const RasterImage& img, const Rect& rect);

/// One TileSet per plan level, in plan order. Levels are independent and may
/// be processed on `threads` workers; the result does not depend on it.
std::vector<TileSet> crop_tiles(const RasterImage& img, const PyramidPlan& plan,
                                unsigned threads = 1);

/// Pastes a tile set back onto a canvas of the level's resized dims.
RasterImage reassemble(const TileSet& set, Dims canvas);

/// RGB image file I/O. Reads PNG or JPEG (by signature); alpha is dropped.
RasterImage load_image(const std::string& path);
void save_png(const RasterImage& img, const std::string& path);

}  // namespace cip
