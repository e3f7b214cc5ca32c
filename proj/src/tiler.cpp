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

#include "cip/tiler.hpp"

#include <algorithm>
#include <cstring>

#include "cip/error.hpp"
#include "cip/parallel.hpp"

namespace cip {

namespace {

constexpr int kMaxExtent = 1 << 24;

struct AxisTap {
  int i0 = 0;
  int i1 = 0;
  std::int64_t w0 = 0;
  std::int64_t w1 = 0;
};

// Source taps for every output coordinate. The half-pixel source coordinate
// is ((2x+1)*src - dst) / (2*dst); weights are its integer numerators.
std::vector<AxisTap> axis_taps(int src, int dst) {
  const std::int64_t den = 2 * static_cast<std::int64_t>(dst);
  std::vector<AxisTap> taps(static_cast<std::size_t>(dst));
  for (int x = 0; x < dst; ++x) {
    const std::int64_t num = (2 * static_cast<std::int64_t>(x) + 1) * src - dst;
    AxisTap t;
    std::int64_t frac = 0;
    if (num > 0) {
      t.i0 = static_cast<int>(num / den);
      frac = num % den;
    }
    if (t.i0 >= src - 1) {
      t.i0 = src - 1;
      frac = 0;
    }
    t.i1 = std::min(t.i0 + 1, src - 1);
    t.w0 = den - frac;
    t.w1 = frac;
    taps[static_cast<std::size_t>(x)] = t;
  }
  return taps;
}

std::uint8_t round_half_even(std::int64_t value, std::int64_t denom) {
  std::int64_t q = value / denom;
  const std::int64_t r2 = 2 * (value % denom);
  if (r2 > denom || (r2 == denom && (q & 1))) ++q;
  return static_cast<std::uint8_t>(q);
}

}  // namespace

RasterImage::RasterImage(int width, int height)
    : width_(width),
      height_(height),
      samples_(static_cast<std::size_t>(width) * height * kChannels, 0) {
  require(width >= 1 && height >= 1, "image dims must be positive");
}

RasterImage::RasterImage(int width, int height, std::vector<std::uint8_t> samples)
    : width_(width), height_(height), samples_(std::move(samples)) {
  require(width >= 1 && height >= 1, "image dims must be positive");
  require(samples_.size() == static_cast<std::size_t>(width) * height * kChannels,
          "sample buffer length does not match dims");
}

RasterImage resize(const RasterImage& img, Dims target) {
  require(!img.empty(), "resize: empty source image");
  require(target.w >= 1 && target.h >= 1, "resize: target dims must be positive");
  require(target.w <= kMaxExtent && target.h <= kMaxExtent &&
              img.width() <= kMaxExtent && img.height() <= kMaxExtent,
          "resize: extent too large");
  if (target == img.dims()) return img;

  const auto xt = axis_taps(img.width(), target.w);
  const auto yt = axis_taps(img.height(), target.h);
  const std::int64_t denom =
      (2 * static_cast<std::int64_t>(target.w)) * (2 * static_cast<std::int64_t>(target.h));

  RasterImage out(target.w, target.h);
  for (int y = 0; y < target.h; ++y) {
    const AxisTap& ty = yt[static_cast<std::size_t>(y)];
    std::uint8_t* dst = out.pixel(0, y);
    for (int x = 0; x < target.w; ++x) {
      const AxisTap& tx = xt[static_cast<std::size_t>(x)];
      const std::uint8_t* p00 = img.pixel(tx.i0, ty.i0);
      const std::uint8_t* p01 = img.pixel(tx.i1, ty.i0);
      const std::uint8_t* p10 = img.pixel(tx.i0, ty.i1);
      const std::uint8_t* p11 = img.pixel(tx.i1, ty.i1);
      for (int c = 0; c < RasterImage::kChannels; ++c) {
        const std::int64_t top = tx.w0 * p00[c] + tx.w1 * p01[c];
        const std::int64_t bottom = tx.w0 * p10[c] + tx.w1 * p11[c];
        *dst++ = round_half_even(ty.w0 * top + ty.w1 * bottom, denom);
      }
    }
  }
  return out;
}

RasterImage crop(const RasterImage& img, const Rect& rect) {
  require(rect.w >= 1 && rect.h >= 1 && rect.x >= 0 && rect.y >= 0 &&
              rect.x + rect.w <= img.width() && rect.y + rect.h <= img.height(),
          "crop: rect outside image");
  RasterImage out(static_cast<int>(rect.w), static_cast<int>(rect.h));
  const std::size_t row_bytes = static_cast<std::size_t>(rect.w) * RasterImage::kChannels;
  for (std::int64_t r = 0; r < rect.h; ++r)
    std::memcpy(out.pixel(0, static_cast<int>(r)),
                img.pixel(static_cast<int>(rect.x), static_cast<int>(rect.y + r)),
                row_bytes);
  return out;
}

std::vector<TileSet> crop_tiles(const RasterImage& img, const PyramidPlan& plan,
                                unsigned threads) {
  require(img.dims() == plan.input,
          "crop_tiles: plan was made for " + std::to_string(plan.input.w) + "x" +
              std::to_string(plan.input.h) + " but image is " +
              std::to_string(img.width()) + "x" + std::to_string(img.height()));
  std::vector<TileSet> sets(plan.levels.size());
  for (std::size_t li = 0; li < plan.levels.size(); ++li) {
    const PlanLevel& level = plan.levels[li];
    const RasterImage canvas = resize(img, level.resized);
    TileSet& set = sets[li];
    set.level = level.name;
    set.grid = level.grid;
    set.lattice_rows = level.lattice_rows;
    set.lattice_cols = level.lattice_cols;
    set.tiles.resize(level.tiles.size());
    parallel_for(level.tiles.size(), threads, [&](std::size_t i) {
      Tile& t = set.tiles[i];
      t.index = static_cast<int>(i);
      t.row = static_cast<int>(i) / level.lattice_cols;
      t.col = static_cast<int>(i) % level.lattice_cols;
      t.source = level.tiles[i];
      t.image = crop(canvas, t.source);
    });
  }
  return sets;
}

RasterImage reassemble(const TileSet& set, Dims canvas) {
  RasterImage out(canvas.w, canvas.h);
  for (const Tile& t : set.tiles) {
    require(t.source.x + t.source.w <= canvas.w && t.source.y + t.source.h <= canvas.h,
            "reassemble: tile outside canvas");
    const std::size_t row_bytes =
        static_cast<std::size_t>(t.source.w) * RasterImage::kChannels;
    for (int r = 0; r < t.image.height(); ++r)
      std::memcpy(out.pixel(static_cast<int>(t.source.x), static_cast<int>(t.source.y) + r),
                  t.image.pixel(0, r), row_bytes);
  }
  return out;
}

}  // namespace cip
