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

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cip {

/// Grid of tiles: `rows` along the image height, `cols` along its width.
struct AspectRatio {
  int rows = 1;
  int cols = 1;

  int tile_count() const { return rows * cols; }
  double value() const { return static_cast<double>(cols) / rows; }

  auto operator<=>(const AspectRatio&) const = default;
};

std::string to_string(const AspectRatio& ar);  // "RxC"

struct RatioGroups {
  std::vector<AspectRatio> detailed;
  std::vector<AspectRatio> adaptive;
  std::vector<AspectRatio> global;  // always {1x1}
  int budget = 0;
};

struct Dims {
  int w = 0;
  int h = 0;
  auto operator<=>(const Dims&) const = default;
};

struct Rect {
  std::int64_t x = 0;
  std::int64_t y = 0;
  std::int64_t w = 0;
  std::int64_t h = 0;
  auto operator<=>(const Rect&) const = default;
};

enum class Strategy { kCip, kDynamic, kFixed, kOverlapping, kMultiscaleFixed };
enum class LevelName { kDetailed, kAdaptive, kGlobal };

std::string_view to_string(Strategy s);
std::string_view to_string(LevelName l);
std::optional<Strategy> parse_strategy(std::string_view s);
std::optional<LevelName> parse_level_name(std::string_view s);

struct PlanLevel {
  LevelName name = LevelName::kDetailed;
  AspectRatio grid;
  Dims resized;
  // Tile lattice shape. Equals `grid` except for overlapping plans, where the
  // stride is shorter than the tile side and more tiles fit per axis.
  int lattice_rows = 1;
  int lattice_cols = 1;
  std::vector<Rect> tiles;  // row-major over the lattice
};

struct PyramidPlan {
  Strategy strategy = Strategy::kCip;
  int budget = 0;
  int tile_side = 448;
  Dims input;
  std::vector<PlanLevel> levels;
  // Set for CIP plans when every adaptive candidate was removed by the
  // divisibility filter and the coincidence fallback picked the grid.
  bool adaptive_fallback = false;

  int total_tiles() const;
  const PlanLevel* find(LevelName name) const;
};

struct BaselineOptions {
  double overlap_frac = 0.5;
  AspectRatio fixed_grid{3, 3};
  AspectRatio multiscale_coarse{1, 1};
};

inline constexpr int kDefaultBudget = 24;
inline constexpr int kDefaultTileSide = 448;
inline constexpr int kDefaultDetailedMin = 10;
inline constexpr int kAdaptiveMinTiles = 3;
inline constexpr int kAdaptiveMaxTiles = 8;

/// All grids with 1 <= rows*cols <= budget, ordered by (rows, cols).
std::vector<AspectRatio> generate_candidates(int budget);

RatioGroups group_candidates(const std::vector<AspectRatio>& candidates,
                             int budget,
                             int detailed_min = kDefaultDetailedMin);

/// Closest grid by |target - cols/rows|. Ties go to the larger tile count,
/// then the larger column count. Throws kEmptyPool on an empty pool.
AspectRatio closest_ratio(double target_ar,
                          const std::vector<AspectRatio>& pool);

/// Same selection rule with an exact rational target `w / h`, so ties that
/// only exist in exact arithmetic are resolved by the tie-break and not by
/// floating-point noise.
AspectRatio closest_ratio(Dims target, const std::vector<AspectRatio>& pool);

/// Keeps adaptive candidates whose rows do not divide detailed.rows and whose
/// cols do not divide detailed.cols.
std::vector<AspectRatio> filter_adaptive(
    const AspectRatio& detailed, const std::vector<AspectRatio>& adaptive_pool);

/// Shared interior line positions on one axis between an `a`-way and a
/// `b`-way split of the unit interval.
int coincidence_count_axis(int a, int b);

/// Shared interior grid lines of two grids, vertical plus horizontal.
int coincidence_count(const AspectRatio& a, const AspectRatio& b);

PyramidPlan plan_cip(Dims input, int budget, int tile_side = kDefaultTileSide,
                     int detailed_min = kDefaultDetailedMin);

PyramidPlan plan_baseline(Strategy strategy, Dims input, int budget,
                          int tile_side = kDefaultTileSide,
                          const BaselineOptions& options = {});

/// Dispatches to plan_cip or plan_baseline.
PyramidPlan make_plan(Strategy strategy, Dims input, int budget,
                      int tile_side = kDefaultTileSide,
                      const BaselineOptions& options = {});

/// Row-major non-overlapping tiles of a rows x cols grid.
std::vector<Rect> grid_tiles(const AspectRatio& grid, int tile_side);

/// Tile origins along one axis of `extent` px with the given stride; the
/// last tile is flushed to the far edge when the stride does not land on it.
std::vector<std::int64_t> strided_origins(std::int64_t extent, int tile_side,
                                          int stride);

}  // namespace cip
