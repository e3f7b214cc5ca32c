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
#include <string_view>
#include <vector>

#include "cip/ratio_planner.hpp"

namespace cip {

struct Box {
  int id = 0;
  std::int64_t x = 0;
  std::int64_t y = 0;
  std::int64_t w = 0;
  std::int64_t h = 0;
  bool operator==(const Box&) const = default;
};

struct SceneSpec {
  Dims canvas;
  std::vector<Box> objects;
  std::uint64_t seed = 0;
  bool operator==(const SceneSpec&) const = default;
};

struct SizeRange {
  int min = 20;
  int max = 60;
};

/// `n_objects` boxes with side lengths uniform in the size range and origins
/// uniform over the positions that keep the box inside the canvas.
SceneSpec generate_scene(Dims canvas, int n_objects, SizeRange sizes, std::uint64_t seed);

/// True iff an interior line of `grid`, after mapping the box from canvas to
/// resized coordinates, passes strictly through the box interior. Touching a
/// box edge is not a cut.
bool is_cut(const Box& box, const AspectRatio& grid, Dims canvas, Dims resized);

/// Level-aware variant. Grid levels use is_cut; overlapping levels count a
/// box as cut when no single tile contains it.
bool is_cut(const Box& box, const PlanLevel& level, Dims canvas);

struct StrategySpec {
  Strategy strategy = Strategy::kCip;
  BaselineOptions options;
  std::string label;
};

/// "cip", "dynamic", "fixed", "fixed:RxC", "overlapping", "overlapping:F",
/// "multiscale_fixed", "multiscale_fixed:RxC". Throws on anything else.
StrategySpec parse_strategy_spec(std::string_view text);
std::vector<StrategySpec> parse_strategy_list(std::string_view csv);

struct LevelCutStats {
  LevelName level = LevelName::kDetailed;
  AspectRatio grid;
  std::int64_t cut = 0;
};

struct StrategyReport {
  std::string label;
  Strategy strategy = Strategy::kCip;
  std::vector<LevelCutStats> levels;
  std::int64_t total = 0;
  std::int64_t cut_all_levels = 0;      // cut at every level
  std::int64_t cut_all_but_global = 0;  // cut at every non-global level

  double cut_rate() const;
  double complementarity_rate() const;
  double level_rate(std::size_t i) const;
  double mean_cut_per_level() const;
};

// Cut counts are exact; rates are count / total (0 for an empty scene).
struct SawtoothReport {
  Dims canvas;
  std::int64_t objects = 0;
  int budget = 0;
  int tile_side = 0;
  std::vector<StrategyReport> strategies;
};

SawtoothReport analyze(const SceneSpec& scene, const std::vector<StrategySpec>& strategies,
                       int budget, int tile_side, unsigned threads = 1);

std::string report_to_csv(const SawtoothReport& report);

}  // namespace cip
