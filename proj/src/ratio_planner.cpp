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

#include "cip/ratio_planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "cip/error.hpp"

namespace cip {

namespace {

// Strict "a is a better pick than b" under the tie-break rule, given that
// their distances compare equal.
bool tie_break_prefers(const AspectRatio& a, const AspectRatio& b) {
  if (a.tile_count() != b.tile_count()) return a.tile_count() > b.tile_count();
  return a.cols > b.cols;
}

template <typename DistLess, typename DistEqual>
AspectRatio pick_closest(const std::vector<AspectRatio>& pool, DistLess less,
                         DistEqual equal) {
  if (pool.empty()) fail(ErrorCode::kEmptyPool, "closest_ratio: empty pool");
  AspectRatio best = pool.front();
  for (std::size_t i = 1; i < pool.size(); ++i) {
    const AspectRatio& cand = pool[i];
    if (less(cand, best) || (equal(cand, best) && tie_break_prefers(cand, best)))
      best = cand;
  }
  return best;
}

PlanLevel make_grid_level(LevelName name, const AspectRatio& grid,
                          int tile_side) {
  PlanLevel level;
  level.name = name;
  level.grid = grid;
  level.resized = {grid.cols * tile_side, grid.rows * tile_side};
  level.lattice_rows = grid.rows;
  level.lattice_cols = grid.cols;
  level.tiles = grid_tiles(grid, tile_side);
  return level;
}

void validate_plan_inputs(Dims input, int budget, int tile_side) {
  require(input.w >= 1 && input.h >= 1, "input dims must be positive");
  require(budget >= 1, "budget must be >= 1");
  require(tile_side >= 1, "tile_side must be >= 1");
  // Keeps every resized canvas extent within int range.
  require(static_cast<std::int64_t>(budget) * tile_side <= INT32_MAX,
          "budget * tile_side too large");
}

}  // namespace

std::string to_string(const AspectRatio& ar) {
  return std::to_string(ar.rows) + "x" + std::to_string(ar.cols);
}

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::kCip: return "cip";
    case Strategy::kDynamic: return "dynamic";
    case Strategy::kFixed: return "fixed";
    case Strategy::kOverlapping: return "overlapping";
    case Strategy::kMultiscaleFixed: return "multiscale_fixed";
  }
  return "?";
}

std::string_view to_string(LevelName l) {
  switch (l) {
    case LevelName::kDetailed: return "detailed";
    case LevelName::kAdaptive: return "adaptive";
    case LevelName::kGlobal: return "global";
  }
  return "?";
}

std::optional<Strategy> parse_strategy(std::string_view s) {
  for (Strategy v : {Strategy::kCip, Strategy::kDynamic, Strategy::kFixed,
                     Strategy::kOverlapping, Strategy::kMultiscaleFixed})
    if (to_string(v) == s) return v;
  return std::nullopt;
}

std::optional<LevelName> parse_level_name(std::string_view s) {
  for (LevelName v :
       {LevelName::kDetailed, LevelName::kAdaptive, LevelName::kGlobal})
    if (to_string(v) == s) return v;
  return std::nullopt;
}

int PyramidPlan::total_tiles() const {
  int n = 0;
  for (const auto& level : levels) n += static_cast<int>(level.tiles.size());
  return n;
}

const PlanLevel* PyramidPlan::find(LevelName name) const {
  for (const auto& level : levels)
    if (level.name == name) return &level;
  return nullptr;
}

std::vector<AspectRatio> generate_candidates(int budget) {
  require(budget >= 1, "budget must be >= 1");
  std::vector<AspectRatio> out;
  for (int rows = 1; rows <= budget; ++rows)
    for (int cols = 1; rows * cols <= budget; ++cols) out.push_back({rows, cols});
  return out;
}

RatioGroups group_candidates(const std::vector<AspectRatio>& candidates,
                             int budget, int detailed_min) {
  RatioGroups groups;
  groups.budget = budget;
  // 9- and 2-tile grids belong to no group.
  for (const auto& c : candidates) {
    const int n = c.tile_count();
    if (n >= detailed_min && n <= budget - 4) {
      groups.detailed.push_back(c);
    } else if (n >= kAdaptiveMinTiles && n <= kAdaptiveMaxTiles) {
      groups.adaptive.push_back(c);
    }
  }
  groups.global.push_back({1, 1});
  return groups;
}

AspectRatio closest_ratio(double target_ar,
                          const std::vector<AspectRatio>& pool) {
  require(target_ar > 0 && std::isfinite(target_ar),
          "target aspect ratio must be positive");
  auto dist = [&](const AspectRatio& a) { return std::abs(target_ar - a.value()); };
  return pick_closest(
      pool, [&](auto& a, auto& b) { return dist(a) < dist(b); },
      [&](auto& a, auto& b) { return dist(a) == dist(b); });
}

AspectRatio closest_ratio(Dims target, const std::vector<AspectRatio>& pool) {
  require(target.w >= 1 && target.h >= 1, "target dims must be positive");
  // |w/h - c/r| = |w*r - c*h| / (h*r); the common 1/h cancels when comparing.
  using i128 = __int128;
  auto num = [&](const AspectRatio& a) {
    const i128 d = static_cast<i128>(target.w) * a.rows -
                   static_cast<i128>(a.cols) * target.h;
    return d < 0 ? -d : d;
  };
  auto cmp = [&](const AspectRatio& a, const AspectRatio& b) {
    const i128 lhs = num(a) * b.rows;
    const i128 rhs = num(b) * a.rows;
    return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
  };
  return pick_closest(
      pool, [&](auto& a, auto& b) { return cmp(a, b) < 0; },
      [&](auto& a, auto& b) { return cmp(a, b) == 0; });
}

std::vector<AspectRatio> filter_adaptive(
    const AspectRatio& detailed, const std::vector<AspectRatio>& adaptive_pool) {
  std::vector<AspectRatio> out;
  for (const auto& a : adaptive_pool)
    if (detailed.rows % a.rows != 0 && detailed.cols % a.cols != 0)
      out.push_back(a);
  return out;
}

int coincidence_count_axis(int a, int b) {
  require(a >= 1 && b >= 1, "grid counts must be positive");
  // i/a == j/b with 0<i<a, 0<j<b has gcd(a,b)-1 solutions.
  return std::gcd(a, b) - 1;
}

int coincidence_count(const AspectRatio& a, const AspectRatio& b) {
  return coincidence_count_axis(a.cols, b.cols) +
         coincidence_count_axis(a.rows, b.rows);
}

std::vector<Rect> grid_tiles(const AspectRatio& grid, int tile_side) {
  std::vector<Rect> tiles;
  tiles.reserve(static_cast<std::size_t>(grid.tile_count()));
  for (int r = 0; r < grid.rows; ++r)
    for (int c = 0; c < grid.cols; ++c)
      tiles.push_back({static_cast<std::int64_t>(c) * tile_side,
                       static_cast<std::int64_t>(r) * tile_side, tile_side,
                       tile_side});
  return tiles;
}

std::vector<std::int64_t> strided_origins(std::int64_t extent, int tile_side,
                                          int stride) {
  require(stride >= 1, "stride must be >= 1");
  require(extent >= tile_side, "extent smaller than tile");
  std::vector<std::int64_t> origins;
  std::int64_t pos = 0;
  for (; pos + tile_side <= extent; pos += stride) origins.push_back(pos);
  if (origins.back() + tile_side < extent) origins.push_back(extent - tile_side);
  return origins;
}

PyramidPlan plan_cip(Dims input, int budget, int tile_side, int detailed_min) {
  validate_plan_inputs(input, budget, tile_side);
  require(detailed_min >= 1, "detailed_min must be >= 1");
  const RatioGroups groups =
      group_candidates(generate_candidates(budget), budget, detailed_min);
  if (groups.detailed.empty())
    fail(ErrorCode::kBudgetTooSmall, "budget too small for detailed group");

  const AspectRatio detailed = closest_ratio(input, groups.detailed);

  // The adaptive pick must also fit in what the detailed grid and the global
  // tile leave of the budget. detailed <= budget-4, so 3-tile grids always fit.
  const int remaining = budget - detailed.tile_count() - 1;
  std::vector<AspectRatio> pool;
  for (const auto& a : groups.adaptive)
    if (a.tile_count() <= remaining) pool.push_back(a);

  PyramidPlan plan;
  plan.strategy = Strategy::kCip;
  plan.budget = budget;
  plan.tile_side = tile_side;
  plan.input = input;

  AspectRatio adaptive;
  const auto filtered = filter_adaptive(detailed, pool);
  if (!filtered.empty()) {
    adaptive = closest_ratio(input, filtered);
  } else {
    int best = INT32_MAX;
    for (const auto& a : pool) best = std::min(best, coincidence_count(a, detailed));
    std::vector<AspectRatio> least;
    for (const auto& a : pool)
      if (coincidence_count(a, detailed) == best) least.push_back(a);
    adaptive = closest_ratio(input, least);
    plan.adaptive_fallback = true;
  }

  plan.levels.push_back(make_grid_level(LevelName::kDetailed, detailed, tile_side));
  plan.levels.push_back(make_grid_level(LevelName::kAdaptive, adaptive, tile_side));
  plan.levels.push_back(make_grid_level(LevelName::kGlobal, {1, 1}, tile_side));
  return plan;
}

PyramidPlan plan_baseline(Strategy strategy, Dims input, int budget,
                          int tile_side, const BaselineOptions& options) {
  validate_plan_inputs(input, budget, tile_side);
  PyramidPlan plan;
  plan.strategy = strategy;
  plan.budget = budget;
  plan.tile_side = tile_side;
  plan.input = input;

  switch (strategy) {
    case Strategy::kDynamic: {
      const auto grid = closest_ratio(input, generate_candidates(budget));
      plan.levels.push_back(make_grid_level(LevelName::kDetailed, grid, tile_side));
      break;
    }
    case Strategy::kFixed: {
      const auto& grid = options.fixed_grid;
      require(grid.rows >= 1 && grid.cols >= 1, "fixed grid must be positive");
      if (grid.tile_count() > budget)
        fail(ErrorCode::kBudgetTooSmall, "budget too small for fixed grid " + to_string(grid));
      plan.levels.push_back(make_grid_level(LevelName::kDetailed, grid, tile_side));
      break;
    }
    case Strategy::kOverlapping: {
      const double f = options.overlap_frac;
      require(f >= 0.0 && f < 1.0, "overlap_frac must be in [0, 1)");
      const auto grid = closest_ratio(input, generate_candidates(budget));
      const int overlap = static_cast<int>(std::floor(f * tile_side));
      const int stride = tile_side - overlap;
      PlanLevel level;
      level.name = LevelName::kDetailed;
      level.grid = grid;
      level.resized = {grid.cols * tile_side, grid.rows * tile_side};
      const auto xs = strided_origins(level.resized.w, tile_side, stride);
      const auto ys = strided_origins(level.resized.h, tile_side, stride);
      level.lattice_rows = static_cast<int>(ys.size());
      level.lattice_cols = static_cast<int>(xs.size());
      for (auto y : ys)
        for (auto x : xs) level.tiles.push_back({x, y, tile_side, tile_side});
      plan.levels.push_back(std::move(level));
      break;
    }
    case Strategy::kMultiscaleFixed: {
      const auto& fine = options.fixed_grid;
      const auto& coarse = options.multiscale_coarse;
      require(fine.rows >= 1 && fine.cols >= 1 && coarse.rows >= 1 && coarse.cols >= 1,
              "multiscale grids must be positive");
      if (fine.tile_count() + coarse.tile_count() > budget)
        fail(ErrorCode::kBudgetTooSmall, "budget too small for multiscale grids");
      plan.levels.push_back(make_grid_level(LevelName::kDetailed, fine, tile_side));
      const LevelName coarse_name = coarse == AspectRatio{1, 1}
                                        ? LevelName::kGlobal
                                        : LevelName::kAdaptive;
      plan.levels.push_back(make_grid_level(coarse_name, coarse, tile_side));
      break;
    }
    case Strategy::kCip:
      return plan_cip(input, budget, tile_side);
  }
  return plan;
}

PyramidPlan make_plan(Strategy strategy, Dims input, int budget, int tile_side,
                      const BaselineOptions& options) {
  if (strategy == Strategy::kCip) return plan_cip(input, budget, tile_side);
  return plan_baseline(strategy, input, budget, tile_side, options);
}

}  // namespace cip
