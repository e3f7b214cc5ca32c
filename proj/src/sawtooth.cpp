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

#include "cip/sawtooth.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include "cip/error.hpp"
#include "cip/parallel.hpp"
#include "cip/rng.hpp"

namespace cip {

namespace {

using i128 = __int128;

double rate(std::int64_t num, std::int64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

AspectRatio parse_grid(std::string_view s) {
  const auto x = s.find('x');
  require(x != std::string_view::npos, "grid must look like RxC: " + std::string(s));
  AspectRatio g;
  auto r1 = std::from_chars(s.data(), s.data() + x, g.rows);
  auto r2 = std::from_chars(s.data() + x + 1, s.data() + s.size(), g.cols);
  require(r1.ec == std::errc{} && r1.ptr == s.data() + x && r2.ec == std::errc{} &&
              r2.ptr == s.data() + s.size() && g.rows >= 1 && g.cols >= 1,
          "grid must look like RxC: " + std::string(s));
  return g;
}

// Interior lines along one axis sit at multiples of resized/count in resized
// coordinates; the box spans [lo, lo+len) in canvas coordinates.
bool axis_cut(std::int64_t lo, std::int64_t len, int count, std::int64_t canvas,
              std::int64_t resized) {
  const std::int64_t tile = resized / count;
  for (int k = 1; k < count; ++k) {
    const i128 line = static_cast<i128>(k) * tile * canvas;  // scaled by canvas
    if (static_cast<i128>(lo) * resized < line && line < static_cast<i128>(lo + len) * resized)
      return true;
  }
  return false;
}

}  // namespace

SceneSpec generate_scene(Dims canvas, int n_objects, SizeRange sizes, std::uint64_t seed) {
  require(canvas.w >= 1 && canvas.h >= 1, "canvas dims must be positive");
  require(n_objects >= 0, "object count must be >= 0");
  require(sizes.min >= 1 && sizes.min <= sizes.max && sizes.max <= canvas.w &&
              sizes.max <= canvas.h,
          "size range must satisfy 1 <= min <= max <= canvas side");
  SceneSpec scene;
  scene.canvas = canvas;
  scene.seed = seed;
  SplitMix64 rng(seed);
  for (int i = 0; i < n_objects; ++i) {
    Box b;
    b.id = i;
    b.w = rng.next_int(sizes.min, sizes.max);
    b.h = rng.next_int(sizes.min, sizes.max);
    b.x = rng.next_int(0, canvas.w - b.w);
    b.y = rng.next_int(0, canvas.h - b.h);
    scene.objects.push_back(b);
  }
  return scene;
}

bool is_cut(const Box& box, const AspectRatio& grid, Dims canvas, Dims resized) {
  require(box.w > 0 && box.h > 0 && box.x >= 0 && box.y >= 0 && box.x + box.w <= canvas.w &&
              box.y + box.h <= canvas.h,
          "box must lie inside the canvas");
  require(resized.w % grid.cols == 0 && resized.h % grid.rows == 0,
          "resized canvas must be a whole number of tiles");
  return axis_cut(box.x, box.w, grid.cols, canvas.w, resized.w) ||
         axis_cut(box.y, box.h, grid.rows, canvas.h, resized.h);
}

bool is_cut(const Box& box, const PlanLevel& level, Dims canvas) {
  const bool plain_grid = level.lattice_rows == level.grid.rows &&
                          level.lattice_cols == level.grid.cols;
  if (plain_grid) return is_cut(box, level.grid, canvas, level.resized);
  const std::int64_t rw = level.resized.w;
  const std::int64_t rh = level.resized.h;
  for (const Rect& t : level.tiles) {
    const bool inside_x = static_cast<i128>(t.x) * canvas.w <= static_cast<i128>(box.x) * rw &&
                          static_cast<i128>(box.x + box.w) * rw <=
                              static_cast<i128>(t.x + t.w) * canvas.w;
    const bool inside_y = static_cast<i128>(t.y) * canvas.h <= static_cast<i128>(box.y) * rh &&
                          static_cast<i128>(box.y + box.h) * rh <=
                              static_cast<i128>(t.y + t.h) * canvas.h;
    if (inside_x && inside_y) return false;
  }
  return true;
}

StrategySpec parse_strategy_spec(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  const auto strategy = parse_strategy(name);
  require(strategy.has_value(), "unknown strategy: " + std::string(text));
  StrategySpec spec;
  spec.strategy = *strategy;
  spec.label = std::string(text);
  if (colon == std::string_view::npos) return spec;
  const std::string_view arg = text.substr(colon + 1);
  switch (spec.strategy) {
    case Strategy::kFixed:
    case Strategy::kMultiscaleFixed:
      spec.options.fixed_grid = parse_grid(arg);
      break;
    case Strategy::kOverlapping: {
      const std::string s(arg);
      char* end = nullptr;
      spec.options.overlap_frac = std::strtod(s.c_str(), &end);
      require(end == s.c_str() + s.size(), "bad overlap fraction: " + s);
      break;
    }
    default:
      fail(ErrorCode::kInvalidArgument, "strategy takes no argument: " + std::string(text));
  }
  return spec;
}

std::vector<StrategySpec> parse_strategy_list(std::string_view csv) {
  std::vector<StrategySpec> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const auto comma = csv.find(',', start);
    const auto item = csv.substr(start, comma == std::string_view::npos ? csv.npos : comma - start);
    if (!item.empty()) out.push_back(parse_strategy_spec(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  require(!out.empty(), "strategy list is empty");
  return out;
}

double StrategyReport::cut_rate() const { return rate(cut_all_levels, total); }
double StrategyReport::complementarity_rate() const {
  return rate(total - cut_all_levels, total);
}
double StrategyReport::level_rate(std::size_t i) const { return rate(levels.at(i).cut, total); }
double StrategyReport::mean_cut_per_level() const {
  if (levels.empty()) return 0.0;
  std::int64_t s = 0;
  for (const auto& l : levels) s += l.cut;
  return static_cast<double>(s) / static_cast<double>(levels.size());
}

SawtoothReport analyze(const SceneSpec& scene, const std::vector<StrategySpec>& strategies,
                       int budget, int tile_side, unsigned threads) {
  require(!strategies.empty(), "analyze: no strategies given");
  SawtoothReport report;
  report.canvas = scene.canvas;
  report.objects = static_cast<std::int64_t>(scene.objects.size());
  report.budget = budget;
  report.tile_side = tile_side;

  for (const StrategySpec& spec : strategies) {
    const PyramidPlan plan =
        make_plan(spec.strategy, scene.canvas, budget, tile_side, spec.options);
    const std::size_t n_levels = plan.levels.size();
    const std::size_t n = scene.objects.size();
    // cuts[o * n_levels + l]
    std::vector<std::uint8_t> cuts(n * n_levels, 0);
    parallel_for(n, threads, [&](std::size_t o) {
      for (std::size_t l = 0; l < n_levels; ++l)
        cuts[o * n_levels + l] = is_cut(scene.objects[o], plan.levels[l], scene.canvas) ? 1 : 0;
    });

    StrategyReport sr;
    sr.label = spec.label.empty() ? std::string(to_string(spec.strategy)) : spec.label;
    sr.strategy = spec.strategy;
    sr.total = static_cast<std::int64_t>(n);
    for (const auto& level : plan.levels) sr.levels.push_back({level.name, level.grid, 0});
    for (std::size_t o = 0; o < n; ++o) {
      bool all = true;
      bool all_but_global = true;
      for (std::size_t l = 0; l < n_levels; ++l) {
        const bool c = cuts[o * n_levels + l] != 0;
        sr.levels[l].cut += c ? 1 : 0;
        all = all && c;
        if (plan.levels[l].name != LevelName::kGlobal) all_but_global = all_but_global && c;
      }
      sr.cut_all_levels += all ? 1 : 0;
      sr.cut_all_but_global += all_but_global ? 1 : 0;
    }
    report.strategies.push_back(std::move(sr));
  }
  return report;
}

std::string report_to_csv(const SawtoothReport& report) {
  std::ostringstream out;
  out << "strategy,level,grid,cut,total,rate\n";
  char buf[64];
  auto fmt = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return std::string(buf);
  };
  for (const auto& s : report.strategies) {
    for (std::size_t i = 0; i < s.levels.size(); ++i)
      out << s.label << ',' << to_string(s.levels[i].level) << ','
          << to_string(s.levels[i].grid) << ',' << s.levels[i].cut << ',' << s.total << ','
          << fmt(s.level_rate(i)) << '\n';
    out << s.label << ",all_levels,," << s.cut_all_levels << ',' << s.total << ','
        << fmt(s.cut_rate()) << '\n';
  }
  return out.str();
}

}  // namespace cip
