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

#include "cip/json_io.hpp"

#include "cip/error.hpp"

namespace cip {

namespace {

Json rate_json(std::int64_t cut, std::int64_t total) {
  return Json{{"cut", cut},
              {"total", total},
              {"rate", total == 0 ? 0.0 : static_cast<double>(cut) / static_cast<double>(total)}};
}

}  // namespace

Json plan_to_json(const PyramidPlan& plan) {
  Json levels = Json::array();
  for (const auto& level : plan.levels) {
    Json tiles = Json::array();
    for (const auto& t : level.tiles) tiles.push_back({{"x", t.x}, {"y", t.y}, {"w", t.w}, {"h", t.h}});
    levels.push_back({{"name", to_string(level.name)},
                      {"grid", {{"rows", level.grid.rows}, {"cols", level.grid.cols}}},
                      {"resized", {{"w", level.resized.w}, {"h", level.resized.h}}},
                      {"tiles", std::move(tiles)}});
  }
  return Json{{"strategy", to_string(plan.strategy)},
              {"budget", plan.budget},
              {"tile_side", plan.tile_side},
              {"input", {{"w", plan.input.w}, {"h", plan.input.h}}},
              {"levels", std::move(levels)}};
}

PyramidPlan plan_from_json(const Json& j) {
  try {
    PyramidPlan plan;
    const auto strategy = parse_strategy(j.at("strategy").get<std::string>());
    if (!strategy) fail(ErrorCode::kFormat, "plan JSON: unknown strategy");
    plan.strategy = *strategy;
    plan.budget = j.at("budget").get<int>();
    plan.tile_side = j.at("tile_side").get<int>();
    plan.input = {j.at("input").at("w").get<int>(), j.at("input").at("h").get<int>()};
    for (const auto& lj : j.at("levels")) {
      PlanLevel level;
      const auto name = parse_level_name(lj.at("name").get<std::string>());
      if (!name) fail(ErrorCode::kFormat, "plan JSON: unknown level name");
      level.name = *name;
      level.grid = {lj.at("grid").at("rows").get<int>(), lj.at("grid").at("cols").get<int>()};
      level.resized = {lj.at("resized").at("w").get<int>(), lj.at("resized").at("h").get<int>()};
      for (const auto& t : lj.at("tiles"))
        level.tiles.push_back({t.at("x").get<std::int64_t>(), t.at("y").get<std::int64_t>(),
                               t.at("w").get<std::int64_t>(), t.at("h").get<std::int64_t>()});
      if (level.tiles.empty()) fail(ErrorCode::kFormat, "plan JSON: level without tiles");
      // Lattice columns = tiles sharing the first tile's y.
      int cols = 0;
      for (const auto& t : level.tiles)
        if (t.y == level.tiles.front().y) ++cols;
      level.lattice_cols = cols;
      level.lattice_rows = static_cast<int>(level.tiles.size()) / cols;
      plan.levels.push_back(std::move(level));
    }
    return plan;
  } catch (const Json::exception& e) {
    fail(ErrorCode::kFormat, std::string("plan JSON: ") + e.what());
  }
}

Json report_to_json(const SawtoothReport& report) {
  Json strategies = Json::array();
  for (const auto& s : report.strategies) {
    Json levels = Json::array();
    for (const auto& l : s.levels) {
      Json lj = {{"name", to_string(l.level)},
                 {"grid", {{"rows", l.grid.rows}, {"cols", l.grid.cols}}}};
      lj.update(rate_json(l.cut, s.total));
      levels.push_back(std::move(lj));
    }
    strategies.push_back({{"label", s.label},
                          {"strategy", to_string(s.strategy)},
                          {"levels", std::move(levels)},
                          {"cut_rate", rate_json(s.cut_all_levels, s.total)},
                          {"complementarity_rate", rate_json(s.total - s.cut_all_levels, s.total)},
                          {"cut_rate_excluding_global", rate_json(s.cut_all_but_global, s.total)},
                          {"mean_objects_cut_per_level", s.mean_cut_per_level()}});
  }
  return Json{{"metric", "crop-boundary cut rate (proxy for the semantic sawtooth effect)"},
              {"canvas", {{"w", report.canvas.w}, {"h", report.canvas.h}}},
              {"objects", report.objects},
              {"budget", report.budget},
              {"tile_side", report.tile_side},
              {"strategies", std::move(strategies)}};
}

Json compression_sidecar(const CompressionResult& result) {
  return Json{{"L1", result.original_length},
              {"K", result.kept()},
              {"drop_ratio", result.drop_ratio},
              {"kept_indices", result.kept_indices}};
}

}  // namespace cip
