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

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <utility>

#include "cip/error.hpp"
#include "cip/ratio_planner.hpp"
#include "test_oracles.hpp"

using namespace cip;

namespace {

bool contains(const std::vector<AspectRatio>& v, AspectRatio a) {
  return std::find(v.begin(), v.end(), a) != v.end();
}

}  // namespace

TEST_CASE("generate_candidates") {
  SUBCASE("budget 1 is only the unit grid") {
    CHECK(generate_candidates(1) == std::vector<AspectRatio>{{1, 1}});
  }
  SUBCASE("budget 24 includes 4x6 and 6x4 but not 5x5") {
    const auto c = generate_candidates(24);
    CHECK(contains(c, {4, 6}));
    CHECK(contains(c, {6, 4}));
    CHECK_FALSE(contains(c, {5, 5}));
  }
  SUBCASE("budget 6 matches exhaustive enumeration") {
    const std::vector<AspectRatio> expected = {{1, 1}, {1, 2}, {1, 3}, {1, 4}, {1, 5},
                                               {1, 6}, {2, 1}, {2, 2}, {2, 3}, {3, 1},
                                               {3, 2}, {4, 1}, {5, 1}, {6, 1}};
    CHECK(generate_candidates(6) == expected);
    CHECK(generate_candidates(6) == oracle::all_grids(6));
  }
  SUBCASE("every budget up to 60 agrees with the brute-force oracle") {
    for (int b = 1; b <= 60; ++b) CHECK(generate_candidates(b) == oracle::all_grids(b));
  }
  CHECK_THROWS_AS(generate_candidates(0), Error);
}

TEST_CASE("group_candidates") {
  const auto g = group_candidates(generate_candidates(24), 24);
  CHECK(contains(g.detailed, {4, 5}));
  CHECK(contains(g.adaptive, {2, 3}));
  CHECK_FALSE(contains(g.detailed, {3, 3}));
  CHECK_FALSE(contains(g.adaptive, {3, 3}));
  CHECK(g.global == std::vector<AspectRatio>{{1, 1}});
  CHECK_FALSE(contains(g.detailed, {1, 1}));
  CHECK_FALSE(contains(g.adaptive, {1, 1}));

  // Thresholds applied exhaustively.
  for (const auto& a : generate_candidates(24)) {
    const int n = a.tile_count();
    CHECK(contains(g.detailed, a) == (n >= 10 && n <= 20));
    CHECK(contains(g.adaptive, a) == (n >= 3 && n <= 8));
  }
  // 2- and 9-tile grids are orphaned.
  for (AspectRatio a : {AspectRatio{1, 2}, AspectRatio{2, 1}, AspectRatio{3, 3},
                        AspectRatio{1, 9}, AspectRatio{9, 1}}) {
    CHECK_FALSE(contains(g.detailed, a));
    CHECK_FALSE(contains(g.adaptive, a));
  }

  CHECK(group_candidates(generate_candidates(13), 13).detailed.empty());
  CHECK(group_candidates(generate_candidates(14), 14).detailed ==
        std::vector<AspectRatio>{{1, 10}, {2, 5}, {5, 2}, {10, 1}});
}

TEST_CASE("closest_ratio") {
  CHECK(closest_ratio(1.0, {{4, 4}, {3, 5}, {5, 3}}) == AspectRatio{4, 4});
  CHECK(closest_ratio(1.5, {{2, 3}, {3, 2}}) == AspectRatio{2, 3});

  const auto detailed = group_candidates(generate_candidates(24), 24).detailed;
  CHECK(closest_ratio(0.75, detailed) == AspectRatio{4, 3});
  CHECK(closest_ratio(0.75, detailed) == oracle::closest(0.75, detailed));

  SUBCASE("tie goes to more tiles, then more columns") {
    // 1x1, 2x2, 4x4 all have ratio 1.
    CHECK(closest_ratio(1.0, {{1, 1}, {4, 4}, {2, 2}}) == AspectRatio{4, 4});
    // 3x4 and 3x5 are both 1/6 away from 1.5; 3x5 has more tiles.
    CHECK(closest_ratio(Dims{3, 2}, {{3, 4}, {3, 5}}) == AspectRatio{3, 5});
    CHECK(closest_ratio(Dims{3, 2}, {{3, 5}, {3, 4}}) == AspectRatio{3, 5});
    // 2x4 (2.0) and 4x2 (0.5) are both 0.75 from 1.25 with equal tiles.
    CHECK(closest_ratio(Dims{5, 4}, {{4, 2}, {2, 4}}) == AspectRatio{2, 4});
  }

  SUBCASE("rational target agrees with the brute-force oracle") {
    std::mt19937_64 rng(7);
    const auto pool = generate_candidates(48);
    for (int i = 0; i < 2000; ++i) {
      const Dims d{static_cast<int>(rng() % 8192) + 1, static_cast<int>(rng() % 8192) + 1};
      CHECK(closest_ratio(d, pool) == oracle::closest_exact(d, pool));
    }
  }

  CHECK_THROWS_AS(closest_ratio(1.0, {}), Error);
  try {
    closest_ratio(1.0, {});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEmptyPool);
  }
}

TEST_CASE("filter_adaptive") {
  const std::vector<AspectRatio> pool = {{2, 2}, {2, 3}};
  const auto kept = filter_adaptive({3, 4}, pool);
  CHECK_FALSE(contains(kept, {2, 2}));
  CHECK(contains(kept, {2, 3}));

  const auto adaptive = group_candidates(generate_candidates(48), 48).adaptive;
  // Unit counts divide everything, so only grids split on both axes survive.
  for (const auto& a : filter_adaptive({1, 1}, adaptive)) CHECK((a.rows >= 2 && a.cols >= 2));
  CHECK(contains(filter_adaptive({1, 1}, adaptive), {2, 2}));

  for (int r = 1; r <= 8; ++r)
    for (int c = 1; c <= 8; ++c)
      CHECK(filter_adaptive({r, c}, adaptive) == oracle::filter_by_multiples({r, c}, adaptive));
}

TEST_CASE("coincidence_count") {
  // Rational-set oracle: 2x2 vs 4x4 share the 1/2 line on each axis.
  CHECK(oracle::shared_lines({2, 2}, {4, 4}) == 2);
  CHECK(coincidence_count({2, 2}, {4, 4}) == 2);
  CHECK(coincidence_count({3, 5}, {4, 7}) == 0);
  CHECK(coincidence_count({1, 1}, {4, 4}) == 0);

  for (int ar = 1; ar <= 12; ++ar)
    for (int ac = 1; ac <= 12; ++ac)
      for (int br = 1; br <= 12; ++br)
        for (int bc = 1; bc <= 12; bc += 3) {
          const AspectRatio a{ar, ac}, b{br, bc};
          REQUIRE(coincidence_count(a, b) == oracle::shared_lines(a, b));
          REQUIRE(coincidence_count(a, b) == coincidence_count(b, a));
        }
}

TEST_CASE("plan_cip worked examples") {
  SUBCASE("1344x896, budget 24") {
    const auto plan = plan_cip({1344, 896}, 24, 448);
    REQUIRE(plan.levels.size() == 3);
    CHECK(plan.levels[0].grid == AspectRatio{3, 5});
    CHECK(plan.levels[1].grid == AspectRatio{2, 3});
    CHECK(plan.levels[2].grid == AspectRatio{1, 1});
    CHECK_FALSE(plan.adaptive_fallback);

    // Every intermediate set against the oracle pipeline.
    const auto groups = group_candidates(generate_candidates(24), 24);
    CHECK(oracle::closest_exact({1344, 896}, groups.detailed) == AspectRatio{3, 5});
    const auto filtered = filter_adaptive({3, 5}, groups.adaptive);
    const std::set<AspectRatio> got(filtered.begin(), filtered.end());
    CHECK(got == std::set<AspectRatio>{{2, 2}, {2, 3}, {2, 4}, {4, 2}});

    CHECK(plan.levels[0].resized == Dims{5 * 448, 3 * 448});
    CHECK(plan.levels[1].resized == Dims{3 * 448, 2 * 448});
    CHECK(plan.total_tiles() == 15 + 6 + 1);
  }
  SUBCASE("448x448 square input exercises the fallback") {
    const auto plan = plan_cip({448, 448}, 24, 448);
    CHECK(plan.levels[0].grid == AspectRatio{4, 4});
    CHECK(plan.adaptive_fallback);
    const auto groups = group_candidates(generate_candidates(24), 24);
    CHECK(filter_adaptive({4, 4}, groups.adaptive).empty());
    // Zero-coincidence candidates: 1x3, 3x1, 1x5, 5x1, 1x7, 7x1; 3x1 is
    // nearest to 1.0.
    CHECK(plan.levels[1].grid == AspectRatio{3, 1});
    CHECK(coincidence_count(plan.levels[1].grid, plan.levels[0].grid) == 0);
    CHECK(plan.levels[2].grid == AspectRatio{1, 1});
    REQUIRE(plan.levels[2].tiles.size() == 1);
    CHECK(plan.levels[2].tiles[0] == Rect{0, 0, 448, 448});
  }
  SUBCASE("budget too small") {
    try {
      plan_cip({448, 448}, 13, 448);
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kBudgetTooSmall);
      CHECK(std::string(e.what()) == "budget too small for detailed group");
    }
  }
  CHECK_THROWS_AS(plan_cip({0, 10}, 24, 448), Error);
}

TEST_CASE("plan_baseline") {
  SUBCASE("dynamic picks the largest square grid for a square input") {
    const auto plan = plan_baseline(Strategy::kDynamic, {896, 896}, 24, 448);
    REQUIRE(plan.levels.size() == 1);
    CHECK(plan.levels[0].grid == AspectRatio{4, 4});
    CHECK(plan.levels[0].grid == oracle::closest_exact({896, 896}, oracle::all_grids(24)));
  }
  SUBCASE("fixed ignores the input aspect") {
    for (Dims d : {Dims{10, 10}, Dims{4000, 100}, Dims{1, 3000}}) {
      const auto plan = plan_baseline(Strategy::kFixed, d, 24, 448);
      REQUIRE(plan.levels.size() == 1);
      CHECK(plan.levels[0].grid == AspectRatio{3, 3});
    }
    CHECK_THROWS_AS(plan_baseline(Strategy::kFixed, {10, 10}, 8, 448), Error);
  }
  SUBCASE("overlapping stride arithmetic") {
    // 896x448 input at budget 2 gives the dynamic grid 1x2.
    const auto plan = plan_baseline(Strategy::kOverlapping, {896, 448}, 2, 448);
    const auto& level = plan.levels.at(0);
    CHECK(level.grid == AspectRatio{1, 2});
    CHECK(level.resized == Dims{896, 448});
    REQUIRE(level.tiles.size() == 3);
    CHECK(level.tiles[0].x == 0);
    CHECK(level.tiles[1].x == 224);
    CHECK(level.tiles[2].x == 448);
    for (const auto& t : level.tiles) CHECK((t.w == 448 && t.h == 448 && t.y == 0));
    CHECK(strided_origins(896, 448, 314) == std::vector<std::int64_t>{0, 314, 448});
    CHECK_THROWS_AS(
        plan_baseline(Strategy::kOverlapping, {896, 448}, 2, 448, {.overlap_frac = 1.0}), Error);
  }
  SUBCASE("multiscale_fixed has a 3x3 and a 1x1 level, no adaptive") {
    const auto plan = plan_baseline(Strategy::kMultiscaleFixed, {1000, 700}, 24, 448);
    REQUIRE(plan.levels.size() == 2);
    CHECK(plan.levels[0].grid == AspectRatio{3, 3});
    CHECK(plan.levels[1].grid == AspectRatio{1, 1});
    CHECK(plan.levels[1].name == LevelName::kGlobal);
    CHECK(plan.find(LevelName::kAdaptive) == nullptr);
  }
}

TEST_CASE("planner properties over random inputs") {
  std::mt19937_64 rng(20260101);
  const int budgets[] = {18, 24, 32, 48};
  for (int i = 0; i < 3000; ++i) {
    const Dims d{static_cast<int>(rng() % 8192) + 1, static_cast<int>(rng() % 8192) + 1};
    const int budget = budgets[rng() % 4];
    const auto plan = plan_cip(d, budget, 448);
    const auto& det = plan.levels[0].grid;
    const auto& ada = plan.levels[1].grid;

    REQUIRE(plan.total_tiles() <= budget);
    REQUIRE(det.tile_count() > ada.tile_count());
    REQUIRE(ada.tile_count() > 1);
    if (!plan.adaptive_fallback) {
      REQUIRE(det.rows % ada.rows != 0);
      REQUIRE(det.cols % ada.cols != 0);
      // Non-nesting on each axis.
      REQUIRE(coincidence_count_axis(ada.cols, det.cols) < ada.cols - 1);
      REQUIRE(coincidence_count_axis(ada.rows, det.rows) < ada.rows - 1);
    }
    for (const auto& level : plan.levels) REQUIRE(oracle::is_partition(level));
    REQUIRE(plan_cip(d, budget, 448).levels[1].tiles == plan.levels[1].tiles);
  }
}
