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

#include "cip/error.hpp"
#include "cip/sawtooth.hpp"

using namespace cip;

TEST_CASE("generate_scene") {
  CHECK(generate_scene({100, 100}, 0, {}, 1).objects.empty());
  const auto scene = generate_scene({4480, 4480}, 100, {20, 60}, 42);
  REQUIRE(scene.objects.size() == 100);
  for (const auto& b : scene.objects) {
    CHECK((b.w >= 20 && b.w <= 60 && b.h >= 20 && b.h <= 60));
    CHECK((b.x >= 0 && b.y >= 0 && b.x + b.w <= 4480 && b.y + b.h <= 4480));
  }
  CHECK(generate_scene({4480, 4480}, 100, {20, 60}, 42) == scene);
  CHECK_FALSE(generate_scene({4480, 4480}, 100, {20, 60}, 43) == scene);
  CHECK_THROWS_AS(generate_scene({50, 50}, 1, {20, 60}, 1), Error);
  CHECK_THROWS_AS(generate_scene({500, 500}, 1, {30, 20}, 1), Error);
}

TEST_CASE("is_cut") {
  const AspectRatio halves{1, 2};
  CHECK_FALSE(is_cut({0, 10, 10, 50, 50}, halves, {896, 448}, {896, 448}));
  CHECK(is_cut({0, 423, 10, 50, 50}, halves, {896, 448}, {896, 448}));
  CHECK(is_cut({0, 440, 0, 16, 16}, halves, {896, 448}, {896, 448}));
  // Touching the line from either side is not a cut.
  CHECK_FALSE(is_cut({0, 432, 0, 16, 16}, halves, {896, 448}, {896, 448}));
  CHECK_FALSE(is_cut({0, 448, 0, 16, 16}, halves, {896, 448}, {896, 448}));
  // Mapping through a resize: a 100-wide canvas shown as 896 puts the line at 50.
  CHECK(is_cut({0, 45, 0, 10, 10}, halves, {100, 100}, {896, 448}));
  CHECK_FALSE(is_cut({0, 40, 0, 10, 10}, halves, {100, 100}, {896, 448}));
  CHECK_FALSE(is_cut({0, 0, 0, 100, 100}, AspectRatio{1, 1}, {100, 100}, {448, 448}));
  CHECK_THROWS_AS(is_cut({0, 95, 0, 10, 10}, halves, {100, 100}, {896, 448}), Error);

  SUBCASE("overlapping levels use tile containment") {
    const auto plan = plan_baseline(Strategy::kOverlapping, {896, 448}, 2, 448);
    const auto& level = plan.levels[0];
    REQUIRE(level.tiles.size() == 3);
    // Straddles the 448 line but sits inside the middle tile [224, 672).
    CHECK_FALSE(is_cut({0, 440, 0, 16, 16}, level, {896, 448}));
    // Straddles 224, inside the first tile [0, 448).
    CHECK_FALSE(is_cut({0, 216, 0, 16, 16}, level, {896, 448}));
    // Wider than the overlap region around 448: [200, 700) fits in no tile.
    CHECK(is_cut({0, 200, 0, 500, 16}, level, {896, 448}));
  }
}

TEST_CASE("strategy specs") {
  CHECK(parse_strategy_spec("cip").strategy == Strategy::kCip);
  const auto f = parse_strategy_spec("fixed:2x4");
  CHECK(f.strategy == Strategy::kFixed);
  CHECK(f.options.fixed_grid == AspectRatio{2, 4});
  CHECK(f.label == "fixed:2x4");
  CHECK(parse_strategy_spec("overlapping:0.25").options.overlap_frac == 0.25);
  CHECK(parse_strategy_list("cip,dynamic,,fixed").size() == 3);
  CHECK_THROWS_AS(parse_strategy_spec("bogus"), Error);
  CHECK_THROWS_AS(parse_strategy_spec("fixed:2by4"), Error);
  CHECK_THROWS_AS(parse_strategy_spec("cip:3"), Error);
  CHECK_THROWS_AS(parse_strategy_list(","), Error);
}

TEST_CASE("analyze") {
  SUBCASE("a 1x1 grid never cuts") {
    const auto scene = generate_scene({2000, 1000}, 200, {20, 60}, 5);
    const auto r = analyze(scene, parse_strategy_list("fixed:1x1"), 24, 448);
    REQUIRE(r.strategies.size() == 1);
    CHECK(r.strategies[0].cut_all_levels == 0);
    CHECK(r.strategies[0].cut_rate() == 0.0);
    CHECK(r.strategies[0].complementarity_rate() == 1.0);
  }

  SUBCASE("every object on the center of a 2x2 grid is cut") {
    SceneSpec scene;
    scene.canvas = {800, 600};
    for (int i = 0; i < 20; ++i) scene.objects.push_back({i, 390 - i, 290 - i, 20 + i, 20 + 2 * i});
    const auto r = analyze(scene, parse_strategy_list("fixed:2x2"), 24, 448);
    CHECK(r.strategies[0].cut_all_levels == 20);
    CHECK(r.strategies[0].cut_rate() == 1.0);
  }

  SUBCASE("the adaptive level rescues an object cut by the detailed grid") {
    const auto plan = plan_cip({1344, 896}, 24, 448);
    REQUIRE(plan.levels[0].grid == AspectRatio{3, 5});
    REQUIRE(plan.levels[1].grid == AspectRatio{2, 3});
    // Detailed vertical lines sit at multiples of 268.8 in canvas x, the
    // adaptive ones at multiples of 448.
    SceneSpec scene;
    scene.canvas = {1344, 896};
    scene.objects = {{0, 260, 100, 20, 20}, {1, 440, 100, 16, 16}, {2, 10, 10, 20, 20}};
    const auto r = analyze(scene, parse_strategy_list("cip"), 24, 448);
    const auto& s = r.strategies[0];
    REQUIRE(s.levels.size() == 3);
    CHECK(s.levels[0].cut == 1);
    CHECK(s.levels[1].cut == 1);
    CHECK(s.levels[2].cut == 0);
    CHECK(s.cut_all_but_global == 0);
    CHECK(s.cut_all_levels == 0);
  }

  SUBCASE("CIP never cuts more than its own detailed level") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const Dims canvas{1000 + static_cast<int>(seed * 97 % 3000), 800 + static_cast<int>(seed * 61 % 2000)};
      const auto scene = generate_scene(canvas, 300, {10, 120}, seed);
      const auto r = analyze(scene, parse_strategy_list("cip,dynamic,overlapping"), 24, 448, 4);
      const auto& cip = r.strategies[0];
      REQUIRE(cip.cut_all_but_global <= cip.levels[0].cut);
      REQUIRE(cip.cut_all_levels <= cip.cut_all_but_global);
      for (const auto& s : r.strategies) {
        REQUIRE((s.cut_rate() >= 0.0 && s.cut_rate() <= 1.0));
        REQUIRE(s.complementarity_rate() == doctest::Approx(1.0 - s.cut_rate()));
        for (const auto& l : s.levels) REQUIRE(s.cut_all_levels <= l.cut);
      }
      const auto again = analyze(scene, parse_strategy_list("cip,dynamic,overlapping"), 24, 448, 1);
      REQUIRE(report_to_csv(again) == report_to_csv(r));
    }
  }

  SUBCASE("CSV layout") {
    const auto scene = generate_scene({896, 448}, 10, {20, 60}, 1);
    const auto csv = report_to_csv(analyze(scene, parse_strategy_list("fixed:1x2"), 24, 448));
    CHECK(csv.rfind("strategy,level,grid,cut,total,rate\nfixed:1x2,detailed,1x2,", 0) == 0);
    CHECK(csv.find("fixed:1x2,all_levels,,") != std::string::npos);
  }

  CHECK_THROWS_AS(analyze(generate_scene({100, 100}, 1, {}, 1), {}, 24, 448), Error);
}
