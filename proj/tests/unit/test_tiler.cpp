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

#include <cstdio>

#include <jpeglib.h>
#include <png.h>
#include <filesystem>

#include "cip/error.hpp"
#include "cip/rng.hpp"
#include "cip/tiler.hpp"

using namespace cip;

namespace {

RasterImage pattern(int w, int h) {
  RasterImage img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c)
        img.pixel(x, y)[c] = static_cast<std::uint8_t>((x * 7 + y * 13 + c * 50 + (x * y) % 11) % 256);
  return img;
}

RasterImage solid(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  RasterImage img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      img.pixel(x, y)[0] = r;
      img.pixel(x, y)[1] = g;
      img.pixel(x, y)[2] = b;
    }
  return img;
}

std::uint64_t hash(const RasterImage& img) {
  return fnv1a64({reinterpret_cast<const char*>(img.samples().data()), img.samples().size()});
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("cip_test_" + name);
}

}  // namespace

TEST_CASE("resize") {
  SUBCASE("identity is byte-identical") {
    const auto img = pattern(37, 23);
    CHECK(resize(img, {37, 23}) == img);
  }
  SUBCASE("2x2 checkerboard to 1x1 rounds 127.5 to 128") {
    RasterImage img(2, 2, {0, 0, 0, 255, 255, 255, 255, 255, 255, 0, 0, 0});
    const auto out = resize(img, {1, 1});
    CHECK(out.samples() == std::vector<std::uint8_t>{128, 128, 128});
  }
  SUBCASE("constant image stays constant") {
    const auto img = solid(448, 448, 12, 200, 77);
    const auto out = resize(img, {896, 1344});
    CHECK(out == solid(896, 1344, 12, 200, 77));
  }
  SUBCASE("golden bytes match the exact-rational oracle") {
    const auto img = pattern(37, 23);
    CHECK(hash(resize(img, {61, 17})) == 0xf5cb7f3fa1997e66ull);
    CHECK(hash(resize(img, {10, 40})) == 0xaa749ca998ae0a34ull);
    CHECK(hash(resize(img, {5, 5})) == 0xb342539fe2a04c75ull);
  }
  CHECK_THROWS_AS(resize(pattern(4, 4), {0, 3}), Error);
}

TEST_CASE("crop_tiles") {
  const auto img = pattern(300, 200);

  SUBCASE("grid 2x3 row-major rectangles") {
    const auto plan = plan_baseline(Strategy::kFixed, img.dims(), 24, 448,
                                    {.fixed_grid = {2, 3}});
    const auto sets = crop_tiles(img, plan);
    REQUIRE(sets.size() == 1);
    REQUIRE(sets[0].tiles.size() == 6);
    CHECK(sets[0].tiles[4].source == Rect{448, 448, 448, 448});
    CHECK(sets[0].tiles[4].row == 1);
    CHECK(sets[0].tiles[4].col == 1);
    for (const auto& t : sets[0].tiles) {
      CHECK(t.image.width() == 448);
      CHECK(t.image.height() == 448);
    }
  }

  SUBCASE("global level equals a direct resize; every level reassembles exactly") {
    const auto plan = plan_cip(img.dims(), 24, 28);
    const auto sets = crop_tiles(img, plan, 3);
    REQUIRE(sets.size() == 3);
    REQUIRE(sets[2].tiles.size() == 1);
    CHECK(sets[2].tiles[0].image == resize(img, {28, 28}));
    for (std::size_t i = 0; i < sets.size(); ++i)
      CHECK(reassemble(sets[i], plan.levels[i].resized) == resize(img, plan.levels[i].resized));
  }

  SUBCASE("thread count does not change tiles") {
    const auto plan = plan_cip(img.dims(), 48, 32);
    const auto a = crop_tiles(img, plan, 1);
    const auto b = crop_tiles(img, plan, 8);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      REQUIRE(a[i].tiles.size() == b[i].tiles.size());
      for (std::size_t t = 0; t < a[i].tiles.size(); ++t)
        CHECK(a[i].tiles[t].image == b[i].tiles[t].image);
    }
  }

  SUBCASE("overlapping neighbours share floor(f * side) identical columns") {
    for (double f : {0.25, 0.5, 0.75}) {
      const int side = 40;
      const auto plan = plan_baseline(Strategy::kOverlapping, {400, 100}, 4, side,
                                      {.overlap_frac = f});
      const auto sets = crop_tiles(resize(img, {400, 100}), plan);
      const auto& level = plan.levels[0];
      const int overlap = static_cast<int>(f * side);
      const int stride = side - overlap;
      const auto& tiles = sets[0].tiles;
      for (int r = 0; r < level.lattice_rows; ++r)
        for (int c = 0; c + 1 < level.lattice_cols; ++c) {
          const auto& left = tiles[static_cast<std::size_t>(r * level.lattice_cols + c)];
          const auto& right = tiles[static_cast<std::size_t>(r * level.lattice_cols + c + 1)];
          if (right.source.x - left.source.x != stride) continue;  // flushed last tile
          for (int y = 0; y < side; ++y)
            for (int x = 0; x < overlap; ++x)
              for (int ch = 0; ch < 3; ++ch)
                REQUIRE(left.image.pixel(stride + x, y)[ch] == right.image.pixel(x, y)[ch]);
        }
    }
  }

  SUBCASE("plan made for other dims is rejected") {
    const auto plan = plan_cip({301, 200}, 24, 28);
    CHECK_THROWS_AS(crop_tiles(img, plan), Error);
  }
}

TEST_CASE("image files") {
  const auto img = pattern(33, 21);

  SUBCASE("PNG round trip") {
    const auto path = temp_path("rt.png").string();
    save_png(img, path);
    CHECK(load_image(path) == img);
    std::filesystem::remove(path);
  }

  SUBCASE("RGBA PNG keeps color and drops alpha") {
    const auto path = temp_path("rgba.png").string();
    std::vector<std::uint8_t> rgba = {10, 20, 30, 0, 40, 50, 60, 128, 70, 80, 90, 255};
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = 3;
    image.height = 1;
    image.format = PNG_FORMAT_RGBA;
    REQUIRE(png_image_write_to_file(&image, path.c_str(), 0, rgba.data(), 0, nullptr));
    const auto loaded = load_image(path);
    CHECK(loaded.samples() == std::vector<std::uint8_t>{10, 20, 30, 40, 50, 60, 70, 80, 90});
    std::filesystem::remove(path);
  }

  SUBCASE("JPEG decodes to the written size") {
    const auto path = temp_path("img.jpg").string();
    const auto src = solid(24, 16, 100, 150, 200);
    std::FILE* f = std::fopen(path.c_str(), "wb");
    REQUIRE(f);
    jpeg_compress_struct cinfo{};
    jpeg_error_mgr jerr{};
    cinfo.err = jpeg_std_error(&jerr);
    jpeg_create_compress(&cinfo);
    jpeg_stdio_dest(&cinfo, f);
    cinfo.image_width = 24;
    cinfo.image_height = 16;
    cinfo.input_components = 3;
    cinfo.in_color_space = JCS_RGB;
    jpeg_set_defaults(&cinfo);
    jpeg_set_quality(&cinfo, 95, TRUE);
    jpeg_start_compress(&cinfo, TRUE);
    while (cinfo.next_scanline < cinfo.image_height) {
      JSAMPROW row = const_cast<std::uint8_t*>(src.pixel(0, static_cast<int>(cinfo.next_scanline)));
      jpeg_write_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_compress(&cinfo);
    jpeg_destroy_compress(&cinfo);
    std::fclose(f);

    const auto loaded = load_image(path);
    CHECK(loaded.width() == 24);
    CHECK(loaded.height() == 16);
    // Lossy, but a flat color survives within a few levels.
    for (std::size_t i = 0; i < loaded.samples().size(); ++i)
      CHECK(std::abs(int(loaded.samples()[i]) - int(src.samples()[i])) <= 3);
    std::filesystem::remove(path);
  }

  SUBCASE("missing and non-image files") {
    try {
      load_image(temp_path("does_not_exist.png").string());
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kIo);
    }
    const auto path = temp_path("garbage.bin");
    { std::FILE* f = std::fopen(path.string().c_str(), "wb"); std::fputs("hello world", f); std::fclose(f); }
    try {
      load_image(path.string());
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kFormat);
    }
    std::filesystem::remove(path);
  }
}
