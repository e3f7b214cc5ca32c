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

#include "cip/cip.h"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <new>
#include <sstream>
#include <string>

#include "cip/encoder.hpp"
#include "cip/error.hpp"
#include "cip/json_io.hpp"
#include "cip/parallel.hpp"
#include "cip/ratio_planner.hpp"
#include "cip/sawtooth.hpp"
#include "cip/scm.hpp"
#include "cip/tensor.hpp"
#include "cip/tiler.hpp"

struct cip_plan {
  cip::PyramidPlan plan;
};

struct cip_image {
  cip::RasterImage image;
};

struct cip_tensor {
  cip::TokenMatrix matrix;
};

struct cip_compression {
  cip::CompressionResult result;
  std::vector<double> weights;
  std::vector<std::uint64_t> kept;
};

struct cip_report {
  cip::SawtoothReport report;
};

namespace {

thread_local std::string g_last_error;

cip_status to_status(cip::ErrorCode code) {
  switch (code) {
    case cip::ErrorCode::kInvalidArgument: return CIP_ERR_INVALID_ARGUMENT;
    case cip::ErrorCode::kBudgetTooSmall: return CIP_ERR_BUDGET_TOO_SMALL;
    case cip::ErrorCode::kEmptyPool: return CIP_ERR_EMPTY_POOL;
    case cip::ErrorCode::kIo: return CIP_ERR_IO;
    case cip::ErrorCode::kFormat: return CIP_ERR_FORMAT;
    case cip::ErrorCode::kInternal: return CIP_ERR_INTERNAL;
  }
  return CIP_ERR_INTERNAL;
}

template <typename Fn>
cip_status guarded(Fn&& fn) {
  try {
    fn();
    return CIP_OK;
  } catch (const cip::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return CIP_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CIP_ERR_INTERNAL;
  }
}

void require_non_null(const void* p, const char* what) {
  cip::require(p != nullptr, std::string(what) + " must not be null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string dump(const cip::Json& j, int indent) {
  return j.dump(indent < 0 ? -1 : indent) + (indent < 0 ? "" : "\n");
}

cip::BaselineOptions baseline_options(const cip_plan_options& o) {
  cip::BaselineOptions b;
  b.overlap_frac = o.overlap_frac;
  b.fixed_grid = {static_cast<int>(o.fixed_rows), static_cast<int>(o.fixed_cols)};
  return b;
}

cip::Strategy to_strategy(cip_strategy s) {
  switch (s) {
    case CIP_STRATEGY_CIP: return cip::Strategy::kCip;
    case CIP_STRATEGY_DYNAMIC: return cip::Strategy::kDynamic;
    case CIP_STRATEGY_FIXED: return cip::Strategy::kFixed;
    case CIP_STRATEGY_OVERLAPPING: return cip::Strategy::kOverlapping;
    case CIP_STRATEGY_MULTISCALE_FIXED: return cip::Strategy::kMultiscaleFixed;
  }
  cip::fail(cip::ErrorCode::kInvalidArgument, "unknown strategy value");
}

int to_int(std::uint32_t v, const char* what) {
  cip::require(v <= static_cast<std::uint32_t>(INT32_MAX), std::string(what) + " out of range");
  return static_cast<int>(v);
}

cip::SceneSpec make_scene(const cip_scene_options& s) {
  return cip::generate_scene({to_int(s.canvas_width, "canvas width"),
                              to_int(s.canvas_height, "canvas height")},
                             to_int(s.objects, "object count"),
                             {to_int(s.min_size, "min size"), to_int(s.max_size, "max size")},
                             s.seed);
}

}  // namespace

extern "C" {

const char* cip_version(void) { return "1.0.0"; }

const char* cip_status_string(cip_status status) {
  switch (status) {
    case CIP_OK: return "ok";
    case CIP_ERR_INVALID_ARGUMENT: return "invalid argument";
    case CIP_ERR_BUDGET_TOO_SMALL: return "budget too small";
    case CIP_ERR_EMPTY_POOL: return "empty pool";
    case CIP_ERR_IO: return "i/o error";
    case CIP_ERR_FORMAT: return "format error";
    case CIP_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* cip_last_error(void) { return g_last_error.c_str(); }

void cip_string_free(char* s) { std::free(s); }

cip_status cip_strategy_from_string(const char* name, cip_strategy* out) {
  return guarded([&] {
    require_non_null(name, "name");
    require_non_null(out, "out");
    const auto s = cip::parse_strategy(name);
    cip::require(s.has_value(), std::string("unknown strategy: ") + name);
    *out = static_cast<cip_strategy>(*s);
  });
}

void cip_plan_options_default(cip_plan_options* options) {
  if (!options) return;
  options->budget = cip::kDefaultBudget;
  options->tile_side = cip::kDefaultTileSide;
  options->strategy = CIP_STRATEGY_CIP;
  options->overlap_frac = 0.5;
  options->fixed_rows = 3;
  options->fixed_cols = 3;
}

cip_status cip_plan_create(uint32_t width, uint32_t height, const cip_plan_options* options,
                           cip_plan** out) {
  return guarded([&] {
    require_non_null(out, "out");
    *out = nullptr;
    cip_plan_options o;
    cip_plan_options_default(&o);
    if (options) o = *options;
    auto handle = std::make_unique<cip_plan>();
    handle->plan = cip::make_plan(to_strategy(o.strategy),
                                  {to_int(width, "width"), to_int(height, "height")},
                                  to_int(o.budget, "budget"), to_int(o.tile_side, "tile_side"),
                                  baseline_options(o));
    *out = handle.release();
  });
}

cip_status cip_plan_from_json(const char* json, cip_plan** out) {
  return guarded([&] {
    require_non_null(json, "json");
    require_non_null(out, "out");
    *out = nullptr;
    cip::Json j;
    try {
      j = cip::Json::parse(json);
    } catch (const cip::Json::exception& e) {
      cip::fail(cip::ErrorCode::kFormat, std::string("plan JSON: ") + e.what());
    }
    auto handle = std::make_unique<cip_plan>();
    handle->plan = cip::plan_from_json(j);
    *out = handle.release();
  });
}

void cip_plan_destroy(cip_plan* plan) { delete plan; }

size_t cip_plan_level_count(const cip_plan* plan) { return plan ? plan->plan.levels.size() : 0; }

size_t cip_plan_total_tiles(const cip_plan* plan) {
  return plan ? static_cast<size_t>(plan->plan.total_tiles()) : 0;
}

cip_status cip_plan_level_info(const cip_plan* plan, size_t level, const char** name,
                               uint32_t* rows, uint32_t* cols, size_t* tiles) {
  return guarded([&] {
    require_non_null(plan, "plan");
    cip::require(level < plan->plan.levels.size(), "level index out of range");
    const auto& l = plan->plan.levels[level];
    if (name) *name = cip::to_string(l.name).data();
    if (rows) *rows = static_cast<uint32_t>(l.grid.rows);
    if (cols) *cols = static_cast<uint32_t>(l.grid.cols);
    if (tiles) *tiles = l.tiles.size();
  });
}

cip_status cip_plan_to_json(const cip_plan* plan, int indent, char** out) {
  return guarded([&] {
    require_non_null(plan, "plan");
    require_non_null(out, "out");
    *out = dup_string(dump(cip::plan_to_json(plan->plan), indent));
  });
}

cip_status cip_image_load(const char* path, cip_image** out) {
  return guarded([&] {
    require_non_null(path, "path");
    require_non_null(out, "out");
    *out = nullptr;
    auto handle = std::make_unique<cip_image>();
    handle->image = cip::load_image(path);
    *out = handle.release();
  });
}

cip_status cip_image_from_rgb(uint32_t width, uint32_t height, const uint8_t* rgb,
                              cip_image** out) {
  return guarded([&] {
    require_non_null(rgb, "rgb");
    require_non_null(out, "out");
    *out = nullptr;
    const int w = to_int(width, "width");
    const int h = to_int(height, "height");
    cip::require(w >= 1 && h >= 1, "image dims must be positive");
    const std::size_t n = static_cast<std::size_t>(w) * h * 3;
    auto handle = std::make_unique<cip_image>();
    handle->image = cip::RasterImage(w, h, std::vector<std::uint8_t>(rgb, rgb + n));
    *out = handle.release();
  });
}

uint32_t cip_image_width(const cip_image* image) {
  return image ? static_cast<uint32_t>(image->image.width()) : 0;
}

uint32_t cip_image_height(const cip_image* image) {
  return image ? static_cast<uint32_t>(image->image.height()) : 0;
}

const uint8_t* cip_image_data(const cip_image* image) {
  return image ? image->image.samples().data() : nullptr;
}

cip_status cip_image_save_png(const cip_image* image, const char* path) {
  return guarded([&] {
    require_non_null(image, "image");
    require_non_null(path, "path");
    cip::save_png(image->image, path);
  });
}

cip_status cip_image_resize(const cip_image* image, uint32_t width, uint32_t height,
                            cip_image** out) {
  return guarded([&] {
    require_non_null(image, "image");
    require_non_null(out, "out");
    *out = nullptr;
    auto handle = std::make_unique<cip_image>();
    handle->image = cip::resize(image->image, {to_int(width, "width"), to_int(height, "height")});
    *out = handle.release();
  });
}

void cip_image_destroy(cip_image* image) { delete image; }

cip_status cip_tile_to_directory(const cip_image* image, const cip_plan* plan, const char* dir,
                                 uint32_t threads, size_t* written) {
  return guarded([&] {
    require_non_null(image, "image");
    require_non_null(plan, "plan");
    require_non_null(dir, "dir");
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) cip::fail(cip::ErrorCode::kIo, std::string("cannot create ") + dir + ": " + ec.message());
    const auto sets = cip::crop_tiles(image->image, plan->plan, threads);
    std::size_t count = 0;
    for (const auto& set : sets) {
      cip::parallel_for(set.tiles.size(), threads, [&](std::size_t i) {
        const auto& t = set.tiles[i];
        const std::string name = std::string(cip::to_string(set.level)) + "_" +
                                 std::to_string(t.row) + "_" + std::to_string(t.col) + ".png";
        cip::save_png(t.image, (fs::path(dir) / name).string());
      });
      count += set.tiles.size();
    }
    const std::string json = dump(cip::plan_to_json(plan->plan), 2);
    const std::string plan_path = (fs::path(dir) / "plan.json").string();
    std::FILE* f = std::fopen(plan_path.c_str(), "wb");
    if (!f) cip::fail(cip::ErrorCode::kIo, "cannot write " + plan_path);
    const bool ok = std::fwrite(json.data(), 1, json.size(), f) == json.size();
    if (std::fclose(f) != 0 || !ok) cip::fail(cip::ErrorCode::kIo, "write failed: " + plan_path);
    if (written) *written = count;
  });
}

cip_status cip_tensor_create(size_t rows, size_t cols, cip_level level, const float* data,
                             cip_tensor** out) {
  return guarded([&] {
    require_non_null(data, "data");
    require_non_null(out, "out");
    *out = nullptr;
    cip::require(static_cast<int>(level) >= 0 && static_cast<int>(level) <= 3, "bad level");
    auto handle = std::make_unique<cip_tensor>();
    handle->matrix = cip::TokenMatrix(rows, cols, static_cast<cip::TokenLevel>(level),
                                      std::vector<float>(data, data + rows * cols));
    *out = handle.release();
  });
}

cip_status cip_tensor_load(const char* path, cip_tensor** out) {
  return guarded([&] {
    require_non_null(path, "path");
    require_non_null(out, "out");
    *out = nullptr;
    auto handle = std::make_unique<cip_tensor>();
    handle->matrix = cip::read_cipt(path);
    *out = handle.release();
  });
}

cip_status cip_tensor_save(const cip_tensor* tensor, const char* path) {
  return guarded([&] {
    require_non_null(tensor, "tensor");
    require_non_null(path, "path");
    cip::write_cipt(tensor->matrix, path);
  });
}

size_t cip_tensor_rows(const cip_tensor* t) { return t ? t->matrix.rows() : 0; }
size_t cip_tensor_cols(const cip_tensor* t) { return t ? t->matrix.cols() : 0; }
cip_level cip_tensor_level(const cip_tensor* t) {
  return t ? static_cast<cip_level>(t->matrix.level()) : CIP_LEVEL_DETAILED;
}
const float* cip_tensor_data(const cip_tensor* t) { return t ? t->matrix.data().data() : nullptr; }
void cip_tensor_destroy(cip_tensor* tensor) { delete tensor; }

void cip_encoder_options_default(cip_encoder_options* options) {
  if (!options) return;
  const cip::EncoderConfig d;
  options->patch = static_cast<uint32_t>(d.patch);
  options->downsample = static_cast<uint32_t>(d.downsample);
  options->channels = static_cast<uint32_t>(d.channels);
  options->seed = d.seed;
  options->threads = 1;
}

cip_status cip_encode_level(const cip_image* image, const cip_plan* plan, cip_level level,
                            const cip_encoder_options* options, cip_tensor** out) {
  return guarded([&] {
    require_non_null(image, "image");
    require_non_null(plan, "plan");
    require_non_null(out, "out");
    *out = nullptr;
    cip_encoder_options o;
    cip_encoder_options_default(&o);
    if (options) o = *options;
    cip::require(level != CIP_LEVEL_TEXT, "text is not a pyramid level");
    const auto name = static_cast<cip::LevelName>(level);
    const cip::PlanLevel* pl = plan->plan.find(name);
    cip::require(pl != nullptr,
                 "plan has no " + std::string(cip::to_string(name)) + " level");
    cip::PyramidPlan single = plan->plan;
    single.levels = {*pl};
    cip::EncoderConfig cfg;
    cfg.patch = to_int(o.patch, "patch");
    cfg.downsample = to_int(o.downsample, "downsample");
    cfg.channels = to_int(o.channels, "channels");
    cfg.seed = o.seed;
    cip::tokens_per_tile(single.tile_side, cfg);  // validates divisibility up front
    const auto sets = cip::crop_tiles(image->image, single, o.threads);
    auto handle = std::make_unique<cip_tensor>();
    handle->matrix = cip::encode_tiles(sets.front(), cfg, o.threads);
    *out = handle.release();
  });
}

cip_status cip_embed_text(const char* prompt, uint32_t channels, uint64_t seed, cip_tensor** out) {
  return guarded([&] {
    require_non_null(prompt, "prompt");
    require_non_null(out, "out");
    *out = nullptr;
    auto handle = std::make_unique<cip_tensor>();
    handle->matrix = cip::embed_text(prompt, to_int(channels, "channels"), seed);
    *out = handle.release();
  });
}

void cip_scm_options_default(cip_scm_options* options) {
  if (!options) return;
  options->drop_ratio = 0.0;
  options->use_pe = 1;
  options->threads = 1;
  options->query_proj = nullptr;
  options->key_proj = nullptr;
}

cip_status cip_compress(const cip_tensor* detailed, const cip_tensor* adaptive,
                        const cip_tensor* global, const cip_tensor* text,
                        const cip_scm_options* options, cip_compression** out) {
  return guarded([&] {
    require_non_null(detailed, "detailed");
    require_non_null(adaptive, "adaptive");
    require_non_null(global, "global");
    require_non_null(text, "text");
    require_non_null(out, "out");
    *out = nullptr;
    cip_scm_options o;
    cip_scm_options_default(&o);
    if (options) o = *options;
    cip::kept_count(1, o.drop_ratio);  // rejects drop_ratio outside [0, 1) before scoring
    cip::ScoreOptions so;
    so.use_pe = o.use_pe != 0;
    so.threads = o.threads;
    so.query_proj = o.query_proj ? &o.query_proj->matrix : nullptr;
    so.key_proj = o.key_proj ? &o.key_proj->matrix : nullptr;
    const auto scores =
        cip::score(detailed->matrix, adaptive->matrix, global->matrix, text->matrix, so);
    auto handle = std::make_unique<cip_compression>();
    handle->result = cip::compress(detailed->matrix, scores, o.drop_ratio);
    handle->weights = scores.weights;
    handle->kept.assign(handle->result.kept_indices.begin(), handle->result.kept_indices.end());
    *out = handle.release();
  });
}

size_t cip_compression_original_length(const cip_compression* c) {
  return c ? c->result.original_length : 0;
}
size_t cip_compression_kept_count(const cip_compression* c) { return c ? c->kept.size() : 0; }
const uint64_t* cip_compression_kept_indices(const cip_compression* c) {
  return c ? c->kept.data() : nullptr;
}
const double* cip_compression_weights(const cip_compression* c, size_t* count) {
  if (!c) return nullptr;
  if (count) *count = c->weights.size();
  return c->weights.data();
}

cip_status cip_compression_detailed(const cip_compression* c, cip_tensor** out) {
  return guarded([&] {
    require_non_null(c, "compression");
    require_non_null(out, "out");
    *out = new cip_tensor{c->result.detailed};
  });
}

cip_status cip_compression_sidecar_json(const cip_compression* c, int indent, char** out) {
  return guarded([&] {
    require_non_null(c, "compression");
    require_non_null(out, "out");
    *out = dup_string(dump(cip::compression_sidecar(c->result), indent));
  });
}

cip_status cip_assemble_llm_input(const cip_compression* c, const cip_tensor* adaptive,
                                  const cip_tensor* global, const cip_tensor* text,
                                  cip_tensor** out) {
  return guarded([&] {
    require_non_null(c, "compression");
    require_non_null(adaptive, "adaptive");
    require_non_null(global, "global");
    require_non_null(text, "text");
    require_non_null(out, "out");
    *out = nullptr;
    auto handle = std::make_unique<cip_tensor>();
    handle->matrix =
        cip::assemble_llm_input(c->result, adaptive->matrix, global->matrix, text->matrix);
    *out = handle.release();
  });
}

void cip_compression_destroy(cip_compression* c) { delete c; }

cip_status cip_fastv_scores(const cip_tensor* all_tokens, size_t visual_tokens, int k_layer,
                            int use_pe, double* out) {
  return guarded([&] {
    require_non_null(all_tokens, "all_tokens");
    require_non_null(out, "out");
    const auto w =
        cip::fastv_baseline_score(all_tokens->matrix, visual_tokens, k_layer, use_pe != 0);
    std::copy(w.begin(), w.end(), out);
  });
}

void cip_scene_options_default(cip_scene_options* options) {
  if (!options) return;
  options->canvas_width = 4480;
  options->canvas_height = 4480;
  options->objects = 100;
  options->min_size = 20;
  options->max_size = 60;
  options->seed = 0;
}

cip_status cip_analyze(const cip_scene_options* scene, const char* strategies, uint32_t budget,
                       uint32_t tile_side, uint32_t threads, cip_report** out) {
  return guarded([&] {
    require_non_null(strategies, "strategies");
    require_non_null(out, "out");
    *out = nullptr;
    cip_scene_options s;
    cip_scene_options_default(&s);
    if (scene) s = *scene;
    auto handle = std::make_unique<cip_report>();
    handle->report = cip::analyze(make_scene(s), cip::parse_strategy_list(strategies),
                                  to_int(budget, "budget"), to_int(tile_side, "tile_side"),
                                  threads);
    *out = handle.release();
  });
}

size_t cip_report_strategy_count(const cip_report* report) {
  return report ? report->report.strategies.size() : 0;
}

cip_status cip_report_cut_counts(const cip_report* report, size_t i, int64_t* cut,
                                 int64_t* total) {
  return guarded([&] {
    require_non_null(report, "report");
    cip::require(i < report->report.strategies.size(), "strategy index out of range");
    const auto& s = report->report.strategies[i];
    if (cut) *cut = s.cut_all_levels;
    if (total) *total = s.total;
  });
}

cip_status cip_report_to_json(const cip_report* report, int indent, char** out) {
  return guarded([&] {
    require_non_null(report, "report");
    require_non_null(out, "out");
    *out = dup_string(dump(cip::report_to_json(report->report), indent));
  });
}

cip_status cip_report_to_csv(const cip_report* report, char** out) {
  return guarded([&] {
    require_non_null(report, "report");
    require_non_null(out, "out");
    *out = dup_string(cip::report_to_csv(report->report));
  });
}

void cip_report_destroy(cip_report* report) { delete report; }

cip_status cip_budget_sweep(const cip_scene_options* scene, const char* strategies,
                            const uint32_t* budgets, size_t budget_count, uint32_t tile_side,
                            uint32_t threads, char** out) {
  return guarded([&] {
    require_non_null(strategies, "strategies");
    require_non_null(budgets, "budgets");
    require_non_null(out, "out");
    cip::require(budget_count >= 1, "need at least one budget");
    cip_scene_options s;
    cip_scene_options_default(&s);
    if (scene) s = *scene;
    const auto specs = cip::parse_strategy_list(strategies);
    const auto sc = make_scene(s);
    std::ostringstream dat;
    dat << "# crop-boundary cut rate vs tile budget (proxy for the semantic sawtooth effect)\n"
        << "# canvas " << sc.canvas.w << "x" << sc.canvas.h << " objects " << sc.objects.size()
        << " seed " << sc.seed << " tile_side " << tile_side << "\n"
        << "# budget";
    for (const auto& spec : specs) dat << ' ' << spec.label << ' ' << spec.label << "/no_global";
    dat << '\n';
    char buf[32];
    for (std::size_t b = 0; b < budget_count; ++b) {
      const auto report = cip::analyze(sc, specs, to_int(budgets[b], "budget"),
                                       to_int(tile_side, "tile_side"), threads);
      dat << budgets[b];
      for (const auto& sr : report.strategies) {
        std::snprintf(buf, sizeof buf, " %.6f", sr.cut_rate());
        dat << buf;
        const double ng = sr.total == 0 ? 0.0
                                        : static_cast<double>(sr.cut_all_but_global) /
                                              static_cast<double>(sr.total);
        std::snprintf(buf, sizeof buf, " %.6f", ng);
        dat << buf;
      }
      dat << '\n';
    }
    *out = dup_string(dat.str());
  });
}

}  // extern "C"
