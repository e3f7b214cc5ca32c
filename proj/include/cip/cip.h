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

/*
 * C interface to the complementary image pyramid toolkit.
 *
 * Objects are opaque handles created by *_create / *_load functions and
 * released with the matching *_destroy. Every fallible call returns a
 * cip_status; on failure cip_last_error() holds a message for the calling
 * thread until its next failing call. Strings returned through char** out
 * parameters are owned by the caller and must be released with
 * cip_string_free().
 *
 * All functions are reentrant. Handles are immutable after creation and may
 * be shared between threads.
 */
#ifndef CIP_CIP_H_
#define CIP_CIP_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CIP_BUILDING_LIBRARY)
#    define CIP_API __declspec(dllexport)
#  else
#    define CIP_API __declspec(dllimport)
#  endif
#else
#  define CIP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cip_status {
  CIP_OK = 0,
  CIP_ERR_INVALID_ARGUMENT = 1,
  CIP_ERR_BUDGET_TOO_SMALL = 2,
  CIP_ERR_EMPTY_POOL = 3,
  CIP_ERR_IO = 4,
  CIP_ERR_FORMAT = 5,
  CIP_ERR_INTERNAL = 6
} cip_status;

CIP_API const char* cip_version(void);
CIP_API const char* cip_status_string(cip_status status);
CIP_API const char* cip_last_error(void);
CIP_API void cip_string_free(char* s);

/* ---- planning ---------------------------------------------------------- */

typedef enum cip_strategy {
  CIP_STRATEGY_CIP = 0,
  CIP_STRATEGY_DYNAMIC = 1,
  CIP_STRATEGY_FIXED = 2,
  CIP_STRATEGY_OVERLAPPING = 3,
  CIP_STRATEGY_MULTISCALE_FIXED = 4
} cip_strategy;

CIP_API cip_status cip_strategy_from_string(const char* name, cip_strategy* out);

typedef struct cip_plan_options {
  uint32_t budget;       /* max tiles; default 24 */
  uint32_t tile_side;    /* px; default 448 */
  cip_strategy strategy; /* default CIP_STRATEGY_CIP */
  double overlap_frac;   /* overlapping strategy; default 0.5 */
  uint32_t fixed_rows;   /* fixed / multiscale_fixed grid; default 3x3 */
  uint32_t fixed_cols;
} cip_plan_options;

CIP_API void cip_plan_options_default(cip_plan_options* options);

typedef struct cip_plan cip_plan;

CIP_API cip_status cip_plan_create(uint32_t width, uint32_t height,
                                   const cip_plan_options* options,
                                   cip_plan** out);
CIP_API cip_status cip_plan_from_json(const char* json, cip_plan** out);
CIP_API void cip_plan_destroy(cip_plan* plan);

CIP_API size_t cip_plan_level_count(const cip_plan* plan);
CIP_API size_t cip_plan_total_tiles(const cip_plan* plan);
/* `name` points to static storage ("detailed", "adaptive", "global"). */
CIP_API cip_status cip_plan_level_info(const cip_plan* plan, size_t level,
                                       const char** name, uint32_t* rows,
                                       uint32_t* cols, size_t* tiles);
/* indent < 0 gives compact single-line JSON. */
CIP_API cip_status cip_plan_to_json(const cip_plan* plan, int indent, char** out);

/* ---- images and tiles -------------------------------------------------- */

typedef struct cip_image cip_image;

/* PNG or JPEG; alpha is dropped. */
CIP_API cip_status cip_image_load(const char* path, cip_image** out);
/* Copies width*height*3 interleaved RGB bytes. */
CIP_API cip_status cip_image_from_rgb(uint32_t width, uint32_t height,
                                      const uint8_t* rgb, cip_image** out);
CIP_API uint32_t cip_image_width(const cip_image* image);
CIP_API uint32_t cip_image_height(const cip_image* image);
CIP_API const uint8_t* cip_image_data(const cip_image* image);
CIP_API cip_status cip_image_save_png(const cip_image* image, const char* path);
CIP_API cip_status cip_image_resize(const cip_image* image, uint32_t width,
                                    uint32_t height, cip_image** out);
CIP_API void cip_image_destroy(cip_image* image);

/* Writes {level}_{row}_{col}.png for every tile plus plan.json into `dir`
 * (created if missing). */
CIP_API cip_status cip_tile_to_directory(const cip_image* image,
                                         const cip_plan* plan, const char* dir,
                                         uint32_t threads, size_t* written);

/* ---- token matrices ---------------------------------------------------- */

typedef enum cip_level {
  CIP_LEVEL_DETAILED = 0,
  CIP_LEVEL_ADAPTIVE = 1,
  CIP_LEVEL_GLOBAL = 2,
  CIP_LEVEL_TEXT = 3
} cip_level;

typedef struct cip_tensor cip_tensor;

CIP_API cip_status cip_tensor_create(size_t rows, size_t cols, cip_level level,
                                     const float* data, cip_tensor** out);
CIP_API cip_status cip_tensor_load(const char* path, cip_tensor** out);
CIP_API cip_status cip_tensor_save(const cip_tensor* tensor, const char* path);
CIP_API size_t cip_tensor_rows(const cip_tensor* tensor);
CIP_API size_t cip_tensor_cols(const cip_tensor* tensor);
CIP_API cip_level cip_tensor_level(const cip_tensor* tensor);
CIP_API const float* cip_tensor_data(const cip_tensor* tensor);
CIP_API void cip_tensor_destroy(cip_tensor* tensor);

typedef struct cip_encoder_options {
  uint32_t patch;      /* default 14 */
  uint32_t downsample; /* default 2 */
  uint32_t channels;   /* default 64 */
  uint64_t seed;       /* default 0 */
  uint32_t threads;    /* default 1 */
} cip_encoder_options;

CIP_API void cip_encoder_options_default(cip_encoder_options* options);

/* Tiles `image` per `plan` and encodes the tiles of one pyramid level. */
CIP_API cip_status cip_encode_level(const cip_image* image, const cip_plan* plan,
                                    cip_level level,
                                    const cip_encoder_options* options,
                                    cip_tensor** out);
CIP_API cip_status cip_embed_text(const char* prompt, uint32_t channels,
                                  uint64_t seed, cip_tensor** out);

/* ---- scale compression ------------------------------------------------- */

typedef struct cip_scm_options {
  double drop_ratio;             /* fraction of detailed tokens dropped, [0,1) */
  int use_pe;                    /* default 1 */
  uint32_t threads;              /* default 1 */
  const cip_tensor* query_proj;  /* optional C x D; both or neither */
  const cip_tensor* key_proj;
} cip_scm_options;

CIP_API void cip_scm_options_default(cip_scm_options* options);

typedef struct cip_compression cip_compression;

CIP_API cip_status cip_compress(const cip_tensor* detailed,
                                const cip_tensor* adaptive,
                                const cip_tensor* global, const cip_tensor* text,
                                const cip_scm_options* options,
                                cip_compression** out);
CIP_API size_t cip_compression_original_length(const cip_compression* c);
CIP_API size_t cip_compression_kept_count(const cip_compression* c);
CIP_API const uint64_t* cip_compression_kept_indices(const cip_compression* c);
/* Column-mean attention weights, one per original detailed token. */
CIP_API const double* cip_compression_weights(const cip_compression* c, size_t* count);
CIP_API cip_status cip_compression_detailed(const cip_compression* c, cip_tensor** out);
/* {"L1", "K", "drop_ratio", "kept_indices"} */
CIP_API cip_status cip_compression_sidecar_json(const cip_compression* c, int indent,
                                                char** out);
CIP_API cip_status cip_assemble_llm_input(const cip_compression* c,
                                          const cip_tensor* adaptive,
                                          const cip_tensor* global,
                                          const cip_tensor* text, cip_tensor** out);
CIP_API void cip_compression_destroy(cip_compression* c);

/* Naive FastV-style baseline; writes `visual_tokens` weights to `out`. */
CIP_API cip_status cip_fastv_scores(const cip_tensor* all_tokens, size_t visual_tokens,
                                    int k_layer, int use_pe, double* out);

/* ---- sawtooth analysis ------------------------------------------------- */

typedef struct cip_scene_options {
  uint32_t canvas_width;  /* default 4480 */
  uint32_t canvas_height; /* default 4480 */
  uint32_t objects;       /* default 100 */
  uint32_t min_size;      /* default 20 */
  uint32_t max_size;      /* default 60 */
  uint64_t seed;          /* default 0 */
} cip_scene_options;

CIP_API void cip_scene_options_default(cip_scene_options* options);

typedef struct cip_report cip_report;

/* `strategies` is a comma-separated list such as "cip,dynamic,fixed:3x3". */
CIP_API cip_status cip_analyze(const cip_scene_options* scene, const char* strategies,
                               uint32_t budget, uint32_t tile_side, uint32_t threads,
                               cip_report** out);
CIP_API size_t cip_report_strategy_count(const cip_report* report);
/* Objects cut at every level of strategy `i`, and the object total. */
CIP_API cip_status cip_report_cut_counts(const cip_report* report, size_t i,
                                         int64_t* cut, int64_t* total);
CIP_API cip_status cip_report_to_json(const cip_report* report, int indent, char** out);
CIP_API cip_status cip_report_to_csv(const cip_report* report, char** out);
CIP_API void cip_report_destroy(cip_report* report);

/* Gnuplot-style whitespace table of cut rate per strategy against budget. */
CIP_API cip_status cip_budget_sweep(const cip_scene_options* scene,
                                    const char* strategies, const uint32_t* budgets,
                                    size_t budget_count, uint32_t tile_side,
                                    uint32_t threads, char** out);

#ifdef __cplusplus
}
#endif

#endif  // CIP_CIP_H_
