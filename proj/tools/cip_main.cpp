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

// `cip` command-line tool. Talks to the library only through the C API.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cip/cip.h"

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

enum ExitCode { kExitOk = 0, kExitInternal = 1, kExitUsage = 2, kExitIo = 3 };

struct Failure {
  int exit_code;
  std::string message;
};

int exit_code_for(cip_status s) {
  switch (s) {
    case CIP_OK: return kExitOk;
    case CIP_ERR_INVALID_ARGUMENT:
    case CIP_ERR_BUDGET_TOO_SMALL:
    case CIP_ERR_EMPTY_POOL: return kExitUsage;
    case CIP_ERR_IO:
    case CIP_ERR_FORMAT: return kExitIo;
    case CIP_ERR_INTERNAL: return kExitInternal;
  }
  return kExitInternal;
}

void check(cip_status s) {
  if (s != CIP_OK) throw Failure{exit_code_for(s), cip_last_error()};
}

template <auto Destroy>
struct HandleDeleter {
  template <typename T>
  void operator()(T* p) const {
    Destroy(p);
  }
};

using PlanPtr = std::unique_ptr<cip_plan, HandleDeleter<cip_plan_destroy>>;
using ImagePtr = std::unique_ptr<cip_image, HandleDeleter<cip_image_destroy>>;
using TensorPtr = std::unique_ptr<cip_tensor, HandleDeleter<cip_tensor_destroy>>;
using CompressionPtr = std::unique_ptr<cip_compression, HandleDeleter<cip_compression_destroy>>;
using ReportPtr = std::unique_ptr<cip_report, HandleDeleter<cip_report_destroy>>;

std::string take_string(char* s) {
  std::string out(s);
  cip_string_free(s);
  return out;
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Failure{kExitIo, "cannot open " + path.string() + " for writing"};
  out << contents;
  if (!out) throw Failure{kExitIo, "write failed: " + path.string()};
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Failure{kExitIo, "cannot create " + dir.string() + ": " + ec.message()};
}

std::pair<uint32_t, uint32_t> parse_wxh(const std::string& s, const char* what) {
  unsigned long a = 0, b = 0;
  char x = 0, extra = 0;
  std::istringstream in(s);
  if (!(in >> a >> x >> b) || (x != 'x' && x != 'X') || (in >> extra) || a == 0 || b == 0 ||
      a > UINT32_MAX || b > UINT32_MAX)
    throw Failure{kExitUsage, std::string(what) + " must look like WxH, got '" + s + "'"};
  return {static_cast<uint32_t>(a), static_cast<uint32_t>(b)};
}

// Flags shared by every subcommand that builds a plan.
struct PlanFlags {
  uint32_t budget = 24;
  uint32_t tile_side = 448;
  std::string strategy = "cip";
  double overlap = 0.5;
  std::string fixed_grid = "3x3";

  void add_to(CLI::App* app) {
    app->add_option("--budget", budget, "Maximum total tiles")->envname("CIP_BUDGET");
    app->add_option("--tile-side", tile_side, "Tile side in pixels")->envname("CIP_TILE_SIDE");
    app->add_option("--strategy", strategy,
                    "cip | dynamic | fixed | overlapping | multiscale_fixed");
    app->add_option("--overlap", overlap, "Overlap fraction for the overlapping strategy");
    app->add_option("--fixed-grid", fixed_grid, "RxC grid for fixed strategies");
  }

  cip_plan_options options() const {
    cip_plan_options o;
    cip_plan_options_default(&o);
    o.budget = budget;
    o.tile_side = tile_side;
    check(cip_strategy_from_string(strategy.c_str(), &o.strategy));
    o.overlap_frac = overlap;
    // RxC: rows first.
    const auto [rows, cols] = parse_wxh(fixed_grid, "--fixed-grid");
    o.fixed_rows = rows;
    o.fixed_cols = cols;
    return o;
  }
};

struct EncoderFlags {
  uint32_t patch = 14;
  uint32_t downsample = 2;
  uint32_t channels = 64;

  void add_to(CLI::App* app) {
    app->add_option("--patch", patch, "Encoder patch size");
    app->add_option("--downsample", downsample, "Encoder token merge factor");
    app->add_option("--channels", channels, "Token channel dim C");
  }

  cip_encoder_options options(uint64_t seed, uint32_t threads) const {
    cip_encoder_options o;
    cip_encoder_options_default(&o);
    o.patch = patch;
    o.downsample = downsample;
    o.channels = channels;
    o.seed = seed;
    o.threads = threads;
    return o;
  }
};

struct SceneFlags {
  std::string canvas = "4480x4480";
  uint32_t objects = 100;
  uint32_t min_size = 20;
  uint32_t max_size = 60;
  std::string strategies = "cip,dynamic,fixed,overlapping,multiscale_fixed";

  void add_to(CLI::App* app) {
    app->add_option("--canvas", canvas, "Scene canvas WxH");
    app->add_option("--objects", objects, "Number of objects");
    app->add_option("--min-size", min_size, "Minimum object side (px)");
    app->add_option("--max-size", max_size, "Maximum object side (px)");
    app->add_option("--strategies", strategies, "Comma-separated strategy list");
  }

  cip_scene_options options(uint64_t seed) const {
    cip_scene_options o;
    cip_scene_options_default(&o);
    const auto [w, h] = parse_wxh(canvas, "--canvas");
    o.canvas_width = w;
    o.canvas_height = h;
    o.objects = objects;
    o.min_size = min_size;
    o.max_size = max_size;
    o.seed = seed;
    return o;
  }
};

PlanPtr build_plan(uint32_t w, uint32_t h, const PlanFlags& flags) {
  const auto opts = flags.options();
  cip_plan* raw = nullptr;
  check(cip_plan_create(w, h, &opts, &raw));
  return PlanPtr(raw);
}

ImagePtr load_image(const std::string& path) {
  cip_image* raw = nullptr;
  check(cip_image_load(path.c_str(), &raw));
  return ImagePtr(raw);
}

TensorPtr load_tensor(const std::string& path) {
  cip_tensor* raw = nullptr;
  check(cip_tensor_load(path.c_str(), &raw));
  return TensorPtr(raw);
}

void save_tensor(const cip_tensor* t, const fs::path& path) {
  check(cip_tensor_save(t, path.string().c_str()));
}

const char* level_name(cip_level l) {
  switch (l) {
    case CIP_LEVEL_DETAILED: return "detailed";
    case CIP_LEVEL_ADAPTIVE: return "adaptive";
    case CIP_LEVEL_GLOBAL: return "global";
    case CIP_LEVEL_TEXT: return "text";
  }
  return "?";
}

struct PyramidTokens {
  TensorPtr detailed, adaptive, global;
};

PyramidTokens encode_pyramid(const cip_image* image, const cip_plan* plan,
                             const cip_encoder_options& enc) {
  PyramidTokens out;
  for (cip_level level : {CIP_LEVEL_DETAILED, CIP_LEVEL_ADAPTIVE, CIP_LEVEL_GLOBAL}) {
    cip_tensor* raw = nullptr;
    check(cip_encode_level(image, plan, level, &enc, &raw));
    TensorPtr t(raw);
    if (level == CIP_LEVEL_DETAILED) out.detailed = std::move(t);
    if (level == CIP_LEVEL_ADAPTIVE) out.adaptive = std::move(t);
    if (level == CIP_LEVEL_GLOBAL) out.global = std::move(t);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Complementary image pyramid planner, tiler and token compressor"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cip_version()));

  bool json_out = false;
  uint32_t threads = 1;
  uint64_t seed = 0;
  app.add_flag("--json", json_out, "Machine-readable stdout");
  app.add_option("--threads", threads, "Worker threads (output does not depend on it)");
  app.add_option("--seed", seed, "Seed for encoder and scene generation")->envname("CIP_SEED");

  auto add_common = [&](CLI::App* sub) {
    sub->add_flag("--json", json_out, "Machine-readable stdout");
    sub->add_option("--threads", threads, "Worker threads (output does not depend on it)");
    sub->add_option("--seed", seed, "Seed for encoder and scene generation")->envname("CIP_SEED");
  };

  // plan
  auto* plan_cmd = app.add_subcommand("plan", "Print the pyramid plan JSON");
  PlanFlags plan_flags;
  plan_flags.add_to(plan_cmd);
  std::string plan_dims, plan_image, plan_out;
  auto* dims_opt = plan_cmd->add_option("--dims", plan_dims, "Input WxH");
  plan_cmd->add_option("--image", plan_image, "Read dims from an image")->excludes(dims_opt);
  plan_cmd->add_option("--out", plan_out, "Also write the JSON to this file");
  add_common(plan_cmd);

  // tile
  auto* tile_cmd = app.add_subcommand("tile", "Write tile PNGs and plan.json");
  PlanFlags tile_flags;
  tile_flags.add_to(tile_cmd);
  std::string tile_image, tile_out;
  tile_cmd->add_option("--image", tile_image, "Input PNG/JPEG")->required();
  tile_cmd->add_option("--out", tile_out, "Output directory")->required();
  add_common(tile_cmd);

  // encode
  auto* encode_cmd = app.add_subcommand("encode", "Encode pyramid levels to CIPT tensors");
  PlanFlags encode_plan_flags;
  encode_plan_flags.add_to(encode_cmd);
  EncoderFlags encode_flags;
  encode_flags.add_to(encode_cmd);
  std::string encode_image, encode_out, encode_prompt;
  encode_cmd->add_option("--image", encode_image, "Input PNG/JPEG")->required();
  encode_cmd->add_option("--out", encode_out, "Output directory")->required();
  encode_cmd->add_option("--prompt", encode_prompt, "Also write text.cipt for this prompt");
  add_common(encode_cmd);

  // compress
  auto* compress_cmd = app.add_subcommand("compress", "Scale compression of detailed tokens");
  PlanFlags compress_plan_flags;
  compress_plan_flags.add_to(compress_cmd);
  EncoderFlags compress_enc_flags;
  compress_enc_flags.add_to(compress_cmd);
  std::string c_detailed, c_adaptive, c_global, c_text, c_image, c_prompt, c_out, c_qproj,
      c_kproj;
  double drop_ratio = 0.5;
  bool no_pe = false;
  compress_cmd->add_option("--detailed", c_detailed, "Detailed-level CIPT");
  compress_cmd->add_option("--adaptive", c_adaptive, "Adaptive-level CIPT");
  compress_cmd->add_option("--global", c_global, "Global-level CIPT");
  compress_cmd->add_option("--text", c_text, "Text CIPT");
  compress_cmd->add_option("--image", c_image, "Run plan+encode on this image instead");
  compress_cmd->add_option("--prompt", c_prompt, "Prompt for --image mode");
  compress_cmd->add_option("--query-proj", c_qproj, "Optional C x D query projection (CIPT)");
  compress_cmd->add_option("--key-proj", c_kproj, "Optional C x D key projection (CIPT)");
  compress_cmd->add_option("--drop-ratio", drop_ratio, "Fraction of detailed tokens dropped");
  compress_cmd->add_flag("--no-pe", no_pe, "Disable positional encoding");
  compress_cmd->add_option("--out", c_out, "Output directory")->required();
  add_common(compress_cmd);

  // analyze
  auto* analyze_cmd = app.add_subcommand("analyze", "Crop-boundary cut statistics on a scene");
  SceneFlags analyze_scene;
  analyze_scene.add_to(analyze_cmd);
  uint32_t a_budget = 24, a_tile_side = 448;
  std::string a_out;
  analyze_cmd->add_option("--budget", a_budget, "Maximum total tiles")->envname("CIP_BUDGET");
  analyze_cmd->add_option("--tile-side", a_tile_side, "Tile side")->envname("CIP_TILE_SIDE");
  analyze_cmd->add_option("--out", a_out, "Write sawtooth.json and sawtooth.csv here");
  add_common(analyze_cmd);

  // report
  auto* report_cmd = app.add_subcommand("report", "Cut rate vs budget table (gnuplot data)");
  SceneFlags report_scene;
  report_scene.add_to(report_cmd);
  std::vector<uint32_t> r_budgets = {18, 24, 32, 48};
  uint32_t r_tile_side = 448;
  std::string r_out;
  report_cmd->add_option("--budgets", r_budgets, "Budgets to sweep")->delimiter(',');
  report_cmd->add_option("--tile-side", r_tile_side, "Tile side")->envname("CIP_TILE_SIDE");
  report_cmd->add_option("--out", r_out, "Write sawtooth_vs_budget.dat here");
  add_common(report_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*plan_cmd) {
      uint32_t w = 0, h = 0;
      if (!plan_image.empty()) {
        auto img = load_image(plan_image);
        w = cip_image_width(img.get());
        h = cip_image_height(img.get());
      } else if (!plan_dims.empty()) {
        std::tie(w, h) = parse_wxh(plan_dims, "--dims");
      } else {
        // No input given: plan a single-tile square image.
        w = h = plan_flags.tile_side;
      }
      auto plan = build_plan(w, h, plan_flags);
      const std::string text = take_string([&] {
        char* s = nullptr;
        check(cip_plan_to_json(plan.get(), json_out ? -1 : 2, &s));
        return s;
      }());
      if (!plan_out.empty()) write_file(plan_out, text);
      std::cout << text << (json_out ? "\n" : "");
      return kExitOk;
    }

    if (*tile_cmd) {
      auto img = load_image(tile_image);
      auto plan = build_plan(cip_image_width(img.get()), cip_image_height(img.get()), tile_flags);
      size_t written = 0;
      check(cip_tile_to_directory(img.get(), plan.get(), tile_out.c_str(), threads, &written));
      if (json_out) {
        std::cout << Json{{"tiles", written}, {"out", tile_out}}.dump() << "\n";
      } else {
        std::cout << "wrote " << written << " tiles and plan.json to " << tile_out << "\n";
      }
      return kExitOk;
    }

    if (*encode_cmd) {
      auto img = load_image(encode_image);
      auto plan =
          build_plan(cip_image_width(img.get()), cip_image_height(img.get()), encode_plan_flags);
      const auto enc = encode_flags.options(seed, threads);
      make_dir(encode_out);
      Json summary = Json::object();
      for (size_t i = 0; i < cip_plan_level_count(plan.get()); ++i) {
        const char* name = nullptr;
        check(cip_plan_level_info(plan.get(), i, &name, nullptr, nullptr, nullptr));
        const cip_level level = std::string(name) == "detailed"   ? CIP_LEVEL_DETAILED
                                : std::string(name) == "adaptive" ? CIP_LEVEL_ADAPTIVE
                                                                  : CIP_LEVEL_GLOBAL;
        cip_tensor* raw = nullptr;
        check(cip_encode_level(img.get(), plan.get(), level, &enc, &raw));
        TensorPtr t(raw);
        save_tensor(t.get(), fs::path(encode_out) / (std::string(name) + ".cipt"));
        summary[name] = {{"L", cip_tensor_rows(t.get())}, {"C", cip_tensor_cols(t.get())}};
      }
      if (!encode_prompt.empty()) {
        cip_tensor* raw = nullptr;
        check(cip_embed_text(encode_prompt.c_str(), encode_flags.channels, seed, &raw));
        TensorPtr t(raw);
        save_tensor(t.get(), fs::path(encode_out) / "text.cipt");
        summary["text"] = {{"L", cip_tensor_rows(t.get())}, {"C", cip_tensor_cols(t.get())}};
      }
      if (json_out) {
        std::cout << summary.dump() << "\n";
      } else {
        for (const auto& [name, v] : summary.items())
          std::cout << name << ": L=" << v["L"] << " C=" << v["C"] << "\n";
      }
      return kExitOk;
    }

    if (*compress_cmd) {
      TensorPtr detailed, adaptive, global, text;
      if (!c_image.empty()) {
        if (c_prompt.empty()) throw Failure{kExitUsage, "--image mode needs --prompt"};
        auto img = load_image(c_image);
        auto plan = build_plan(cip_image_width(img.get()), cip_image_height(img.get()),
                               compress_plan_flags);
        auto tokens = encode_pyramid(img.get(), plan.get(), compress_enc_flags.options(seed, threads));
        detailed = std::move(tokens.detailed);
        adaptive = std::move(tokens.adaptive);
        global = std::move(tokens.global);
        cip_tensor* raw = nullptr;
        check(cip_embed_text(c_prompt.c_str(), compress_enc_flags.channels, seed, &raw));
        text.reset(raw);
      } else {
        if (c_detailed.empty() || c_adaptive.empty() || c_global.empty() || c_text.empty())
          throw Failure{kExitUsage,
                        "give --detailed, --adaptive, --global and --text, or --image and --prompt"};
        detailed = load_tensor(c_detailed);
        adaptive = load_tensor(c_adaptive);
        global = load_tensor(c_global);
        text = load_tensor(c_text);
      }
      TensorPtr qproj, kproj;
      if (!c_qproj.empty()) qproj = load_tensor(c_qproj);
      if (!c_kproj.empty()) kproj = load_tensor(c_kproj);

      cip_scm_options so;
      cip_scm_options_default(&so);
      so.drop_ratio = drop_ratio;
      so.use_pe = no_pe ? 0 : 1;
      so.threads = threads;
      so.query_proj = qproj.get();
      so.key_proj = kproj.get();
      cip_compression* raw = nullptr;
      check(cip_compress(detailed.get(), adaptive.get(), global.get(), text.get(), &so, &raw));
      CompressionPtr comp(raw);

      make_dir(c_out);
      cip_tensor* kept_raw = nullptr;
      check(cip_compression_detailed(comp.get(), &kept_raw));
      TensorPtr kept(kept_raw);
      save_tensor(kept.get(), fs::path(c_out) / "compressed.cipt");
      char* sidecar = nullptr;
      check(cip_compression_sidecar_json(comp.get(), 2, &sidecar));
      write_file(fs::path(c_out) / "kept.json", take_string(sidecar));

      cip_tensor* llm_raw = nullptr;
      check(cip_assemble_llm_input(comp.get(), adaptive.get(), global.get(), text.get(), &llm_raw));
      TensorPtr llm(llm_raw);
      const Json summary = {{"L1", cip_compression_original_length(comp.get())},
                            {"K", cip_compression_kept_count(comp.get())},
                            {"L2", cip_tensor_rows(adaptive.get())},
                            {"L3", cip_tensor_rows(global.get())},
                            {"T", cip_tensor_rows(text.get())},
                            {"llm_input_length", cip_tensor_rows(llm.get())},
                            {"drop_ratio", drop_ratio}};
      if (json_out) {
        std::cout << summary.dump() << "\n";
      } else {
        std::cout << "kept " << summary["K"] << " of " << summary["L1"]
                  << " detailed tokens; LLM input length " << summary["llm_input_length"]
                  << " (" << level_name(CIP_LEVEL_DETAILED) << " + adaptive + global + text)\n";
      }
      return kExitOk;
    }

    if (*analyze_cmd) {
      const auto scene = analyze_scene.options(seed);
      cip_report* raw = nullptr;
      check(cip_analyze(&scene, analyze_scene.strategies.c_str(), a_budget, a_tile_side, threads,
                        &raw));
      ReportPtr report(raw);
      char* js = nullptr;
      check(cip_report_to_json(report.get(), 2, &js));
      const std::string json_text = take_string(js);
      char* csv = nullptr;
      check(cip_report_to_csv(report.get(), &csv));
      const std::string csv_text = take_string(csv);
      if (!a_out.empty()) {
        make_dir(a_out);
        write_file(fs::path(a_out) / "sawtooth.json", json_text);
        write_file(fs::path(a_out) / "sawtooth.csv", csv_text);
      }
      if (json_out) {
        char* compact = nullptr;
        check(cip_report_to_json(report.get(), -1, &compact));
        std::cout << take_string(compact) << "\n";
      } else {
        std::cout << csv_text;
      }
      return kExitOk;
    }

    if (*report_cmd) {
      const auto scene = report_scene.options(seed);
      char* dat = nullptr;
      check(cip_budget_sweep(&scene, report_scene.strategies.c_str(), r_budgets.data(),
                             r_budgets.size(), r_tile_side, threads, &dat));
      const std::string text = take_string(dat);
      if (!r_out.empty()) {
        make_dir(r_out);
        write_file(fs::path(r_out) / "sawtooth_vs_budget.dat", text);
      }
      if (json_out) {
        std::cout << Json{{"table", text}}.dump() << "\n";
      } else {
        std::cout << text;
      }
      return kExitOk;
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
