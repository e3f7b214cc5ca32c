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

#include <json.hpp>

#include "cip/ratio_planner.hpp"
#include "cip/sawtooth.hpp"
#include "cip/scm.hpp"

namespace cip {

using Json = nlohmann::ordered_json;

// {strategy, budget, tile_side, input:{w,h},
//  levels:[{name, grid:{rows,cols}, resized:{w,h}, tiles:[{x,y,w,h}]}]}
Json plan_to_json(const PyramidPlan& plan);
PyramidPlan plan_from_json(const Json& j);

Json report_to_json(const SawtoothReport& report);

// {L1, K, drop_ratio, kept_indices}
Json compression_sidecar(const CompressionResult& result);

}  // namespace cip
