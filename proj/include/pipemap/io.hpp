/*
Copyright 2026 The pipemap Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <array>
#include <filesystem>
#include <string>

#include "json.hpp"
#include "pipemap/model.hpp"

namespace pipemap {

// Pipeline files: {"n", "stage_names", "w", "delta"}.
// Platform files: {"p", "s", "b"} with b a flat (p+2)^2 row-major array over in, 1..p, out.
// Unknown keys are ignored on read. Errors throw std::invalid_argument.

nlohmann::json to_json(const PipelineSpec &spec);
nlohmann::json to_json(const Platform &platform);
nlohmann::json to_json(const IntervalMapping &mapping);
nlohmann::json to_json(const MappingMetrics &metrics);

PipelineSpec pipeline_from_json(const nlohmann::json &doc);
Platform platform_from_json(const nlohmann::json &doc);

PipelineSpec read_pipeline(const std::filesystem::path &path);
Platform read_platform(const std::filesystem::path &path);
nlohmann::json read_json(const std::filesystem::path &path);
void write_json(const std::filesystem::path &path, const nlohmann::json &doc);

/// Stage labels of the seven-step JPEG encoder, in pipeline order.
inline constexpr std::array<const char *, 7> kJpegStageNames = {
    "scaling", "color-space conversion", "subsampling", "MCU creation", "FDCT", "quantization", "entropy coding"};

/// Location of the bundled preset; PIPEMAP_DATA_DIR overrides the install-time directory.
std::filesystem::path default_preset_path();

/// Loads the JPEG pipeline preset. The cost values come from the file; the
/// stage count and names are checked against kJpegStageNames.
PipelineSpec jpeg_preset(const std::filesystem::path &path = default_preset_path());

} // namespace pipemap
