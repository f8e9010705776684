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

#include "pipemap/io.hpp"

#include <cstdlib>
#include <fstream>
#include <stdexcept>

#ifndef PIPEMAP_DATA_DIR
#define PIPEMAP_DATA_DIR "data"
#endif

namespace pipemap {

using nlohmann::json;

namespace {

const json &require(const json &doc, const char *key) {
    if (!doc.is_object() || !doc.contains(key)) {
        throw std::invalid_argument(std::string("missing key \"") + key + "\"");
    }
    return doc.at(key);
}

std::vector<double> numbers(const json &node, const char *key) {
    if (!node.is_array()) {
        throw std::invalid_argument(std::string("\"") + key + "\" must be an array of numbers");
    }
    std::vector<double> out;
    out.reserve(node.size());
    for (const auto &item : node) {
        if (item.is_array()) {
            for (const auto &inner : item) {
                if (!inner.is_number()) {
                    throw std::invalid_argument(std::string("\"") + key + "\" holds a non-numeric entry");
                }
                out.push_back(inner.get<double>());
            }
        } else if (item.is_number()) {
            out.push_back(item.get<double>());
        } else {
            throw std::invalid_argument(std::string("\"") + key + "\" holds a non-numeric entry");
        }
    }
    return out;
}

int count(const json &doc, const char *key) {
    const json &node = require(doc, key);
    if (!node.is_number_integer()) {
        throw std::invalid_argument(std::string("\"") + key + "\" must be an integer");
    }
    return node.get<int>();
}

} // namespace

json to_json(const PipelineSpec &spec) {
    json doc;
    doc["n"] = spec.n();
    doc["stage_names"] = spec.stage_names;
    doc["w"] = spec.w;
    doc["delta"] = spec.delta;
    return doc;
}

json to_json(const Platform &platform) {
    json doc;
    doc["p"] = platform.p();
    doc["s"] = platform.s;
    doc["b"] = platform.b;
    return doc;
}

json to_json(const IntervalMapping &mapping) {
    json intervals = json::array();
    for (const Interval &iv : mapping.intervals) {
        intervals.push_back({iv.first, iv.last});
    }
    return json{{"intervals", intervals}, {"assignees", mapping.assignees}, {"signature", signature(mapping)}};
}

json to_json(const MappingMetrics &metrics) {
    return json{{"period", metrics.period},
                {"latency", metrics.latency},
                {"per_processor_period", metrics.per_processor_period}};
}

PipelineSpec pipeline_from_json(const json &doc) {
    PipelineSpec spec;
    const int n = count(doc, "n");
    spec.w = numbers(require(doc, "w"), "w");
    spec.delta = numbers(require(doc, "delta"), "delta");
    if (doc.contains("stage_names")) {
        for (const auto &name : doc.at("stage_names")) {
            if (!name.is_string()) {
                throw std::invalid_argument("\"stage_names\" must hold strings");
            }
            spec.stage_names.push_back(name.get<std::string>());
        }
    }
    if (n < 1 || static_cast<std::size_t>(n) != spec.w.size()) {
        throw std::invalid_argument("\"n\" = " + std::to_string(n) + " disagrees with " + std::to_string(spec.w.size()) +
                                    " compute costs");
    }
    if (spec.stage_names.empty()) {
        for (int k = 1; k <= n; ++k) {
            spec.stage_names.push_back("S" + std::to_string(k));
        }
    }
    spec.check();
    return spec;
}

Platform platform_from_json(const json &doc) {
    Platform platform;
    const int p = count(doc, "p");
    platform.s = numbers(require(doc, "s"), "s");
    platform.b = numbers(require(doc, "b"), "b");
    if (p < 1 || static_cast<std::size_t>(p) != platform.s.size()) {
        throw std::invalid_argument("\"p\" = " + std::to_string(p) + " disagrees with " +
                                    std::to_string(platform.s.size()) + " speeds");
    }
    platform.check();
    return platform;
}

json read_json(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open " + path.string());
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error &e) {
        throw std::invalid_argument(path.string() + ": " + e.what());
    }
}

void write_json(const std::filesystem::path &path, const json &doc) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << doc.dump(2) << '\n';
}

PipelineSpec read_pipeline(const std::filesystem::path &path) {
    try {
        return pipeline_from_json(read_json(path));
    } catch (const std::invalid_argument &e) {
        throw std::invalid_argument(path.string() + ": " + e.what());
    }
}

Platform read_platform(const std::filesystem::path &path) {
    try {
        return platform_from_json(read_json(path));
    } catch (const std::invalid_argument &e) {
        throw std::invalid_argument(path.string() + ": " + e.what());
    }
}

std::filesystem::path default_preset_path() {
    if (const char *dir = std::getenv("PIPEMAP_DATA_DIR"); dir != nullptr && *dir != '\0') {
        return std::filesystem::path(dir) / "jpeg_preset.json";
    }
    return std::filesystem::path(PIPEMAP_DATA_DIR) / "jpeg_preset.json";
}

PipelineSpec jpeg_preset(const std::filesystem::path &path) {
    PipelineSpec spec = read_pipeline(path);
    if (spec.n() != static_cast<int>(kJpegStageNames.size())) {
        throw std::invalid_argument(path.string() + ": JPEG preset must have 7 stages");
    }
    for (int k = 1; k <= spec.n(); ++k) {
        if (spec.name(k) != kJpegStageNames[k - 1]) {
            throw std::invalid_argument(path.string() + ": stage " + std::to_string(k) + " should be \"" +
                                        kJpegStageNames[k - 1] + "\", found \"" + spec.name(k) + "\"");
        }
    }
    return spec;
}

} // namespace pipemap
