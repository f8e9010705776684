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

#include <stdexcept>
#include <filesystem>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracle/oracle.hpp"
#include "pipemap/csv.hpp"
#include "pipemap/io.hpp"

using namespace pipemap;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name) {
    const fs::path dir = fs::temp_directory_path() / "pipemap_test_io";
    fs::create_directories(dir);
    return dir / name;
}

} // namespace

TEST_CASE("pipeline and platform survive a JSON round trip") {
    std::mt19937_64 rng(3);
    const PipelineSpec spec = oracle::random_pipeline(rng, 5);
    const Platform plat = oracle::random_platform(rng, 3);

    const PipelineSpec spec2 = pipeline_from_json(nlohmann::json::parse(to_json(spec).dump()));
    CHECK(spec2.w == spec.w);
    CHECK(spec2.delta == spec.delta);
    CHECK(spec2.stage_names == spec.stage_names);

    const Platform plat2 = platform_from_json(nlohmann::json::parse(to_json(plat).dump()));
    CHECK(plat2.s == plat.s);
    CHECK(plat2.b == plat.b);

    write_json(scratch("pipe.json"), to_json(spec));
    CHECK(read_pipeline(scratch("pipe.json")).w == spec.w);
}

TEST_CASE("platform accepts a flat or nested bandwidth matrix") {
    nlohmann::json flat = {{"p", 1}, {"s", {2.0}}, {"b", {0, 1, 2, 3, 0, 4, 5, 6, 0}}};
    nlohmann::json nested = {{"p", 1}, {"s", {2.0}}, {"b", {{0, 1, 2}, {3, 0, 4}, {5, 6, 0}}}};
    CHECK(platform_from_json(flat).b == platform_from_json(nested).b);
    CHECK(platform_from_json(flat).bandwidth(1, 2) == 4.0);
}

TEST_CASE("malformed descriptions are rejected") {
    CHECK_THROWS_AS(pipeline_from_json({{"w", {1.0}}, {"delta", {1.0, 1.0}}}), std::invalid_argument);
    CHECK_THROWS_AS(pipeline_from_json({{"n", 2}, {"w", {1.0}}, {"delta", {1.0, 1.0}}}), std::invalid_argument);
    CHECK_THROWS_AS(pipeline_from_json({{"n", 1}, {"w", {"a"}}, {"delta", {1.0, 1.0}}}), std::invalid_argument);
    CHECK_THROWS_AS(pipeline_from_json({{"n", 1}, {"w", {1.0}}, {"delta", {1.0}}}), std::invalid_argument);
    CHECK_THROWS_AS(platform_from_json({{"p", 2}, {"s", {1.0}}, {"b", {1.0}}}), std::invalid_argument);
    CHECK_THROWS_AS(platform_from_json({{"p", 1}, {"s", {1.0}}, {"b", {0, 1, 1, 1, 0, 1, 1, 1}}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(read_pipeline(scratch("does-not-exist.json")), std::invalid_argument);
}

TEST_CASE("a user cost file overrides the preset numbers") {
    PipelineSpec custom = jpeg_preset();
    for (int k = 0; k < 7; ++k) {
        custom.w[k] = 10.0 + k;
    }
    custom.delta.assign(8, 3.5);
    write_json(scratch("jpeg.json"), to_json(custom));
    const PipelineSpec loaded = jpeg_preset(scratch("jpeg.json"));
    CHECK(loaded.w == custom.w);
    CHECK(loaded.delta == custom.delta);

    PipelineSpec renamed = custom;
    renamed.stage_names[4] = "DCT";
    write_json(scratch("bad.json"), to_json(renamed));
    CHECK_THROWS_AS(jpeg_preset(scratch("bad.json")), std::invalid_argument);
    CHECK_THROWS_AS(jpeg_preset(scratch("missing.json")), std::invalid_argument);
}

TEST_CASE("CSV quoting round-trips") {
    CsvTable table;
    table.header = {"a", "b,c", "d"};
    table.rows = {{"1", "x,y", "he said \"hi\""}, {"", "line\nbreak", "3"}};
    std::ostringstream out;
    write_csv(out, table);
    std::istringstream in(out.str());
    const CsvTable back = read_csv(in);
    CHECK(back.header == table.header);
    CHECK(back.rows == table.rows);
    CHECK(back.cell(0, "b,c") == "x,y");
    CHECK_THROWS(back.column("nope"));
}

TEST_CASE("numbers print in shortest round-trip form") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.125, 7.0}) {
        CHECK(parse_double(format_double(v)) == v);
    }
    CHECK(format_double(7.0) == "7");
    CHECK_THROWS_AS(parse_double("1.5x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_double(""), std::invalid_argument);
}
