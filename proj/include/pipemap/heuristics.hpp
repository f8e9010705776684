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

#include <optional>
#include <string>
#include <vector>

#include "pipemap/model.hpp"

namespace pipemap {

/**
 * Greedy splitting heuristics. All of them sort processors by non-increasing
 * speed (ties by index), start with every stage on the fastest one and then
 * repeatedly split the interval of the used processor with the largest cycle
 * time, handing parts to the next fastest unused processors.
 *
 *   H1  2-way split, min max cycle, until the period bound is met
 *   H2  as H1 with the latency/period ratio rule under a binary-searched latency budget
 *   H3  3-way split, min max cycle
 *   H4  3-way split, ratio rule
 *   H5  2-way split, min max cycle, every state within the latency bound
 *   H6  as H5 with the ratio rule
 */
enum class HeuristicKind { H1, H2, H3, H4, H5, H6 };

inline constexpr HeuristicKind kAllHeuristics[] = {HeuristicKind::H1, HeuristicKind::H2, HeuristicKind::H3,
                                                   HeuristicKind::H4, HeuristicKind::H5, HeuristicKind::H6};

std::string short_name(HeuristicKind kind); // "H1"
std::string long_name(HeuristicKind kind);  // "H1-Sp-mono-P"
HeuristicKind heuristic_from_string(const std::string &text);

/// H1-H4 take a period bound and minimize latency; H5/H6 take a latency bound and minimize period.
bool bounds_period(HeuristicKind kind);

/// One accepted split.
struct SplitEvent {
    int round = 0;
    int target = 0;               // processor whose interval was split
    std::vector<int> recipients;  // fresh processors, fastest first
    std::vector<int> cuts;        // split after these stages
    std::vector<int> owners;      // processor of each part, chain order
    double score = 0.0;           // selection score of the chosen candidate
    double period_before = 0.0;
    double period_after = 0.0;
    double latency_after = 0.0;
};

struct SearchConfig {
    int iterations = 20;
    double upper_factor = 4.0; // authorized increase searched in [0, upper_factor * L*]
};

/// Bookkeeping of H2's binary search.
struct LatencySearch {
    SearchConfig config;
    double optimal_latency = 0.0; // L*: all stages on the fastest processor
    double authorized_increase = 0.0;
    int trials = 0;
    bool succeeded = false;
};

struct HeuristicOutcome {
    HeuristicKind kind = HeuristicKind::H1;
    double threshold = 0.0;
    IntervalMapping mapping;
    MappingMetrics metrics;
    bool feasible = false;
    std::vector<SplitEvent> trace;
    std::optional<LatencySearch> search;
};

/// Processors by non-increasing speed, ties by index.
std::vector<int> processors_by_speed(const Platform &platform);

HeuristicOutcome h1_split_mono_period(const PipelineSpec &spec, const Platform &platform, double fixed_period);
HeuristicOutcome h2_split_bi_period(const PipelineSpec &spec, const Platform &platform, double fixed_period,
                                    const SearchConfig &config = {});
HeuristicOutcome h3_threesplit_mono_period(const PipelineSpec &spec, const Platform &platform, double fixed_period);
HeuristicOutcome h4_threesplit_bi_period(const PipelineSpec &spec, const Platform &platform, double fixed_period);
HeuristicOutcome h5_split_mono_latency(const PipelineSpec &spec, const Platform &platform, double fixed_latency);
HeuristicOutcome h6_split_bi_latency(const PipelineSpec &spec, const Platform &platform, double fixed_latency);

HeuristicOutcome run_heuristic(HeuristicKind kind, const PipelineSpec &spec, const Platform &platform,
                               double threshold, const SearchConfig &config = {});

} // namespace pipemap
