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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pipemap/model.hpp"

namespace pipemap {

enum class Objective {
    MinimizeLatency, // period is bounded by the threshold
    MinimizePeriod,  // latency is bounded by the threshold
};

std::string to_string(Objective objective);
Objective objective_from_string(const std::string &text);

/// Minimize one criterion while the other stays at or below `threshold`.
struct BicriteriaQuery {
    Objective objective = Objective::MinimizeLatency;
    double threshold = 0.0;

    static BicriteriaQuery min_latency(double period_bound) { return {Objective::MinimizeLatency, period_bound}; }
    static BicriteriaQuery min_period(double latency_bound) { return {Objective::MinimizePeriod, latency_bound}; }

    void check() const;
};

inline double objective_value(const MappingMetrics &m, Objective o) {
    return o == Objective::MinimizeLatency ? m.latency : m.period;
}

inline double bounded_value(const MappingMetrics &m, Objective o) {
    return o == Objective::MinimizeLatency ? m.period : m.latency;
}

struct Solution {
    IntervalMapping mapping;
    MappingMetrics metrics;
    std::uint64_t canonical_index = 0;
};

struct SolveResult {
    std::optional<Solution> best;
    /// Smallest value of the bounded criterion over all mappings; reported
    /// so that an infeasible query says how far off its threshold is.
    double unconstrained_bound = 0.0;
    std::uint64_t evaluated = 0;

    bool feasible() const { return best.has_value(); }
};

struct SolveOptions {
    int threads = 0; // 0: OpenMP default
};

/**
 * @brief Exhaustive bi-criteria optimum over all interval mappings.
 *
 * Among mappings whose bounded criterion satisfies the threshold, returns the
 * one with the smallest objective; ties go to the smaller bounded criterion,
 * then to the earlier canonical index. The result does not depend on the
 * thread count.
 */
SolveResult solve(const PipelineSpec &spec, const Platform &platform, const BicriteriaQuery &query,
                  const SolveOptions &options = {});

/// Single-threaded reference walking MappingEnumerator and evaluate(); same contract as solve().
SolveResult solve_serial(const PipelineSpec &spec, const Platform &platform, const BicriteriaQuery &query);

struct SweepRow {
    double threshold = 0.0;
    std::optional<Solution> best;
};

/**
 * Answers solve() for each threshold (ascending order required, else
 * std::invalid_argument). One enumeration pass builds the staircase of
 * candidate optima; every row equals the corresponding solve() result.
 */
std::vector<SweepRow> sweep(const PipelineSpec &spec, const Platform &platform, Objective objective,
                            std::span<const double> thresholds, const SolveOptions &options = {});

} // namespace pipemap
