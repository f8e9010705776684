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
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pipemap/csv.hpp"
#include "pipemap/heuristics.hpp"
#include "pipemap/model.hpp"
#include "pipemap/solver.hpp"

namespace pipemap {

// ---------------------------------------------------------------------------
// Platform generation
// ---------------------------------------------------------------------------

struct PlatformGenSpec {
    std::uint64_t seed = 1;
    int p = 10;
    std::pair<double, double> speed_range{50.0, 200.0};
    std::pair<double, double> bandwidth_range{50.0, 200.0};

    void check() const;
};

/**
 * Draws a platform from a std::mt19937_64 seeded with `seed`: p speeds first,
 * then one bandwidth per unordered pair {from, to} of {in, 1..p, out}
 * (row-major, from < to) used for both directions. All draws are uniform on
 * their range. Reproducible within one standard library implementation.
 */
Platform generate_platform(const PlatformGenSpec &gen);

/// Platform JSON with the generator parameters recorded next to p, s, b.
nlohmann::json platform_file(const Platform &platform, const PlatformGenSpec &gen);

/// Reads {"seed", "speed_range", "bandwidth_range"} back from a platform file, if present.
std::optional<PlatformGenSpec> provenance(const nlohmann::json &platform_doc);

/// Worker count for campaigns: PIPEMAP_THREADS when set and positive, else the OpenMP default.
int campaign_threads();

// ---------------------------------------------------------------------------
// Heuristic-versus-exact campaigns
// ---------------------------------------------------------------------------

struct CampaignPlatform {
    std::string id;
    std::optional<std::uint64_t> seed;
    Platform platform;
};

/// Bound for each platform: absolute, or `threshold` times the platform's
/// best achievable value of the bounded criterion.
struct QueryTemplate {
    Objective objective = Objective::MinimizeLatency;
    double threshold = 0.0;
    bool relative = false;
};

struct HeuristicRow {
    HeuristicKind kind = HeuristicKind::H1;
    bool feasible = false;
    double objective = 0.0;
    double period = 0.0;
    double latency = 0.0;
    std::string mapping;
    bool matches = false;        // feasible and equal to the exact optimum
    double relative_excess = 0.0; // (objective - optimum) / optimum when both feasible
    double wall_seconds = 0.0;
};

struct CampaignRow {
    std::string platform_id;
    std::optional<std::uint64_t> seed;
    double threshold = 0.0;
    bool exact_feasible = false;
    double exact_objective = 0.0;
    double exact_period = 0.0;
    double exact_latency = 0.0;
    std::string exact_mapping;
    std::string costliest_stage_interval; // interval holding the most expensive stage, "d-e"
    double exact_seconds = 0.0;
    std::vector<HeuristicRow> heuristics;
    std::string error;
};

struct HeuristicSummary {
    HeuristicKind kind = HeuristicKind::H1;
    int rows = 0;
    int comparable = 0; // rows where the exact optimum exists
    int matches = 0;
    int infeasible = 0;
    double match_rate = 0.0;
    double mean_relative_excess = 0.0;
};

struct CampaignResult {
    Objective objective = Objective::MinimizeLatency;
    std::vector<CampaignRow> rows;
    std::vector<HeuristicSummary> summary;
};

struct CampaignOptions {
    int threads = 0; // 0: campaign_threads()
    SearchConfig search;
};

/// Per-platform failures land in CampaignRow::error; the campaign itself
/// throws only for an empty platform set or heuristics that bound the wrong criterion.
CampaignResult run_campaign(const PipelineSpec &spec, const std::vector<CampaignPlatform> &platforms,
                            const QueryTemplate &query, const std::vector<HeuristicKind> &heuristics,
                            const CampaignOptions &options = {});

std::vector<HeuristicSummary> summarize(const std::vector<CampaignRow> &rows, const std::vector<HeuristicKind> &kinds);

/// One line per (platform, method); method is "exact" or a heuristic short name.
CsvTable campaign_table(const CampaignResult &result);
CsvTable summary_table(const std::vector<HeuristicSummary> &summary);
CampaignResult campaign_from_table(const CsvTable &table);

// ---------------------------------------------------------------------------
// Threshold sweeps
// ---------------------------------------------------------------------------

struct SweepReport {
    Objective objective = Objective::MinimizeLatency;
    std::vector<SweepRow> rows;
    std::vector<double> edges;           // thresholds where the optimum changes
    std::vector<std::string> violations; // monotonicity failures; empty when sound

    int plateaus() const; // maximal runs of equal feasible optimum
};

/// Throws std::invalid_argument when thresholds are not ascending.
SweepReport run_sweep_report(const PipelineSpec &spec, const Platform &platform, Objective objective,
                             const std::vector<double> &thresholds, const SolveOptions &options = {});

/// `count` evenly spaced values from `from` to `to` inclusive.
std::vector<double> linspace(double from, double to, int count);

/// Thresholds spanning from just below the tightest feasible bound to just
/// above the bound needed by the unconstrained optimum of the objective.
std::vector<double> default_thresholds(const PipelineSpec &spec, const Platform &platform, Objective objective,
                                       int count);

CsvTable sweep_table(const SweepReport &report);
SweepReport sweep_from_table(const CsvTable &table, Objective objective);

} // namespace pipemap
