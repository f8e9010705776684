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

#include "pipemap/workbench.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

#include "pipemap/io.hpp"

namespace pipemap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double draw(std::mt19937_64 &rng, const std::pair<double, double> &range) {
    if (range.first == range.second) {
        rng.discard(1);
        return range.first;
    }
    return std::uniform_real_distribution<double>(range.first, range.second)(rng);
}

void check_range(const std::pair<double, double> &range, const char *what) {
    if (!(range.first > 0.0) || !(range.first <= range.second) || !std::isfinite(range.second)) {
        throw std::invalid_argument(std::string(what) + " range must satisfy 0 < low <= high");
    }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string interval_text(const Interval &iv) {
    return iv.first == iv.last ? std::to_string(iv.first) : std::to_string(iv.first) + "-" + std::to_string(iv.last);
}

std::string costliest_interval(const PipelineSpec &spec, const IntervalMapping &mapping) {
    int costliest = 1;
    for (int k = 2; k <= spec.n(); ++k) {
        if (spec.work(k) > spec.work(costliest)) {
            costliest = k;
        }
    }
    for (const Interval &iv : mapping.intervals) {
        if (iv.first <= costliest && costliest <= iv.last) {
            return interval_text(iv);
        }
    }
    return {};
}

} // namespace

void PlatformGenSpec::check() const {
    if (p < 1) {
        throw std::invalid_argument("platform generator needs p >= 1");
    }
    check_range(speed_range, "speed");
    check_range(bandwidth_range, "bandwidth");
}

Platform generate_platform(const PlatformGenSpec &gen) {
    gen.check();
    std::mt19937_64 rng(gen.seed);
    Platform platform;
    platform.s.resize(static_cast<std::size_t>(gen.p));
    for (double &speed : platform.s) {
        speed = draw(rng, gen.speed_range);
    }
    const int side = gen.p + 2;
    platform.b.assign(static_cast<std::size_t>(side) * side, 0.0);
    for (int from = 0; from < side; ++from) {
        for (int to = from + 1; to < side; ++to) {
            const double bw = draw(rng, gen.bandwidth_range);
            platform.bandwidth(from, to) = bw;
            platform.bandwidth(to, from) = bw;
        }
    }
    return platform;
}

nlohmann::json platform_file(const Platform &platform, const PlatformGenSpec &gen) {
    nlohmann::json doc = to_json(platform);
    doc["seed"] = gen.seed;
    doc["speed_range"] = {gen.speed_range.first, gen.speed_range.second};
    doc["bandwidth_range"] = {gen.bandwidth_range.first, gen.bandwidth_range.second};
    doc["generator"] = "mt19937_64/uniform_real_distribution";
    return doc;
}

std::optional<PlatformGenSpec> provenance(const nlohmann::json &doc) {
    if (!doc.contains("seed") || !doc.contains("speed_range") || !doc.contains("bandwidth_range")) {
        return std::nullopt;
    }
    PlatformGenSpec gen;
    gen.seed = doc.at("seed").get<std::uint64_t>();
    gen.p = doc.at("p").get<int>();
    gen.speed_range = {doc.at("speed_range").at(0).get<double>(), doc.at("speed_range").at(1).get<double>()};
    gen.bandwidth_range = {doc.at("bandwidth_range").at(0).get<double>(), doc.at("bandwidth_range").at(1).get<double>()};
    return gen;
}

int campaign_threads() {
    if (const char *env = std::getenv("PIPEMAP_THREADS"); env != nullptr) {
        const int value = std::atoi(env);
        if (value > 0) {
            return value;
        }
    }
    return omp_get_max_threads();
}

// ---------------------------------------------------------------------------

namespace {

CampaignRow campaign_row(const PipelineSpec &spec, const CampaignPlatform &entry, const QueryTemplate &query,
                         const std::vector<HeuristicKind> &heuristics, const SearchConfig &search,
                         const SolveOptions &solve_options) {
    CampaignRow row;
    row.platform_id = entry.id;
    row.seed = entry.seed;
    const Platform &platform = entry.platform;

    double threshold = query.threshold;
    if (query.relative) {
        // the unconstrained bound does not depend on the query threshold
        const SolveResult probe = solve(spec, platform, {query.objective, kInf}, solve_options);
        threshold = query.threshold * probe.unconstrained_bound;
    }
    row.threshold = threshold;

    auto start = std::chrono::steady_clock::now();
    const SolveResult exact = solve(spec, platform, {query.objective, threshold}, solve_options);
    row.exact_seconds = seconds_since(start);
    row.exact_feasible = exact.feasible();
    if (exact.best) {
        row.exact_objective = objective_value(exact.best->metrics, query.objective);
        row.exact_period = exact.best->metrics.period;
        row.exact_latency = exact.best->metrics.latency;
        row.exact_mapping = signature(exact.best->mapping);
        row.costliest_stage_interval = costliest_interval(spec, exact.best->mapping);
    }

    for (HeuristicKind kind : heuristics) {
        HeuristicRow h;
        h.kind = kind;
        start = std::chrono::steady_clock::now();
        const HeuristicOutcome outcome = run_heuristic(kind, spec, platform, threshold, search);
        h.wall_seconds = seconds_since(start);
        h.feasible = outcome.feasible;
        h.objective = objective_value(outcome.metrics, query.objective);
        h.period = outcome.metrics.period;
        h.latency = outcome.metrics.latency;
        h.mapping = signature(outcome.mapping);
        if (h.feasible && row.exact_feasible) {
            h.relative_excess = (h.objective - row.exact_objective) / row.exact_objective;
            h.matches = nearly_equal(h.objective, row.exact_objective);
            if (h.objective < row.exact_objective && !h.matches) {
                row.error += short_name(kind) + " beats the exact optimum; ";
            }
        }
        row.heuristics.push_back(std::move(h));
    }
    return row;
}

} // namespace

std::vector<HeuristicSummary> summarize(const std::vector<CampaignRow> &rows, const std::vector<HeuristicKind> &kinds) {
    std::vector<HeuristicSummary> out;
    for (HeuristicKind kind : kinds) {
        HeuristicSummary s;
        s.kind = kind;
        double excess_sum = 0.0;
        int excess_count = 0;
        for (const CampaignRow &row : rows) {
            for (const HeuristicRow &h : row.heuristics) {
                if (h.kind != kind) {
                    continue;
                }
                ++s.rows;
                if (!h.feasible) {
                    ++s.infeasible;
                }
                if (row.exact_feasible) {
                    ++s.comparable;
                    if (h.matches) {
                        ++s.matches;
                    }
                    if (h.feasible) {
                        excess_sum += h.relative_excess;
                        ++excess_count;
                    }
                }
            }
        }
        s.match_rate = s.comparable > 0 ? static_cast<double>(s.matches) / s.comparable : 0.0;
        s.mean_relative_excess = excess_count > 0 ? excess_sum / excess_count : 0.0;
        out.push_back(s);
    }
    return out;
}

CampaignResult run_campaign(const PipelineSpec &spec, const std::vector<CampaignPlatform> &platforms,
                            const QueryTemplate &query, const std::vector<HeuristicKind> &heuristics,
                            const CampaignOptions &options) {
    if (platforms.empty()) {
        throw std::invalid_argument("campaign needs at least one platform");
    }
    spec.check();
    const bool period_bound = query.objective == Objective::MinimizeLatency;
    for (HeuristicKind kind : heuristics) {
        if (bounds_period(kind) != period_bound) {
            throw std::invalid_argument(short_name(kind) + " bounds the " + (bounds_period(kind) ? "period" : "latency") +
                                        ", but the query " + to_string(query.objective) + " bounds the " +
                                        (period_bound ? "period" : "latency"));
        }
    }
    if (!(query.threshold > 0.0)) {
        throw std::invalid_argument("campaign threshold must be positive");
    }

    const int threads = options.threads > 0 ? options.threads : campaign_threads();
    const SolveOptions solve_options{threads > 1 ? 1 : 0};
    CampaignResult result;
    result.objective = query.objective;
    result.rows.resize(platforms.size());
    const auto count = static_cast<long>(platforms.size());

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (long i = 0; i < count; ++i) {
        const CampaignPlatform &entry = platforms[static_cast<std::size_t>(i)];
        try {
            result.rows[static_cast<std::size_t>(i)] =
                campaign_row(spec, entry, query, heuristics, options.search, solve_options);
        } catch (const std::exception &e) {
            CampaignRow failed;
            failed.platform_id = entry.id;
            failed.seed = entry.seed;
            failed.error = e.what();
            result.rows[static_cast<std::size_t>(i)] = std::move(failed);
        }
    }
    result.summary = summarize(result.rows, heuristics);
    return result;
}

namespace {

const std::vector<std::string> kCampaignHeader = {
    "platform", "seed",  "threshold",       "method",             "feasible",    "objective",
    "period",   "latency", "mapping",       "match",              "relative_excess", "threshold_violated",
    "wall_time_s", "costliest_stage_interval", "error"};

std::string flag(bool value) { return value ? "1" : "0"; }

} // namespace

CsvTable campaign_table(const CampaignResult &result) {
    CsvTable table;
    table.header = kCampaignHeader;
    for (const CampaignRow &row : result.rows) {
        const std::string seed = row.seed ? std::to_string(*row.seed) : "";
        table.rows.push_back({row.platform_id, seed, format_double(row.threshold), "exact", flag(row.exact_feasible),
                              row.exact_feasible ? format_double(row.exact_objective) : "",
                              row.exact_feasible ? format_double(row.exact_period) : "",
                              row.exact_feasible ? format_double(row.exact_latency) : "", row.exact_mapping, "", "",
                              flag(!row.exact_feasible), format_double(row.exact_seconds), row.costliest_stage_interval,
                              row.error});
        for (const HeuristicRow &h : row.heuristics) {
            const bool comparable = h.feasible && row.exact_feasible;
            table.rows.push_back({row.platform_id, seed, format_double(row.threshold), short_name(h.kind),
                                  flag(h.feasible), format_double(h.objective), format_double(h.period),
                                  format_double(h.latency), h.mapping, flag(h.matches),
                                  comparable ? format_double(h.relative_excess) : "", flag(!h.feasible),
                                  format_double(h.wall_seconds), "", ""});
        }
    }
    return table;
}

CsvTable summary_table(const std::vector<HeuristicSummary> &summary) {
    CsvTable table;
    table.header = {"method", "rows", "comparable", "matches", "infeasible", "match_rate", "mean_relative_excess"};
    for (const HeuristicSummary &s : summary) {
        table.rows.push_back({short_name(s.kind), std::to_string(s.rows), std::to_string(s.comparable),
                              std::to_string(s.matches), std::to_string(s.infeasible), format_double(s.match_rate),
                              format_double(s.mean_relative_excess)});
    }
    return table;
}

CampaignResult campaign_from_table(const CsvTable &table) {
    CampaignResult result;
    std::vector<HeuristicKind> kinds;
    auto number = [](const std::string &text) { return text.empty() ? 0.0 : parse_double(text); };
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        auto cell = [&](const char *name) -> const std::string & { return table.cell(i, name); };
        const std::string &method = cell("method");
        if (method == "exact") {
            CampaignRow row;
            row.platform_id = cell("platform");
            if (!cell("seed").empty()) {
                row.seed = std::stoull(cell("seed"));
            }
            row.threshold = number(cell("threshold"));
            row.exact_feasible = cell("feasible") == "1";
            row.exact_objective = number(cell("objective"));
            row.exact_period = number(cell("period"));
            row.exact_latency = number(cell("latency"));
            row.exact_mapping = cell("mapping");
            row.exact_seconds = number(cell("wall_time_s"));
            row.costliest_stage_interval = cell("costliest_stage_interval");
            row.error = cell("error");
            result.rows.push_back(std::move(row));
            continue;
        }
        if (result.rows.empty()) {
            throw std::invalid_argument("campaign CSV: heuristic line before its platform's exact line");
        }
        HeuristicRow h;
        h.kind = heuristic_from_string(method);
        h.feasible = cell("feasible") == "1";
        h.objective = number(cell("objective"));
        h.period = number(cell("period"));
        h.latency = number(cell("latency"));
        h.mapping = cell("mapping");
        h.matches = cell("match") == "1";
        h.relative_excess = number(cell("relative_excess"));
        h.wall_seconds = number(cell("wall_time_s"));
        if (std::find(kinds.begin(), kinds.end(), h.kind) == kinds.end()) {
            kinds.push_back(h.kind);
        }
        result.rows.back().heuristics.push_back(std::move(h));
    }
    if (!kinds.empty()) {
        result.objective = bounds_period(kinds.front()) ? Objective::MinimizeLatency : Objective::MinimizePeriod;
    }
    result.summary = summarize(result.rows, kinds);
    return result;
}

// ---------------------------------------------------------------------------

int SweepReport::plateaus() const {
    int count = 0;
    std::optional<double> current;
    for (const SweepRow &row : rows) {
        if (!row.best) {
            current.reset();
            continue;
        }
        const double value = objective_value(row.best->metrics, objective);
        if (!current || !nearly_equal(*current, value)) {
            ++count;
            current = value;
        }
    }
    return count;
}

namespace {

void annotate(SweepReport &report) {
    report.edges.clear();
    report.violations.clear();
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        const SweepRow &prev = report.rows[i - 1];
        const SweepRow &cur = report.rows[i];
        const double before = prev.best ? objective_value(prev.best->metrics, report.objective) : kInf;
        const double after = cur.best ? objective_value(cur.best->metrics, report.objective) : kInf;
        const bool changed = prev.best.has_value() != cur.best.has_value() ||
                             (prev.best && cur.best && !nearly_equal(before, after));
        if (changed) {
            report.edges.push_back(cur.threshold);
        }
        if (prev.best && !cur.best) {
            report.violations.push_back("feasible at threshold " + format_double(prev.threshold) +
                                        " but infeasible at " + format_double(cur.threshold));
        } else if (prev.best && cur.best && after > before && !nearly_equal(before, after)) {
            report.violations.push_back("optimum rises from " + format_double(before) + " to " + format_double(after) +
                                        " at threshold " + format_double(cur.threshold));
        }
    }
}

} // namespace

SweepReport run_sweep_report(const PipelineSpec &spec, const Platform &platform, Objective objective,
                             const std::vector<double> &thresholds, const SolveOptions &options) {
    SweepReport report;
    report.objective = objective;
    report.rows = sweep(spec, platform, objective, thresholds, options);
    annotate(report);
    return report;
}

std::vector<double> linspace(double from, double to, int count) {
    if (count < 1) {
        throw std::invalid_argument("linspace needs count >= 1");
    }
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        out.push_back(count == 1 ? from : from + (to - from) * i / (count - 1));
    }
    if (count > 1) {
        out.back() = to;
    }
    return out;
}

std::vector<double> default_thresholds(const PipelineSpec &spec, const Platform &platform, Objective objective,
                                       int count) {
    const SolveResult free_run = solve(spec, platform, {objective, kInf});
    const double tightest = free_run.unconstrained_bound;
    const double loosest = bounded_value(free_run.best->metrics, objective);
    return linspace(0.95 * tightest, 1.05 * std::max(loosest, tightest), count);
}

CsvTable sweep_table(const SweepReport &report) {
    CsvTable table;
    table.header = {"threshold", "feasible", "objective", "period", "latency", "mapping", "step_edge"};
    std::size_t edge = 0;
    for (const SweepRow &row : report.rows) {
        const bool is_edge = edge < report.edges.size() && report.edges[edge] == row.threshold;
        if (is_edge) {
            ++edge;
        }
        if (row.best) {
            const MappingMetrics &m = row.best->metrics;
            table.rows.push_back({format_double(row.threshold), "1", format_double(objective_value(m, report.objective)),
                                  format_double(m.period), format_double(m.latency), signature(row.best->mapping),
                                  flag(is_edge)});
        } else {
            table.rows.push_back({format_double(row.threshold), "0", "", "", "", "", flag(is_edge)});
        }
    }
    return table;
}

SweepReport sweep_from_table(const CsvTable &table, Objective objective) {
    SweepReport report;
    report.objective = objective;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        SweepRow row;
        row.threshold = parse_double(table.cell(i, "threshold"));
        if (table.cell(i, "feasible") == "1") {
            Solution solution;
            solution.mapping = parse_signature(table.cell(i, "mapping"));
            solution.metrics.period = parse_double(table.cell(i, "period"));
            solution.metrics.latency = parse_double(table.cell(i, "latency"));
            row.best = std::move(solution);
        }
        if (table.cell(i, "step_edge") == "1") {
            report.edges.push_back(row.threshold);
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

} // namespace pipemap
