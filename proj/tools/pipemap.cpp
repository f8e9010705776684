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

// pipemap: command-line front end for the interval-mapping workbench.
//
// Exit codes: 0 success, 2 the query ran but has no feasible mapping, 1 input error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pipemap/csv.hpp"
#include "pipemap/heuristics.hpp"
#include "pipemap/ilp.hpp"
#include "pipemap/io.hpp"
#include "pipemap/model.hpp"
#include "pipemap/simulator.hpp"
#include "pipemap/solver.hpp"
#include "pipemap/workbench.hpp"

namespace {

using namespace pipemap;

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kInfeasible = 2;

struct Common {
    std::string pipeline;
    std::string platform;
    std::string out;
    std::optional<double> period;
    std::optional<double> latency;
};

void add_common(CLI::App *cmd, Common &c, bool thresholds) {
    cmd->add_option("--pipeline", c.pipeline, "pipeline JSON (default: bundled jpeg preset)");
    cmd->add_option("--platform", c.platform, "platform JSON");
    cmd->add_option("--out", c.out, "output file (default: stdout)");
    if (thresholds) {
        auto *period = cmd->add_option("--period", c.period, "fixed period bound; minimizes latency");
        auto *latency = cmd->add_option("--latency", c.latency, "fixed latency bound; minimizes period");
        period->excludes(latency);
    }
}

PipelineSpec load_pipeline(const Common &c) {
    return c.pipeline.empty() ? jpeg_preset() : read_pipeline(c.pipeline);
}

Platform load_platform(const Common &c) {
    if (c.platform.empty()) {
        throw std::invalid_argument("--platform is required");
    }
    return read_platform(c.platform);
}

BicriteriaQuery load_query(const Common &c) {
    if (c.period.has_value() == c.latency.has_value()) {
        throw std::invalid_argument("exactly one of --period or --latency is required");
    }
    BicriteriaQuery query = c.period ? BicriteriaQuery::min_latency(*c.period) : BicriteriaQuery::min_period(*c.latency);
    query.check();
    return query;
}

void emit(const std::string &path, const std::string &text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(path);
    if (!file) {
        throw std::runtime_error("cannot write " + path);
    }
    file << text;
}

void emit_json(const Common &c, const nlohmann::json &doc) { emit(c.out, doc.dump(2) + "\n"); }

void emit_csv(const std::string &path, const CsvTable &table) {
    std::ostringstream text;
    write_csv(text, table);
    emit(path, text.str());
}

nlohmann::json solution_json(const Solution &s) {
    return {{"mapping", to_json(s.mapping)}, {"metrics", to_json(s.metrics)}, {"canonical_index", s.canonical_index}};
}

nlohmann::json trace_json(const std::vector<SplitEvent> &trace) {
    nlohmann::json out = nlohmann::json::array();
    for (const SplitEvent &e : trace) {
        out.push_back({{"round", e.round},
                       {"target", e.target},
                       {"recipients", e.recipients},
                       {"cuts", e.cuts},
                       {"owners", e.owners},
                       {"score", e.score},
                       {"period_before", e.period_before},
                       {"period_after", e.period_after},
                       {"latency_after", e.latency_after}});
    }
    return out;
}

std::vector<HeuristicKind> parse_heuristics(const std::vector<std::string> &names) {
    std::vector<HeuristicKind> kinds;
    for (const std::string &name : names) {
        kinds.push_back(heuristic_from_string(name));
    }
    return kinds;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Interval mapping of linear workflows on heterogeneous platforms"};
    app.require_subcommand(1);

    // gen-platform
    Common gen_c;
    PlatformGenSpec gen;
    auto *gen_cmd = app.add_subcommand("gen-platform", "draw a seeded random platform");
    add_common(gen_cmd, gen_c, false);
    gen_cmd->add_option("--seed", gen.seed, "generator seed");
    gen_cmd->add_option("-p,--processors", gen.p, "processor count");
    gen_cmd->add_option("--speed-range", gen.speed_range, "low high")->expected(2);
    gen_cmd->add_option("--bandwidth-range", gen.bandwidth_range, "low high")->expected(2);

    // solve
    Common solve_c;
    bool serial = false;
    int threads = 0;
    auto *solve_cmd = app.add_subcommand("solve", "exact optimum by exhaustive enumeration");
    add_common(solve_cmd, solve_c, true);
    solve_cmd->add_flag("--serial", serial, "use the single-threaded reference enumerator");
    solve_cmd->add_option("--threads", threads, "OpenMP threads (0: default)");

    // heuristic
    Common heur_c;
    std::string heur_name;
    SearchConfig search;
    auto *heur_cmd = app.add_subcommand("heuristic", "run one splitting heuristic (H1..H6)");
    add_common(heur_cmd, heur_c, true);
    heur_cmd->add_option("--name", heur_name, "H1..H6 or the long name")->required();
    heur_cmd->add_option("--iterations", search.iterations, "H2 bisection steps");
    heur_cmd->add_option("--upper-factor", search.upper_factor, "H2 search range as a multiple of the optimal latency");

    // simulate
    Common sim_c;
    std::string sim_mapping;
    SimulationOptions sim;
    std::string events_path;
    auto *sim_cmd = app.add_subcommand("simulate", "discrete-event run of a mapping");
    add_common(sim_cmd, sim_c, false);
    sim_cmd->add_option("--mapping", sim_mapping, "mapping such as 1-3:2,4-7:1")->required();
    sim_cmd->add_option("--items", sim.items, "items to push through");
    sim_cmd->add_option("--warmup", sim.warmup, "items ignored before measuring the period");
    sim_cmd->add_option("--events", events_path, "write the event log as CSV");

    // sweep
    Common sweep_c;
    std::string sweep_objective = "latency";
    std::vector<double> sweep_thresholds;
    int sweep_count = 50;
    auto *sweep_cmd = app.add_subcommand("sweep", "exact optimum across a range of thresholds");
    add_common(sweep_cmd, sweep_c, false);
    sweep_cmd->add_option("--objective", sweep_objective, "latency (bounds the period) or period (bounds the latency)");
    sweep_cmd->add_option("--thresholds", sweep_thresholds, "ascending thresholds")->delimiter(',');
    sweep_cmd->add_option("--count", sweep_count, "automatic threshold count when --thresholds is absent");

    // campaign
    Common camp_c;
    std::vector<std::string> camp_platforms;
    std::vector<std::string> camp_heuristics;
    int camp_seeds = 0;
    std::uint64_t camp_first_seed = 1;
    PlatformGenSpec camp_gen;
    bool camp_relative = false;
    std::string camp_summary;
    int camp_threads = 0;
    auto *camp_cmd = app.add_subcommand("campaign", "heuristics against the exact optimum over many platforms");
    add_common(camp_cmd, camp_c, true);
    camp_cmd->add_option("--platforms", camp_platforms, "platform files, one row each");
    camp_cmd->add_option("--seeds", camp_seeds, "generate this many platforms instead");
    camp_cmd->add_option("--first-seed", camp_first_seed, "seed of the first generated platform");
    camp_cmd->add_option("-p,--processors", camp_gen.p, "processor count of generated platforms");
    camp_cmd->add_option("--heuristics", camp_heuristics, "heuristics to compare")->delimiter(',');
    camp_cmd->add_flag("--relative", camp_relative, "threshold is a factor of each platform's best bound");
    camp_cmd->add_option("--summary", camp_summary, "write the per-heuristic summary CSV here");
    camp_cmd->add_option("--threads", camp_threads, "parallel rows (0: PIPEMAP_THREADS or OpenMP default)");

    // export-lp
    Common lp_c;
    auto *lp_cmd = app.add_subcommand("export-lp", "write the integer program in CPLEX LP format");
    add_common(lp_cmd, lp_c, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? kOk : kInputError;
    }

    try {
        if (*gen_cmd) {
            const Platform platform = generate_platform(gen);
            emit_json(gen_c, platform_file(platform, gen));
            return kOk;
        }

        if (*solve_cmd) {
            const PipelineSpec spec = load_pipeline(solve_c);
            const Platform platform = load_platform(solve_c);
            const BicriteriaQuery query = load_query(solve_c);
            const SolveResult result =
                serial ? solve_serial(spec, platform, query) : solve(spec, platform, query, SolveOptions{threads});
            nlohmann::json doc = {{"objective", to_string(query.objective)},
                                  {"threshold", query.threshold},
                                  {"feasible", result.feasible()},
                                  {"evaluated", result.evaluated},
                                  {"unconstrained_bound", result.unconstrained_bound}};
            if (result.best) {
                doc["solution"] = solution_json(*result.best);
            }
            emit_json(solve_c, doc);
            return result.feasible() ? kOk : kInfeasible;
        }

        if (*heur_cmd) {
            const PipelineSpec spec = load_pipeline(heur_c);
            const Platform platform = load_platform(heur_c);
            const BicriteriaQuery query = load_query(heur_c);
            const HeuristicKind kind = heuristic_from_string(heur_name);
            if (bounds_period(kind) != (query.objective == Objective::MinimizeLatency)) {
                throw std::invalid_argument(long_name(kind) + " needs " +
                                            (bounds_period(kind) ? "--period" : "--latency"));
            }
            const HeuristicOutcome outcome = run_heuristic(kind, spec, platform, query.threshold, search);
            nlohmann::json doc = {{"heuristic", long_name(kind)},
                                  {"threshold", outcome.threshold},
                                  {"feasible", outcome.feasible},
                                  {"mapping", to_json(outcome.mapping)},
                                  {"metrics", to_json(outcome.metrics)},
                                  {"trace", trace_json(outcome.trace)}};
            if (outcome.search) {
                doc["search"] = {{"iterations", outcome.search->config.iterations},
                                 {"upper_factor", outcome.search->config.upper_factor},
                                 {"optimal_latency", outcome.search->optimal_latency},
                                 {"authorized_increase", outcome.search->authorized_increase},
                                 {"trials", outcome.search->trials},
                                 {"succeeded", outcome.search->succeeded}};
            }
            emit_json(heur_c, doc);
            return outcome.feasible ? kOk : kInfeasible;
        }

        if (*sim_cmd) {
            const PipelineSpec spec = load_pipeline(sim_c);
            const Platform platform = load_platform(sim_c);
            const IntervalMapping mapping = parse_signature(sim_mapping);
            sim.record_events = !events_path.empty();
            const SimulationReport report = simulate(spec, platform, mapping, sim);
            const MappingMetrics analytic = evaluate(spec, platform, mapping);
            emit_json(sim_c, {{"mapping", to_json(mapping)},
                              {"items", sim.items},
                              {"warmup", sim.warmup},
                              {"measured_period", report.measured_period},
                              {"measured_first_latency", report.measured_first_latency},
                              {"analytic", to_json(analytic)},
                              {"busy_time", report.busy_time},
                              {"item_output_times", report.item_output_times}});
            if (!events_path.empty()) {
                std::ofstream file(events_path);
                if (!file) {
                    throw std::runtime_error("cannot write " + events_path);
                }
                write_event_csv(file, report.event_log);
            }
            return kOk;
        }

        if (*sweep_cmd) {
            const PipelineSpec spec = load_pipeline(sweep_c);
            const Platform platform = load_platform(sweep_c);
            const Objective objective = objective_from_string(sweep_objective);
            if (sweep_thresholds.empty()) {
                sweep_thresholds = default_thresholds(spec, platform, objective, sweep_count);
            }
            const SweepReport report = run_sweep_report(spec, platform, objective, sweep_thresholds);
            emit_csv(sweep_c.out, sweep_table(report));
            std::cerr << "plateaus: " << report.plateaus() << ", edges: " << report.edges.size() << "\n";
            for (const std::string &v : report.violations) {
                std::cerr << "monotonicity violation: " << v << "\n";
            }
            return report.violations.empty() ? kOk : kInputError;
        }

        if (*camp_cmd) {
            const PipelineSpec spec = load_pipeline(camp_c);
            const BicriteriaQuery query = load_query(camp_c);
            std::vector<CampaignPlatform> platforms;
            if (!camp_c.platform.empty()) {
                camp_platforms.insert(camp_platforms.begin(), camp_c.platform);
            }
            for (const std::string &path : camp_platforms) {
                const nlohmann::json doc = read_json(path);
                std::optional<std::uint64_t> seed;
                if (auto gen_spec = provenance(doc)) {
                    seed = gen_spec->seed;
                }
                platforms.push_back({path, seed, platform_from_json(doc)});
            }
            for (int i = 0; i < camp_seeds; ++i) {
                camp_gen.seed = camp_first_seed + static_cast<std::uint64_t>(i);
                platforms.push_back({"seed-" + std::to_string(camp_gen.seed), camp_gen.seed, generate_platform(camp_gen)});
            }
            if (camp_heuristics.empty()) {
                if (query.objective == Objective::MinimizeLatency) {
                    camp_heuristics = {"H1", "H2", "H3", "H4"};
                } else {
                    camp_heuristics = {"H5", "H6"};
                }
            }
            CampaignOptions options;
            options.threads = camp_threads;
            const CampaignResult result =
                run_campaign(spec, platforms, {query.objective, query.threshold, camp_relative},
                             parse_heuristics(camp_heuristics), options);
            emit_csv(camp_c.out, campaign_table(result));
            if (!camp_summary.empty()) {
                emit_csv(camp_summary, summary_table(result.summary));
            }
            for (const CampaignRow &row : result.rows) {
                if (!row.error.empty()) {
                    std::cerr << row.platform_id << ": " << row.error << "\n";
                }
            }
            return kOk;
        }

        if (*lp_cmd) {
            const PipelineSpec spec = load_pipeline(lp_c);
            const Platform platform = load_platform(lp_c);
            emit(lp_c.out, export_ilp(spec, platform, load_query(lp_c)));
            return kOk;
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}
