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

#include "pipemap/heuristics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pipemap {

std::string short_name(HeuristicKind kind) { return "H" + std::to_string(static_cast<int>(kind) + 1); }

std::string long_name(HeuristicKind kind) {
    switch (kind) {
    case HeuristicKind::H1:
        return "H1-Sp-mono-P";
    case HeuristicKind::H2:
        return "H2-Sp-bi-P";
    case HeuristicKind::H3:
        return "H3-3-Sp-mono-P";
    case HeuristicKind::H4:
        return "H4-3-Sp-bi-P";
    case HeuristicKind::H5:
        return "H5-Sp-mono-L";
    case HeuristicKind::H6:
        return "H6-Sp-bi-L";
    }
    return "?";
}

HeuristicKind heuristic_from_string(const std::string &text) {
    for (HeuristicKind kind : kAllHeuristics) {
        std::string lower = text;
        std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::toupper(c); });
        std::string full = long_name(kind);
        std::transform(full.begin(), full.end(), full.begin(), [](unsigned char c) { return std::toupper(c); });
        if (lower == short_name(kind) || lower == full) {
            return kind;
        }
    }
    throw std::invalid_argument("unknown heuristic '" + text + "' (expected H1..H6)");
}

bool bounds_period(HeuristicKind kind) {
    return kind == HeuristicKind::H1 || kind == HeuristicKind::H2 || kind == HeuristicKind::H3 ||
           kind == HeuristicKind::H4;
}

std::vector<int> processors_by_speed(const Platform &platform) {
    std::vector<int> order(static_cast<std::size_t>(platform.p()));
    for (int u = 1; u <= platform.p(); ++u) {
        order[u - 1] = u;
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return platform.speed(a) > platform.speed(b); });
    return order;
}

namespace {

enum class Rule {
    MaxCycle, // min over candidates of max(cycle) among the split parties
    Ratio,    // min over candidates of max(dLatency / dPeriod(i)), all dPeriod(i) > 0
};

struct EngineConfig {
    int ways = 2;
    Rule rule = Rule::MaxCycle;
    std::optional<double> latency_cap;
    std::optional<double> period_target;
};

struct EngineResult {
    IntervalMapping mapping;
    MappingMetrics metrics;
    std::vector<SplitEvent> trace;
};

struct Candidate {
    IntervalMapping mapping;
    MappingMetrics metrics;
    std::vector<int> cuts;
    std::vector<int> owners;
    double score = 0.0;
};

constexpr std::array<std::array<int, 3>, 6> kPermutations = {
    {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

class SplitEngine {
  public:
    SplitEngine(const PipelineSpec &spec, const Platform &platform, EngineConfig config)
        : spec_(spec), platform_(platform), config_(config), order_(processors_by_speed(platform)) {}

    EngineResult run() const {
        EngineResult state;
        state.mapping = IntervalMapping::single(spec_.n(), order_[0]);
        state.metrics = evaluate(spec_, platform_, state.mapping);
        std::size_t next_unused = 1;
        int round = 0;

        while (true) {
            if (config_.period_target && within_threshold(state.metrics.period, *config_.period_target)) {
                break;
            }
            const std::size_t remaining = order_.size() - next_unused;
            if (remaining == 0) {
                break;
            }
            const auto &cycles = state.metrics.per_processor_period;
            const auto j = static_cast<int>(std::max_element(cycles.begin(), cycles.end()) - cycles.begin());
            const Interval target = state.mapping.intervals[j];
            if (target.length() == 1) {
                break;
            }
            std::vector<int> recipients{order_[next_unused]};
            if (config_.ways == 3 && remaining >= 2 && target.length() >= 3) {
                recipients.push_back(order_[next_unused + 1]);
            }

            std::optional<Candidate> best = recipients.size() == 2 ? best_three_way(state, j, recipients)
                                                                   : best_two_way(state, j, recipients[0]);
            if (!best || !(best->metrics.period < state.metrics.period)) {
                break;
            }
            SplitEvent event;
            event.round = ++round;
            event.target = state.mapping.assignees[j];
            event.recipients = recipients;
            event.cuts = best->cuts;
            event.owners = best->owners;
            event.score = best->score;
            event.period_before = state.metrics.period;
            event.period_after = best->metrics.period;
            event.latency_after = best->metrics.latency;
            state.trace.push_back(std::move(event));
            state.mapping = std::move(best->mapping);
            state.metrics = std::move(best->metrics);
            next_unused += recipients.size();
        }
        return state;
    }

  private:
    /// Replaces interval j by parts cut after `cuts`, part i going to owners[i].
    static IntervalMapping split(const IntervalMapping &mapping, int j, const std::vector<int> &cuts,
                                 const std::vector<int> &owners) {
        IntervalMapping out;
        out.intervals.reserve(mapping.intervals.size() + cuts.size());
        out.assignees.reserve(mapping.intervals.size() + cuts.size());
        for (int i = 0; i < mapping.m(); ++i) {
            if (i != j) {
                out.intervals.push_back(mapping.intervals[i]);
                out.assignees.push_back(mapping.assignees[i]);
                continue;
            }
            int first = mapping.intervals[i].first;
            for (std::size_t part = 0; part <= cuts.size(); ++part) {
                const int last = part < cuts.size() ? cuts[part] : mapping.intervals[i].last;
                out.intervals.push_back({first, last});
                out.assignees.push_back(owners[part]);
                first = last + 1;
            }
        }
        return out;
    }

    /// Scores a candidate; false when it is not admissible.
    bool score(const EngineResult &state, int j, Candidate &c) const {
        if (config_.latency_cap && !within_threshold(c.metrics.latency, *config_.latency_cap)) {
            return false;
        }
        const double before = state.metrics.per_processor_period[j];
        const auto parts = static_cast<int>(c.owners.size());
        if (config_.rule == Rule::MaxCycle) {
            double worst = 0.0;
            for (int part = 0; part < parts; ++part) {
                worst = std::max(worst, c.metrics.per_processor_period[j + part]);
            }
            c.score = worst;
            return true;
        }
        const double d_latency = c.metrics.latency - state.metrics.latency;
        double worst = -std::numeric_limits<double>::infinity();
        for (int part = 0; part < parts; ++part) {
            const double d_period = before - c.metrics.per_processor_period[j + part];
            if (!(d_period > 0.0)) {
                return false;
            }
            worst = std::max(worst, d_latency / d_period);
        }
        c.score = worst;
        return true;
    }

    void consider(const EngineResult &state, int j, std::vector<int> cuts, std::vector<int> owners,
                  std::optional<Candidate> &best) const {
        Candidate c;
        c.mapping = split(state.mapping, j, cuts, owners);
        c.metrics = evaluate_unchecked(spec_, platform_, c.mapping);
        c.cuts = std::move(cuts);
        c.owners = std::move(owners);
        if (!score(state, j, c)) {
            return;
        }
        // strict: the first candidate in scan order wins exact ties
        if (!best || c.score < best->score) {
            best = std::move(c);
        }
    }

    // Scan order: cut ascending; target keeps the first part, then the second.
    std::optional<Candidate> best_two_way(const EngineResult &state, int j, int fresh) const {
        const Interval iv = state.mapping.intervals[j];
        const int self = state.mapping.assignees[j];
        std::optional<Candidate> best;
        for (int cut = iv.first; cut < iv.last; ++cut) {
            consider(state, j, {cut}, {self, fresh}, best);
            consider(state, j, {cut}, {fresh, self}, best);
        }
        return best;
    }

    // Scan order: (cut1, cut2) lexicographic, then kPermutations over (target, fresh1, fresh2).
    std::optional<Candidate> best_three_way(const EngineResult &state, int j, const std::vector<int> &fresh) const {
        const Interval iv = state.mapping.intervals[j];
        const std::array<int, 3> parties{state.mapping.assignees[j], fresh[0], fresh[1]};
        std::optional<Candidate> best;
        for (int c1 = iv.first; c1 < iv.last - 1; ++c1) {
            for (int c2 = c1 + 1; c2 < iv.last; ++c2) {
                for (const auto &perm : kPermutations) {
                    consider(state, j, {c1, c2}, {parties[perm[0]], parties[perm[1]], parties[perm[2]]}, best);
                }
            }
        }
        return best;
    }

    const PipelineSpec &spec_;
    const Platform &platform_;
    EngineConfig config_;
    std::vector<int> order_;
};

void check_inputs(const PipelineSpec &spec, const Platform &platform, double threshold) {
    spec.check();
    platform.check();
    if (!(threshold > 0.0)) {
        throw std::invalid_argument("heuristic threshold must be positive");
    }
}

HeuristicOutcome package(HeuristicKind kind, double threshold, EngineResult result, bool feasible) {
    HeuristicOutcome outcome;
    outcome.kind = kind;
    outcome.threshold = threshold;
    outcome.mapping = std::move(result.mapping);
    outcome.metrics = std::move(result.metrics);
    outcome.trace = std::move(result.trace);
    outcome.feasible = feasible;
    return outcome;
}

HeuristicOutcome period_bounded(HeuristicKind kind, const PipelineSpec &spec, const Platform &platform,
                                double fixed_period, int ways, Rule rule) {
    check_inputs(spec, platform, fixed_period);
    EngineConfig config{ways, rule, std::nullopt, fixed_period};
    EngineResult result = SplitEngine(spec, platform, config).run();
    const bool feasible = within_threshold(result.metrics.period, fixed_period);
    return package(kind, fixed_period, std::move(result), feasible);
}

HeuristicOutcome latency_bounded(HeuristicKind kind, const PipelineSpec &spec, const Platform &platform,
                                 double fixed_latency, Rule rule) {
    check_inputs(spec, platform, fixed_latency);
    const std::vector<int> order = processors_by_speed(platform);
    EngineResult start;
    start.mapping = IntervalMapping::single(spec.n(), order[0]);
    start.metrics = evaluate(spec, platform, start.mapping);
    if (!within_threshold(start.metrics.latency, fixed_latency)) {
        return package(kind, fixed_latency, std::move(start), false);
    }
    EngineConfig config{2, rule, fixed_latency, std::nullopt};
    return package(kind, fixed_latency, SplitEngine(spec, platform, config).run(), true);
}

} // namespace

HeuristicOutcome h1_split_mono_period(const PipelineSpec &spec, const Platform &platform, double fixed_period) {
    return period_bounded(HeuristicKind::H1, spec, platform, fixed_period, 2, Rule::MaxCycle);
}

HeuristicOutcome h2_split_bi_period(const PipelineSpec &spec, const Platform &platform, double fixed_period,
                                    const SearchConfig &config) {
    check_inputs(spec, platform, fixed_period);
    if (config.iterations < 0 || !(config.upper_factor >= 0.0)) {
        throw std::invalid_argument("H2 search needs iterations >= 0 and upper_factor >= 0");
    }
    const std::vector<int> order = processors_by_speed(platform);
    const MappingMetrics start = evaluate(spec, platform, IntervalMapping::single(spec.n(), order[0]));

    LatencySearch search;
    search.config = config;
    search.optimal_latency = start.latency;

    auto trial = [&](double increase) {
        ++search.trials;
        EngineConfig engine{2, Rule::Ratio, start.latency + increase, fixed_period};
        return SplitEngine(spec, platform, engine).run();
    };
    auto success = [&](const EngineResult &r) { return within_threshold(r.metrics.period, fixed_period); };

    std::optional<EngineResult> best;
    double best_increase = 0.0;
    std::optional<EngineResult> last_failure;

    if (within_threshold(start.period, fixed_period)) {
        best = trial(0.0);
    } else {
        double lo = 0.0;
        double hi = config.upper_factor * start.latency;
        EngineResult widest = trial(hi);
        if (success(widest)) {
            best = std::move(widest);
            best_increase = hi;
        } else {
            last_failure = std::move(widest);
        }
        for (int it = 0; it < config.iterations; ++it) {
            const double mid = 0.5 * (lo + hi);
            EngineResult r = trial(mid);
            if (success(r)) {
                best = std::move(r);
                best_increase = mid;
                hi = mid;
            } else {
                last_failure = std::move(r);
                lo = mid;
            }
        }
    }

    search.succeeded = best.has_value();
    search.authorized_increase = best ? best_increase : config.upper_factor * start.latency;
    EngineResult chosen = best ? std::move(*best) : std::move(*last_failure);
    const bool feasible = within_threshold(chosen.metrics.period, fixed_period);
    HeuristicOutcome outcome = package(HeuristicKind::H2, fixed_period, std::move(chosen), feasible);
    outcome.search = search;
    return outcome;
}

HeuristicOutcome h3_threesplit_mono_period(const PipelineSpec &spec, const Platform &platform, double fixed_period) {
    return period_bounded(HeuristicKind::H3, spec, platform, fixed_period, 3, Rule::MaxCycle);
}

HeuristicOutcome h4_threesplit_bi_period(const PipelineSpec &spec, const Platform &platform, double fixed_period) {
    return period_bounded(HeuristicKind::H4, spec, platform, fixed_period, 3, Rule::Ratio);
}

HeuristicOutcome h5_split_mono_latency(const PipelineSpec &spec, const Platform &platform, double fixed_latency) {
    return latency_bounded(HeuristicKind::H5, spec, platform, fixed_latency, Rule::MaxCycle);
}

HeuristicOutcome h6_split_bi_latency(const PipelineSpec &spec, const Platform &platform, double fixed_latency) {
    return latency_bounded(HeuristicKind::H6, spec, platform, fixed_latency, Rule::Ratio);
}

HeuristicOutcome run_heuristic(HeuristicKind kind, const PipelineSpec &spec, const Platform &platform,
                               double threshold, const SearchConfig &config) {
    switch (kind) {
    case HeuristicKind::H1:
        return h1_split_mono_period(spec, platform, threshold);
    case HeuristicKind::H2:
        return h2_split_bi_period(spec, platform, threshold, config);
    case HeuristicKind::H3:
        return h3_threesplit_mono_period(spec, platform, threshold);
    case HeuristicKind::H4:
        return h4_threesplit_bi_period(spec, platform, threshold);
    case HeuristicKind::H5:
        return h5_split_mono_latency(spec, platform, threshold);
    case HeuristicKind::H6:
        return h6_split_bi_latency(spec, platform, threshold);
    }
    throw std::invalid_argument("unknown heuristic");
}

} // namespace pipemap
