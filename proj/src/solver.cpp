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

#include "pipemap/solver.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

#include "pipemap/enumerate.hpp"

namespace pipemap {

std::string to_string(Objective objective) {
    return objective == Objective::MinimizeLatency ? "minimize-latency" : "minimize-period";
}

Objective objective_from_string(const std::string &text) {
    if (text == "latency" || text == "min-latency" || text == "minimize-latency") {
        return Objective::MinimizeLatency;
    }
    if (text == "period" || text == "min-period" || text == "minimize-period") {
        return Objective::MinimizePeriod;
    }
    throw std::invalid_argument("unknown objective '" + text + "' (use latency or period)");
}

void BicriteriaQuery::check() const {
    if (!(threshold > 0.0) || std::isnan(threshold)) {
        throw std::invalid_argument("query threshold must be positive");
    }
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Stage data of one interval partition, in chain order.
struct Layout {
    int m = 0;
    std::uint64_t base = 0; // canonical index of the partition's first mapping
    std::vector<Interval> intervals;
    std::vector<double> work;
    std::vector<double> in_data;
    std::vector<double> out_data;
};

/// One parallel work item: a partition with a fixed first assignee.
struct Unit {
    std::size_t layout = 0;
    int first = 1;
    std::uint64_t base = 0;
};

/**
 * Depth-first walk over assignee tuples. The arithmetic mirrors
 * evaluate_unchecked() term for term, so metrics are bit-identical to the
 * reference path.
 */
class ChainKernel {
  public:
    ChainKernel(const PipelineSpec &spec, const Platform &platform) : spec_(spec), platform_(platform) {
        const int n = spec.n();
        const int p = platform.p();
        std::uint64_t offset = 0; // canonical index of the first mapping with the current m
        int current_m = 1;
        std::uint64_t rank_in_m = 0;
        for (auto &intervals : interval_partitions(n)) {
            const int m = static_cast<int>(intervals.size());
            if (m > p) {
                break;
            }
            if (m != current_m) {
                offset += mapping_count(n, p, current_m);
                current_m = m;
                rank_in_m = 0;
            }
            Layout layout;
            layout.m = m;
            layout.base = offset + rank_in_m * arrangements(p, m);
            for (const Interval &iv : intervals) {
                layout.work.push_back(cost::interval_work(spec, iv.first, iv.last));
                layout.in_data.push_back(spec.data(iv.first - 1));
                layout.out_data.push_back(spec.data(iv.last));
            }
            layout.intervals = std::move(intervals);
            const std::uint64_t per_first = arrangements(p - 1, m - 1);
            for (int first = 1; first <= p; ++first) {
                units_.push_back({layouts_.size(), first, layout.base + static_cast<std::uint64_t>(first - 1) * per_first});
            }
            layouts_.push_back(std::move(layout));
            ++rank_in_m;
        }
    }

    std::size_t unit_count() const { return units_.size(); }

    template <class Leaf>
    void walk(std::size_t unit_id, Leaf &leaf) const {
        const Unit &unit = units_[unit_id];
        const Layout &layout = layouts_[unit.layout];
        Frame frame;
        frame.assignee.assign(static_cast<std::size_t>(layout.m), 0);
        frame.head.assign(static_cast<std::size_t>(layout.m), 0.0);
        frame.max_cycle.assign(static_cast<std::size_t>(layout.m), 0.0);
        frame.latency.assign(static_cast<std::size_t>(layout.m), 0.0);
        frame.used.assign(static_cast<std::size_t>(platform_.p()) + 1, false);
        frame.next_index = unit.base;

        const int u = unit.first;
        frame.assignee[0] = u;
        frame.used[u] = true;
        frame.head[0] = cost::head(layout.in_data[0], platform_.bandwidth(Platform::in(), u), layout.work[0],
                                   platform_.speed(u));
        frame.latency[0] = 0.0 + frame.head[0];
        frame.max_cycle[0] = 0.0;
        if (layout.m == 1) {
            finish(layout, 0, frame, leaf);
        } else {
            descend(layout, 1, frame, leaf);
        }
    }

  private:
    struct Frame {
        std::vector<int> assignee;
        std::vector<double> head;
        std::vector<double> max_cycle; // max over cycles of intervals before this depth
        std::vector<double> latency;   // running latency including this depth's head
        std::vector<bool> used;
        std::uint64_t next_index = 0;
    };

    /// p! / (p - m)!, the number of injective assignee tuples of length m.
    static std::uint64_t arrangements(int p, int m) {
        std::uint64_t out = 1;
        for (int i = 0; i < m; ++i) {
            out *= static_cast<std::uint64_t>(p - i);
        }
        return out;
    }

    template <class Leaf>
    void descend(const Layout &layout, int depth, Frame &frame, Leaf &leaf) const {
        const int prev = frame.assignee[depth - 1];
        for (int v = 1; v <= platform_.p(); ++v) {
            if (frame.used[v]) {
                continue;
            }
            const double closing = cost::cycle(frame.head[depth - 1], layout.out_data[depth - 1], platform_.bandwidth(prev, v));
            frame.max_cycle[depth] = std::max(frame.max_cycle[depth - 1], closing);
            frame.head[depth] = cost::head(layout.in_data[depth], platform_.bandwidth(prev, v), layout.work[depth],
                                           platform_.speed(v));
            frame.latency[depth] = frame.latency[depth - 1] + frame.head[depth];
            frame.assignee[depth] = v;
            if (depth == layout.m - 1) {
                finish(layout, depth, frame, leaf);
            } else {
                frame.used[v] = true;
                descend(layout, depth + 1, frame, leaf);
                frame.used[v] = false;
            }
        }
    }

    template <class Leaf>
    void finish(const Layout &layout, int depth, Frame &frame, Leaf &leaf) const {
        const int v = frame.assignee[depth];
        const double out_bw = platform_.bandwidth(v, platform_.out());
        const double last = cost::cycle(frame.head[depth], layout.out_data[depth], out_bw);
        const double period = std::max(frame.max_cycle[depth], last);
        const double latency = frame.latency[depth] + spec_.data(spec_.n()) / out_bw;
        leaf(period, latency, frame.next_index++);
    }

    const PipelineSpec &spec_;
    const Platform &platform_;
    std::vector<Layout> layouts_;
    std::vector<Unit> units_;
};

int thread_count(const SolveOptions &options) { return options.threads > 0 ? options.threads : omp_get_max_threads(); }

/// Running optimum for one query; candidates compare by (objective, bounded, index).
struct Incumbent {
    Objective objective;
    double threshold;
    bool found = false;
    double best_objective = kInf;
    double best_bounded = kInf;
    std::uint64_t best_index = 0;
    double bound_min = kInf;
    std::uint64_t evaluated = 0;

    void offer(double period, double latency, std::uint64_t index) {
        ++evaluated;
        const bool min_latency = objective == Objective::MinimizeLatency;
        const double bounded = min_latency ? period : latency;
        const double value = min_latency ? latency : period;
        bound_min = std::min(bound_min, bounded);
        if (!within_threshold(bounded, threshold)) {
            return;
        }
        if (!found || std::tie(value, bounded, index) < std::tie(best_objective, best_bounded, best_index)) {
            found = true;
            best_objective = value;
            best_bounded = bounded;
            best_index = index;
        }
    }

    void merge(const Incumbent &other) {
        evaluated += other.evaluated;
        bound_min = std::min(bound_min, other.bound_min);
        if (other.found && (!found || std::tie(other.best_objective, other.best_bounded, other.best_index) <
                                          std::tie(best_objective, best_bounded, best_index))) {
            found = true;
            best_objective = other.best_objective;
            best_bounded = other.best_bounded;
            best_index = other.best_index;
        }
    }
};

Solution materialize(const PipelineSpec &spec, const Platform &platform, std::uint64_t index) {
    Solution solution;
    solution.mapping = mapping_at(spec.n(), platform.p(), index);
    solution.metrics = evaluate_unchecked(spec, platform, solution.mapping);
    solution.canonical_index = index;
    return solution;
}

SolveResult finish_result(const PipelineSpec &spec, const Platform &platform, const Incumbent &incumbent) {
    SolveResult result;
    result.unconstrained_bound = incumbent.bound_min;
    result.evaluated = incumbent.evaluated;
    if (incumbent.found) {
        result.best = materialize(spec, platform, incumbent.best_index);
    }
    return result;
}

void check_inputs(const PipelineSpec &spec, const Platform &platform) {
    spec.check();
    platform.check();
}

/// (bounded, objective, index) of one mapping, as used by the sweep staircase.
struct Point {
    double bounded;
    double value;
    std::uint64_t index;
};

/// Keeps the points that are the optimum for at least one threshold.
void reduce_to_staircase(std::vector<Point> &points) {
    std::sort(points.begin(), points.end(), [](const Point &a, const Point &b) {
        return std::tie(a.bounded, a.value, a.index) < std::tie(b.bounded, b.value, b.index);
    });
    std::vector<Point> kept;
    for (const Point &pt : points) {
        if (kept.empty() || std::tie(pt.value, pt.bounded, pt.index) <
                                std::tie(kept.back().value, kept.back().bounded, kept.back().index)) {
            kept.push_back(pt);
        }
    }
    points = std::move(kept);
}

} // namespace

SolveResult solve(const PipelineSpec &spec, const Platform &platform, const BicriteriaQuery &query,
                  const SolveOptions &options) {
    check_inputs(spec, platform);
    query.check();
    const ChainKernel kernel(spec, platform);
    const auto units = static_cast<long>(kernel.unit_count());
    std::vector<Incumbent> partial(static_cast<std::size_t>(units), Incumbent{query.objective, query.threshold});

#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count(options))
    for (long i = 0; i < units; ++i) {
        Incumbent &local = partial[static_cast<std::size_t>(i)];
        auto leaf = [&local](double period, double latency, std::uint64_t index) { local.offer(period, latency, index); };
        kernel.walk(static_cast<std::size_t>(i), leaf);
    }

    Incumbent total{query.objective, query.threshold};
    for (const Incumbent &part : partial) {
        total.merge(part);
    }
    return finish_result(spec, platform, total);
}

SolveResult solve_serial(const PipelineSpec &spec, const Platform &platform, const BicriteriaQuery &query) {
    check_inputs(spec, platform);
    query.check();
    Incumbent incumbent{query.objective, query.threshold};
    MappingEnumerator it(spec.n(), platform.p());
    while (it.next()) {
        const MappingMetrics metrics = evaluate_unchecked(spec, platform, it.current());
        incumbent.offer(metrics.period, metrics.latency, it.index());
    }
    return finish_result(spec, platform, incumbent);
}

std::vector<SweepRow> sweep(const PipelineSpec &spec, const Platform &platform, Objective objective,
                            std::span<const double> thresholds, const SolveOptions &options) {
    check_inputs(spec, platform);
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        BicriteriaQuery{objective, thresholds[i]}.check();
        if (i > 0 && thresholds[i] < thresholds[i - 1]) {
            throw std::invalid_argument("sweep thresholds must be sorted ascending");
        }
    }
    const ChainKernel kernel(spec, platform);
    const auto units = static_cast<long>(kernel.unit_count());
    std::vector<std::vector<Point>> partial(static_cast<std::size_t>(units));
    const bool min_latency = objective == Objective::MinimizeLatency;

#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count(options))
    for (long i = 0; i < units; ++i) {
        std::vector<Point> &local = partial[static_cast<std::size_t>(i)];
        auto leaf = [&local, min_latency](double period, double latency, std::uint64_t index) {
            local.push_back(min_latency ? Point{period, latency, index} : Point{latency, period, index});
        };
        kernel.walk(static_cast<std::size_t>(i), leaf);
        reduce_to_staircase(local);
    }

    std::vector<Point> staircase;
    for (auto &part : partial) {
        staircase.insert(staircase.end(), part.begin(), part.end());
    }
    reduce_to_staircase(staircase);

    std::vector<SweepRow> rows;
    rows.reserve(thresholds.size());
    for (double threshold : thresholds) {
        SweepRow row{threshold, std::nullopt};
        // bounded values ascend along the staircase while objectives strictly improve
        const Point *answer = nullptr;
        for (const Point &pt : staircase) {
            if (!within_threshold(pt.bounded, threshold)) {
                break;
            }
            answer = &pt;
        }
        if (answer != nullptr) {
            row.best = materialize(spec, platform, answer->index);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace pipemap
