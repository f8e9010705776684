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
#include <limits>
#include <random>
#include <tuple>

#include "doctest.h"
#include "oracle/oracle.hpp"
#include "pipemap/enumerate.hpp"
#include "pipemap/solver.hpp"

using namespace pipemap;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string best_signature(const SolveResult &r) { return r.best ? signature(r.best->mapping) : "infeasible"; }

} // namespace

TEST_CASE("TINY queries") {
    const auto spec = oracle::tiny_pipeline();
    const auto plat = oracle::tiny_platform();

    SolveResult r = solve(spec, plat, BicriteriaQuery::min_latency(7));
    CHECK(best_signature(r) == "1-2:1,3:2");
    CHECK(r.best->metrics.latency == 10);
    CHECK(r.evaluated == 6);

    r = solve(spec, plat, BicriteriaQuery::min_latency(8));
    CHECK(best_signature(r) == "1-3:1");
    CHECK(r.best->metrics.latency == 8);

    r = solve(spec, plat, BicriteriaQuery::min_period(10));
    CHECK(best_signature(r) == "1-2:1,3:2");
    CHECK(r.best->metrics.period == 7);

    r = solve(spec, plat, BicriteriaQuery::min_latency(5));
    CHECK_FALSE(r.feasible());
    CHECK(r.unconstrained_bound == 6); // the smallest achievable period

    r = solve(spec, plat, BicriteriaQuery::min_period(6));
    CHECK_FALSE(r.feasible());
    CHECK(r.unconstrained_bound == 8);
}

TEST_CASE("query validation") {
    CHECK_THROWS_AS(BicriteriaQuery::min_latency(0).check(), std::invalid_argument);
    CHECK_THROWS_AS(BicriteriaQuery::min_period(-1).check(), std::invalid_argument);
    CHECK_THROWS_AS(solve(oracle::tiny_pipeline(), oracle::tiny_platform(), BicriteriaQuery::min_latency(0)),
                    std::invalid_argument);
    CHECK(objective_from_string("latency") == Objective::MinimizeLatency);
    CHECK(objective_from_string("minimize-period") == Objective::MinimizePeriod);
    CHECK_THROWS_AS(objective_from_string("throughput"), std::invalid_argument);
}

TEST_CASE("solve agrees with the recursive oracle") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> slack(0.9, 1.6);
    for (int trial = 0; trial < 120; ++trial) {
        const int n = 1 + trial % 5;
        const int p = 1 + (trial / 5) % 4;
        const auto spec = oracle::random_pipeline(rng, n);
        const auto plat = oracle::random_platform(rng, p);
        for (Objective objective : {Objective::MinimizeLatency, Objective::MinimizePeriod}) {
            const bool min_lat = objective == Objective::MinimizeLatency;
            const auto free_best = oracle::best(spec, plat, !min_lat, kInf);
            const double threshold = free_best->objective * slack(rng);
            const auto expected = oracle::best(spec, plat, min_lat, threshold);
            const SolveResult got = solve(spec, plat, {objective, threshold});
            REQUIRE(got.feasible() == expected.has_value());
            CHECK(nearly_equal(got.unconstrained_bound, free_best->objective));
            if (expected) {
                CHECK(nearly_equal(objective_value(got.best->metrics, objective), expected->objective));
                CHECK(within_threshold(bounded_value(got.best->metrics, objective), threshold));
                CHECK(nearly_equal(got.best->metrics.period, oracle::period(spec, plat, got.best->mapping)));
                CHECK(nearly_equal(got.best->metrics.latency, oracle::latency(spec, plat, got.best->mapping)));
            }
        }
    }
}

TEST_CASE("tie-break: objective, then bounded value, then canonical index") {
    // a homogeneous platform makes many mappings tie exactly
    PipelineSpec spec;
    spec.w = {2, 2, 2, 2};
    spec.delta = {1, 1, 1, 1, 1};
    spec.stage_names = {"a", "b", "c", "d"};
    const Platform plat = Platform::uniform({1, 1, 1}, 1);
    for (double threshold : {4.0, 5.0, 6.0, 10.0}) {
        for (Objective objective : {Objective::MinimizeLatency, Objective::MinimizePeriod}) {
            std::optional<std::tuple<double, double, std::uint64_t>> best;
            MappingEnumerator stream(4, 3);
            while (stream.next()) {
                const MappingMetrics mm = evaluate(spec, plat, stream.current());
                if (!within_threshold(bounded_value(mm, objective), threshold)) {
                    continue;
                }
                const auto key = std::make_tuple(objective_value(mm, objective), bounded_value(mm, objective), stream.index());
                if (!best || key < *best) {
                    best = key;
                }
            }
            const SolveResult r = solve(spec, plat, {objective, threshold});
            REQUIRE(r.feasible() == best.has_value());
            if (best) {
                CHECK(r.best->canonical_index == std::get<2>(*best));
                CHECK(r.best->mapping == mapping_at(4, 3, std::get<2>(*best)));
            }
        }
    }
}

TEST_CASE("parallel kernel is bit-identical to the serial reference") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 2 + trial % 5;
        const int p = 2 + trial % 5;
        const auto spec = oracle::random_pipeline(rng, n);
        const auto plat = oracle::random_platform(rng, p);
        const double bound = solve_serial(spec, plat, BicriteriaQuery::min_latency(1e300)).unconstrained_bound;
        for (double factor : {0.99, 1.0, 1.2, 2.0}) {
            const BicriteriaQuery q = BicriteriaQuery::min_latency(bound * factor);
            const SolveResult serial = solve_serial(spec, plat, q);
            for (int threads : {1, 3, 0}) {
                const SolveResult parallel = solve(spec, plat, q, SolveOptions{threads});
                REQUIRE(parallel.feasible() == serial.feasible());
                CHECK(parallel.evaluated == serial.evaluated);
                CHECK(parallel.unconstrained_bound == serial.unconstrained_bound);
                if (serial.best) {
                    CHECK(parallel.best->canonical_index == serial.best->canonical_index);
                    CHECK(parallel.best->metrics.latency == serial.best->metrics.latency);
                    CHECK(parallel.best->metrics.period == serial.best->metrics.period);
                }
            }
        }
    }
}

TEST_CASE("sweep on TINY") {
    const auto spec = oracle::tiny_pipeline();
    const auto plat = oracle::tiny_platform();
    const double a[] = {5, 6, 7, 8};
    auto rows = sweep(spec, plat, Objective::MinimizeLatency, a);
    REQUIRE(rows.size() == 4);
    CHECK_FALSE(rows[0].best);
    CHECK(rows[1].best->metrics.latency == 11);
    CHECK(rows[2].best->metrics.latency == 10);
    CHECK(rows[3].best->metrics.latency == 8);

    const double b[] = {8, 9, 1000};
    for (const SweepRow &row : sweep(spec, plat, Objective::MinimizeLatency, b)) {
        CHECK(row.best->metrics.latency == 8);
    }

    const double c[] = {6};
    CHECK_FALSE(sweep(spec, plat, Objective::MinimizePeriod, c)[0].best);

    const double reversed[] = {8, 7};
    CHECK_THROWS_AS(sweep(spec, plat, Objective::MinimizeLatency, reversed), std::invalid_argument);
}

TEST_CASE("sweep equals one solve per threshold, and is monotone") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + trial % 4;
        const int p = 2 + trial % 3;
        const auto spec = oracle::random_pipeline(rng, n);
        const auto plat = oracle::random_platform(rng, p);
        for (Objective objective : {Objective::MinimizeLatency, Objective::MinimizePeriod}) {
            const SolveResult free_run = solve(spec, plat, {objective, kInf});
            const double lo = free_run.unconstrained_bound * 0.9;
            const double hi = bounded_value(free_run.best->metrics, objective) * 1.1;
            std::vector<double> thresholds;
            for (int i = 0; i < 25; ++i) {
                thresholds.push_back(lo + (hi - lo) * i / 24.0);
            }
            const auto rows = sweep(spec, plat, objective, thresholds);
            std::optional<double> previous;
            bool seen_feasible = false;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                const SolveResult single = solve(spec, plat, {objective, thresholds[i]});
                REQUIRE(rows[i].best.has_value() == single.feasible());
                if (seen_feasible) {
                    CHECK(rows[i].best.has_value()); // feasibility monotonicity
                }
                if (!rows[i].best) {
                    continue;
                }
                seen_feasible = true;
                CHECK(rows[i].best->canonical_index == single.best->canonical_index);
                const double value = objective_value(rows[i].best->metrics, objective);
                if (previous) {
                    CHECK(value <= *previous);
                }
                previous = value;
            }
        }
    }
}

TEST_CASE("the full n=7, p=10 space is enumerated") {
    std::mt19937_64 rng(1);
    const auto spec = oracle::random_pipeline(rng, 7);
    const auto plat = oracle::random_platform(rng, 10);
    const SolveResult r = solve(spec, plat, BicriteriaQuery::min_period(1e300));
    CHECK(r.evaluated == 2077750);
}
