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
#include <map>
#include <random>

#include "doctest.h"
#include "oracle/oracle.hpp"
#include "pipemap/ilp.hpp"
#include "pipemap/lp_syntax.hpp"

using namespace pipemap;

namespace {

std::string label(int u, int p) {
    if (u == 0) {
        return "in";
    }
    return u == p + 1 ? "out" : "p" + std::to_string(u);
}

// Variable values encoding `mapping`; every name the program can mention gets a value.
std::map<std::string, double> induced_point(int n, int p, const IntervalMapping &mapping, double topt) {
    std::vector<int> host(static_cast<std::size_t>(n) + 2, 0);
    for (int j = 0; j < mapping.m(); ++j) {
        for (int k = mapping.intervals[j].first; k <= mapping.intervals[j].last; ++k) {
            host[k] = mapping.assignees[j];
        }
    }
    host[n + 1] = p + 1;
    std::map<std::string, double> point;
    for (int k = 0; k <= n + 1; ++k) {
        for (int u = 0; u <= p + 1; ++u) {
            point["x_" + std::to_string(k) + "_" + label(u, p)] = host[k] == u ? 1.0 : 0.0;
        }
    }
    for (int k = 0; k <= n; ++k) {
        for (int u = 0; u <= p + 1; ++u) {
            point["y_" + std::to_string(k) + "_" + label(u, p)] = host[k] == u && host[k + 1] == u ? 1.0 : 0.0;
            for (int v = 0; v <= p + 1; ++v) {
                if (u != v) {
                    point["z_" + std::to_string(k) + "_" + label(u, p) + "_" + label(v, p)] =
                        host[k] == u && host[k + 1] == v ? 1.0 : 0.0;
                }
            }
        }
    }
    for (int u = 1; u <= p; ++u) {
        point["first_" + label(u, p)] = 1.0;
        point["last_" + label(u, p)] = 1.0;
    }
    for (int j = 0; j < mapping.m(); ++j) {
        point["first_" + label(mapping.assignees[j], p)] = mapping.intervals[j].first;
        point["last_" + label(mapping.assignees[j], p)] = mapping.intervals[j].last;
    }
    point["Topt"] = topt;
    return point;
}

double lhs(const LpRow &row, const std::map<std::string, double> &point, bool skip_topt) {
    double total = 0.0;
    for (const LpTerm &term : row.terms) {
        if (skip_topt && term.var == "Topt") {
            continue;
        }
        total += term.coef * point.at(term.var);
    }
    return total;
}

bool satisfied(const LpRow &row, const std::map<std::string, double> &point) {
    const double value = lhs(row, point, false);
    const double slack = 1e-9 * std::max(1.0, std::abs(row.rhs));
    switch (row.sense) {
    case Sense::LessEqual:
        return value <= row.rhs + slack;
    case Sense::GreaterEqual:
        return value >= row.rhs - slack;
    case Sense::Equal:
        return std::abs(value - row.rhs) <= slack;
    }
    return false;
}

} // namespace

TEST_CASE("variable families and pinned values") {
    const IlpInstance ilp = build_ilp(oracle::tiny_pipeline(), oracle::tiny_platform(), BicriteriaQuery::min_latency(7));
    CHECK(ilp.x_vars.size() == 20);
    CHECK(ilp.first_last.size() == 4);
    CHECK(ilp.find("x_0_in")->fixed == 1.0);
    CHECK(ilp.find("x_4_out")->fixed == 1.0);
    CHECK(ilp.find("x_2_in")->fixed == 0.0);
    CHECK(ilp.find("x_2_out")->fixed == 0.0);
    CHECK_FALSE(ilp.find("x_2_p1")->fixed);
    CHECK(ilp.find("y_0_p1")->fixed == 0.0);
    CHECK(ilp.find("y_3_p2")->fixed == 0.0);
    CHECK(ilp.find("y_1_in")->fixed == 0.0);
    CHECK(ilp.find("z_1_in_p1")->fixed == 0.0);
    CHECK(ilp.find("z_1_p1_out")->fixed == 0.0);
    CHECK_FALSE(ilp.find("z_0_in_p1")->fixed);
    CHECK_FALSE(ilp.find("z_3_p2_out")->fixed);
    CHECK(ilp.find("first_p2")->kind == VarKind::Integer);
    CHECK(ilp.find("first_p2")->upper == 3.0);
    CHECK(ilp.find("nonsense") == nullptr);
}

TEST_CASE("closed-form row counts") {
    std::mt19937_64 rng(2);
    for (int n = 1; n <= 5; ++n) {
        for (int p = 1; p <= 4; ++p) {
            const auto spec = oracle::random_pipeline(rng, n);
            const auto plat = oracle::random_platform(rng, p);
            const IlpInstance ilp = build_ilp(spec, plat, BicriteriaQuery::min_period(100));
            const std::size_t labels = static_cast<std::size_t>(p) + 2;
            CHECK(ilp.rows_in(family::kAssign) == static_cast<std::size_t>(n) + 2);
            CHECK(ilp.rows_in(family::kLink) == static_cast<std::size_t>(n) + 1);
            CHECK(ilp.rows_in(family::kLinkUse) == (n + 1) * labels * (labels - 1));
            CHECK(ilp.rows_in(family::kCollapse) == (n + 1) * labels);
            CHECK(ilp.rows_in(family::kFirstBound) == static_cast<std::size_t>(n * p));
            CHECK(ilp.rows_in(family::kLastBound) == static_cast<std::size_t>(n * p));
            CHECK(ilp.rows_in(family::kLastCut) == static_cast<std::size_t>((n - 1) * p * (p - 1)));
            CHECK(ilp.rows_in(family::kFirstCut) == static_cast<std::size_t>((n - 1) * p * (p - 1)));
            CHECK(ilp.rows_in(family::kOrder) == static_cast<std::size_t>(p));
            CHECK(ilp.rows_in(family::kLatency) == 1);
            CHECK(ilp.rows_in(family::kPeriod) == static_cast<std::size_t>(p));
        }
    }
}

TEST_CASE("every interval mapping is a feasible point with matching latency and period rows") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 12; ++trial) {
        const int n = 1 + trial % 4;
        const int p = 1 + trial % 3;
        const auto spec = oracle::random_pipeline(rng, n);
        const auto plat = oracle::random_platform(rng, p);
        for (Objective objective : {Objective::MinimizeLatency, Objective::MinimizePeriod}) {
            const IlpInstance ilp = build_ilp(spec, plat, {objective, 1e12});
            for (const IntervalMapping &mapping : oracle::all_mappings(n, p)) {
                const MappingMetrics metrics = evaluate(spec, plat, mapping);
                const auto point = induced_point(n, p, mapping, objective_value(metrics, objective));
                for (const LpRow &row : ilp.constraints) {
                    CAPTURE(row.name);
                    CHECK(satisfied(row, point));
                }
                for (const LpRow &row : ilp.constraints) {
                    if (row.family == family::kLatency) {
                        CHECK(nearly_equal(lhs(row, point, true), metrics.latency));
                    }
                }
                for (int j = 0; j < mapping.m(); ++j) {
                    const std::string name = std::string(family::kPeriod) + "_p" + std::to_string(mapping.assignees[j]);
                    for (const LpRow &row : ilp.constraints) {
                        if (row.name == name) {
                            CHECK(nearly_equal(lhs(row, point, true), metrics.per_processor_period[j]));
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("the fixed criterion is a constant right-hand side") {
    const auto spec = oracle::tiny_pipeline();
    const auto plat = oracle::tiny_platform();
    const IlpInstance by_latency = build_ilp(spec, plat, BicriteriaQuery::min_period(10));
    for (const LpRow &row : by_latency.constraints) {
        if (row.family == family::kLatency) {
            CHECK(row.rhs == 10);
        }
        if (row.family == family::kPeriod) {
            CHECK(row.rhs == 0);
            CHECK(row.terms.back().var == "Topt");
        }
    }
    const std::string text = export_ilp(spec, plat, BicriteriaQuery::min_latency(7));
    CHECK(text.find(" period_p1: ") != std::string::npos);
    CHECK(text.find("<= 7\n") != std::string::npos);
}

TEST_CASE("exported files pass the grammar check") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 1 + trial % 5;
        const int p = 1 + trial % 4;
        const auto spec = oracle::random_pipeline(rng, n);
        const auto plat = oracle::random_platform(rng, p);
        const IlpInstance ilp = build_ilp(spec, plat, BicriteriaQuery::min_latency(50));
        const LpReport report = check_lp(write_lp(ilp));
        CHECK(report.ok());
        CHECK(report.sense == "minimize");
        CHECK(report.row_names.size() == ilp.constraints.size());
        CHECK(report.rows_with_prefix(family::kAssign) == static_cast<std::size_t>(n) + 2);
        CHECK(report.rows_with_prefix(family::kPeriod) == static_cast<std::size_t>(p));
        CHECK(report.binaries.size() == ilp.x_vars.size() + ilp.y_vars.size() + ilp.z_vars.size());
        CHECK(report.generals.size() == static_cast<std::size_t>(2 * p));
    }
}

TEST_CASE("the grammar checker reports broken files") {
    CHECK_FALSE(check_lp("Minimize\n obj: x\nSubject To\n c1: x + y <= 1\n").ok()); // no End
    CHECK_FALSE(check_lp("Minimize\n obj: x\nSubject To\n c1: x + <= 1\nEnd\n").ok());
    CHECK_FALSE(check_lp("Minimize\n obj: x\nSubject To\n c1: x <= 1\n c1: x >= 0\nEnd\n").ok());
    CHECK_FALSE(check_lp("Subject To\n c1: x <= 1\nEnd\n").ok()); // no objective
    CHECK_FALSE(check_lp("Minimize\n obj: x\nSubject To\n c1: x 1\nEnd\n").ok());
    CHECK_FALSE(check_lp("Minimize\n obj: x\nSubject To\n c1: x <= 1\nBinaries\n x\nGenerals\n x\nEnd\n").ok());
    const LpReport good = check_lp("\\ comment\nMinimize\n obj: 2 x - y\nSubject To\n c1: x + y\n  >= 1\n"
                                   "Bounds\n 0 <= y <= 4\nBinaries\n x\nEnd\n");
    CHECK(good.ok());
    CHECK(good.bound_lines == 1);
    CHECK(good.rows_with_prefix("c1") == 1);
}

TEST_CASE("mapping recovery from x values") {
    const std::vector<std::pair<std::string, double>> values = {
        {"x_1_p2", 1.0}, {"x_2_p2", 0.9999999}, {"x_3_p1", 1.0}, {"x_1_p1", 0.0}, {"x_0_in", 1.0}};
    CHECK(signature(mapping_from_assignment(3, 2, values)) == "1-2:2,3:1");
    CHECK_THROWS_AS(mapping_from_assignment(3, 2, {{"x_1_p1", 1.0}, {"x_2_p1", 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(mapping_from_assignment(3, 2, {{"x_1_p1", 1}, {"x_2_p2", 1}, {"x_3_p1", 1}}),
                    std::invalid_argument);
}
