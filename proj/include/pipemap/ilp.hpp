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

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pipemap/model.hpp"
#include "pipemap/solver.hpp"

namespace pipemap {

// Integer program for the optimal interval mapping.
//
// Variable names:
//   x_k_u     stage k (0..n+1) runs on u
//   z_k_u_v   the transfer after stage k (0..n) uses link u -> v, u != v
//   y_k_u     stages k and k+1 both run on u
//   first_u, last_u   interval bounds of processor u (u in p1..pP)
//   Topt      the minimized criterion
// with u, v ranging over in, p1..pP, out.

enum class VarKind { Binary, Integer, Continuous };
enum class Sense { LessEqual, GreaterEqual, Equal };

struct LpVariable {
    std::string name;
    VarKind kind = VarKind::Binary;
    double lower = 0.0;
    double upper = 1.0;
    std::optional<double> fixed;
};

struct LpTerm {
    double coef = 1.0;
    std::string var;
};

struct LpRow {
    std::string name;
    std::string family;
    std::vector<LpTerm> terms;
    Sense sense = Sense::LessEqual;
    double rhs = 0.0;
};

/// Constraint families, also the row-name prefixes in the written file.
namespace family {
inline constexpr const char *kAssign = "assign";         // every stage has one processor
inline constexpr const char *kLink = "link";             // each transfer uses a link or collapses
inline constexpr const char *kLinkUse = "xz";            // x_k_u + x_k+1_v <= 1 + z_k_u_v
inline constexpr const char *kCollapse = "xy";           // x_k_u + x_k+1_u <= 1 + y_k_u
inline constexpr const char *kFirstBound = "firstk";     // first_u <= k x + n (1 - x)
inline constexpr const char *kLastBound = "lastk";       // last_u >= k x
inline constexpr const char *kLastCut = "lastz";         // last_u <= k z + n (1 - z)
inline constexpr const char *kFirstCut = "firstz";       // first_v >= (k+1) z
inline constexpr const char *kOrder = "order";           // first_u <= last_u
inline constexpr const char *kLatency = "latency";
inline constexpr const char *kPeriod = "period";
} // namespace family

struct IlpInstance {
    int n = 0;
    int p = 0;
    BicriteriaQuery query;
    std::vector<LpVariable> x_vars;
    std::vector<LpVariable> z_vars;
    std::vector<LpVariable> y_vars;
    std::vector<LpVariable> first_last;
    LpVariable topt;
    std::vector<LpRow> constraints;

    std::size_t rows_in(const std::string &family_name) const;
    const LpVariable *find(const std::string &name) const;
};

/// Processor label used in variable names: "in", "out" or "p<u>".
std::string processor_label(int u, int p);

IlpInstance build_ilp(const PipelineSpec &spec, const Platform &platform, const BicriteriaQuery &query);

/// CPLEX LP text (Minimize / Subject To / Bounds / Binaries / Generals / End).
std::string write_lp(const IlpInstance &ilp);

std::string export_ilp(const PipelineSpec &spec, const Platform &platform, const BicriteriaQuery &query);

/// Recovers the mapping encoded by x_k_u values (1-based stages, values rounded).
/// Throws std::invalid_argument when the assignment is not an interval mapping.
IntervalMapping mapping_from_assignment(int n, int p, const std::vector<std::pair<std::string, double>> &values);

} // namespace pipemap
