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
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace pipemap {

/// What a pass of the LP grammar checker saw.
struct LpReport {
    std::vector<std::string> diagnostics; // "line N: message"
    std::string sense;                    // "minimize" or "maximize"
    std::vector<std::string> row_names;
    std::set<std::string> variables;      // every name used anywhere
    std::set<std::string> binaries;
    std::set<std::string> generals;
    std::size_t bound_lines = 0;

    bool ok() const { return diagnostics.empty(); }

    /// Rows whose name is `prefix` or starts with `prefix_`.
    std::size_t rows_with_prefix(const std::string &prefix) const;
};

/**
 * Checks text against the CPLEX LP grammar subset used by common solvers:
 * an objective section, Subject To with named or unnamed linear rows,
 * optional Bounds / Binaries / Generals sections and a closing End.
 * Backslash starts a comment. Expressions may continue across lines.
 */
LpReport check_lp(std::string_view text);

} // namespace pipemap
