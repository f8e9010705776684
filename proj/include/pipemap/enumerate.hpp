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
#include <vector>

#include "pipemap/model.hpp"

namespace pipemap {

// Canonical order of interval mappings:
//   1. number of intervals m, ascending;
//   2. cut positions (stage after which an interval ends), lexicographic;
//   3. assignee tuples, lexicographic over injective sequences of 1..p.
// The index of a mapping in this order is its canonical index.

/// Number of mappings with exactly m intervals: C(n-1, m-1) * p!/(p-m)!.
std::uint64_t mapping_count(int n, int p, int m);

/// Number of valid interval mappings of n stages onto p processors.
std::uint64_t mapping_count(int n, int p);

/// Partitions of [1..n] into contiguous intervals, in canonical order.
std::vector<std::vector<Interval>> interval_partitions(int n);

/// Mapping with the given canonical index. Throws std::out_of_range past the end.
IntervalMapping mapping_at(int n, int p, std::uint64_t index);

/// Canonical index of a valid mapping.
std::uint64_t canonical_index(int n, int p, const IntervalMapping &mapping);

/**
 * @brief Streams every interval mapping exactly once, in canonical order.
 *
 * @code
 * MappingEnumerator it(n, p);
 * while (it.next()) { use(it.current()); }
 * @endcode
 */
class MappingEnumerator {
  public:
    MappingEnumerator(int n, int p);

    bool next();
    const IntervalMapping &current() const { return mapping_; }
    std::uint64_t index() const { return index_; }

  private:
    bool advance_assignees();
    bool advance_cuts();
    void reset_assignees();
    void rebuild_intervals();

    int n_;
    int p_;
    int m_ = 0;
    bool started_ = false;
    bool done_ = false;
    std::uint64_t index_ = 0;
    std::vector<int> cuts_;
    std::vector<int> assignees_;
    std::vector<bool> used_;
    IntervalMapping mapping_;
};

} // namespace pipemap
