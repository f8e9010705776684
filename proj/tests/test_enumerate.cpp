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

#include <set>
#include <stdexcept>

#include "doctest.h"
#include "oracle/oracle.hpp"
#include "pipemap/enumerate.hpp"

using namespace pipemap;

TEST_CASE("closed-form counts") {
    CHECK(mapping_count(3, 2) == 6);
    CHECK(mapping_count(1, 5) == 5);
    CHECK(mapping_count(7, 10) == 2077750);
    const std::uint64_t terms[] = {10, 540, 10800, 100800, 453600, 907200, 604800};
    for (int m = 1; m <= 7; ++m) {
        CHECK(mapping_count(7, 10, m) == terms[m - 1]);
    }
    CHECK(mapping_count(3, 2, 3) == 0);
    CHECK(mapping_count(7, 10) == oracle::count(7, 10));
}

TEST_CASE("stream matches the recursive generator for n <= 6, p <= 4") {
    for (int n = 1; n <= 6; ++n) {
        for (int p = 1; p <= 4; ++p) {
            CAPTURE(n);
            CAPTURE(p);
            std::set<std::string> expected;
            for (const IntervalMapping &mapping : oracle::all_mappings(n, p)) {
                expected.insert(signature(mapping));
            }
            std::set<std::string> seen;
            MappingEnumerator stream(n, p);
            std::uint64_t produced = 0;
            while (stream.next()) {
                CHECK(stream.index() == produced);
                seen.insert(signature(stream.current()));
                ++produced;
            }
            CHECK(produced == mapping_count(n, p));
            CHECK(produced == oracle::count(n, p));
            CHECK(seen == expected); // no duplicates, nothing missing
        }
    }
}

TEST_CASE("canonical order: m ascending, then cuts, then assignee tuples") {
    MappingEnumerator stream(3, 2);
    std::vector<std::string> order;
    while (stream.next()) {
        order.push_back(signature(stream.current()));
    }
    CHECK(order == std::vector<std::string>{"1-3:1", "1-3:2", "1:1,2-3:2", "1:2,2-3:1", "1-2:1,3:2", "1-2:2,3:1"});
}

TEST_CASE("ranking and unranking invert each other") {
    for (int n = 1; n <= 5; ++n) {
        for (int p = 1; p <= 4; ++p) {
            MappingEnumerator stream(n, p);
            while (stream.next()) {
                CHECK(mapping_at(n, p, stream.index()) == stream.current());
                CHECK(canonical_index(n, p, stream.current()) == stream.index());
            }
        }
    }
    CHECK_THROWS_AS(mapping_at(3, 2, 6), std::out_of_range);
}

TEST_CASE("partitions in canonical order") {
    const auto parts = interval_partitions(3);
    REQUIRE(parts.size() == 4);
    CHECK(parts[0] == std::vector<Interval>{{1, 3}});
    CHECK(parts[1] == std::vector<Interval>{{1, 1}, {2, 3}});
    CHECK(parts[2] == std::vector<Interval>{{1, 2}, {3, 3}});
    CHECK(parts[3] == std::vector<Interval>{{1, 1}, {2, 2}, {3, 3}});
}
