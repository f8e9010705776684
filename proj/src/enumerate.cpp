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

#include "pipemap/enumerate.hpp"

#include <algorithm>
#include <stdexcept>

namespace pipemap {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out = 0;
    if (__builtin_mul_overflow(a, b, &out)) {
        throw std::overflow_error("mapping count exceeds 64 bits");
    }
    return out;
}

std::uint64_t binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    std::uint64_t result = 1;
    for (int i = 1; i <= k; ++i) {
        // exact at every step: result * (n - k + i) is divisible by i
        result = checked_mul(result, static_cast<std::uint64_t>(n - k + i)) / static_cast<std::uint64_t>(i);
    }
    return result;
}

/// p! / (p - m)!
std::uint64_t arrangements(int p, int m) {
    if (m < 0 || m > p) {
        return 0;
    }
    std::uint64_t result = 1;
    for (int i = 0; i < m; ++i) {
        result = checked_mul(result, static_cast<std::uint64_t>(p - i));
    }
    return result;
}

std::vector<Interval> intervals_from_cuts(int n, const std::vector<int> &cuts) {
    std::vector<Interval> intervals;
    intervals.reserve(cuts.size() + 1);
    int first = 1;
    for (int cut : cuts) {
        intervals.push_back({first, cut});
        first = cut + 1;
    }
    intervals.push_back({first, n});
    return intervals;
}

} // namespace

std::uint64_t mapping_count(int n, int p, int m) {
    if (m < 1 || m > n || m > p) {
        return 0;
    }
    return checked_mul(binomial(n - 1, m - 1), arrangements(p, m));
}

std::uint64_t mapping_count(int n, int p) {
    std::uint64_t total = 0;
    for (int m = 1; m <= std::min(n, p); ++m) {
        total += mapping_count(n, p, m);
    }
    return total;
}

std::vector<std::vector<Interval>> interval_partitions(int n) {
    std::vector<std::vector<Interval>> out;
    for (int m = 1; m <= n; ++m) {
        const int r = m - 1;
        std::vector<int> cuts(static_cast<std::size_t>(r));
        for (int i = 0; i < r; ++i) {
            cuts[i] = i + 1;
        }
        while (true) {
            out.push_back(intervals_from_cuts(n, cuts));
            int i = r - 1;
            while (i >= 0 && cuts[i] == n - 1 - (r - 1 - i)) {
                --i;
            }
            if (i < 0) {
                break;
            }
            ++cuts[i];
            for (int j = i + 1; j < r; ++j) {
                cuts[j] = cuts[j - 1] + 1;
            }
        }
    }
    return out;
}

IntervalMapping mapping_at(int n, int p, std::uint64_t index) {
    for (int m = 1; m <= std::min(n, p); ++m) {
        const std::uint64_t block = mapping_count(n, p, m);
        if (index >= block) {
            index -= block;
            continue;
        }
        const std::uint64_t perms = arrangements(p, m);
        std::uint64_t cut_rank = index / perms;
        std::uint64_t assign_rank = index % perms;

        // lexicographic unranking of an (m-1)-subset of {1..n-1}
        const int r = m - 1;
        std::vector<int> cuts;
        int x = 1;
        for (int i = 0; i < r; ++i) {
            while (true) {
                const std::uint64_t skip = binomial(n - 1 - x, r - i - 1);
                if (cut_rank < skip) {
                    break;
                }
                cut_rank -= skip;
                ++x;
            }
            cuts.push_back(x);
            ++x;
        }

        std::vector<int> pool(static_cast<std::size_t>(p));
        for (int u = 0; u < p; ++u) {
            pool[u] = u + 1;
        }
        std::vector<int> assignees;
        for (int i = 0; i < m; ++i) {
            const std::uint64_t sub = arrangements(p - i - 1, m - i - 1);
            const auto q = static_cast<std::size_t>(assign_rank / sub);
            assign_rank %= sub;
            assignees.push_back(pool[q]);
            pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(q));
        }
        return IntervalMapping{intervals_from_cuts(n, cuts), std::move(assignees)};
    }
    throw std::out_of_range("canonical index past the last mapping");
}

std::uint64_t canonical_index(int n, int p, const IntervalMapping &mapping) {
    const int m = mapping.m();
    std::uint64_t index = 0;
    for (int k = 1; k < m; ++k) {
        index += mapping_count(n, p, k);
    }
    const int r = m - 1;
    std::uint64_t cut_rank = 0;
    int x = 1;
    for (int i = 0; i < r; ++i) {
        const int cut = mapping.intervals[i].last;
        for (; x < cut; ++x) {
            cut_rank += binomial(n - 1 - x, r - i - 1);
        }
        x = cut + 1;
    }
    std::vector<int> pool(static_cast<std::size_t>(p));
    for (int u = 0; u < p; ++u) {
        pool[u] = u + 1;
    }
    std::uint64_t assign_rank = 0;
    for (int i = 0; i < m; ++i) {
        const auto pos = std::find(pool.begin(), pool.end(), mapping.assignees[i]);
        if (pos == pool.end()) {
            throw std::invalid_argument("mapping is not injective");
        }
        assign_rank += static_cast<std::uint64_t>(pos - pool.begin()) * arrangements(p - i - 1, m - i - 1);
        pool.erase(pos);
    }
    return index + cut_rank * arrangements(p, m) + assign_rank;
}

MappingEnumerator::MappingEnumerator(int n, int p) : n_(n), p_(p), used_(static_cast<std::size_t>(std::max(p, 0)) + 1) {
    done_ = n < 1 || p < 1;
}

bool MappingEnumerator::next() {
    if (done_) {
        return false;
    }
    if (!started_) {
        started_ = true;
        m_ = 1;
        cuts_.clear();
        reset_assignees();
        rebuild_intervals();
        return true;
    }
    ++index_;
    if (advance_assignees()) {
        mapping_.assignees = assignees_;
        return true;
    }
    if (advance_cuts()) {
        reset_assignees();
        rebuild_intervals();
        return true;
    }
    ++m_;
    if (m_ > std::min(n_, p_)) {
        done_ = true;
        return false;
    }
    cuts_.resize(static_cast<std::size_t>(m_ - 1));
    for (int i = 0; i < m_ - 1; ++i) {
        cuts_[i] = i + 1;
    }
    reset_assignees();
    rebuild_intervals();
    return true;
}

bool MappingEnumerator::advance_assignees() {
    for (int i = m_ - 1; i >= 0; --i) {
        used_[assignees_[i]] = false;
        for (int v = assignees_[i] + 1; v <= p_; ++v) {
            if (used_[v]) {
                continue;
            }
            assignees_[i] = v;
            used_[v] = true;
            int next = 1;
            for (int j = i + 1; j < m_; ++j) {
                while (used_[next]) {
                    ++next;
                }
                assignees_[j] = next;
                used_[next] = true;
            }
            return true;
        }
    }
    return false;
}

bool MappingEnumerator::advance_cuts() {
    const int r = m_ - 1;
    int i = r - 1;
    while (i >= 0 && cuts_[i] == n_ - 1 - (r - 1 - i)) {
        --i;
    }
    if (i < 0) {
        return false;
    }
    ++cuts_[i];
    for (int j = i + 1; j < r; ++j) {
        cuts_[j] = cuts_[j - 1] + 1;
    }
    return true;
}

void MappingEnumerator::reset_assignees() {
    std::fill(used_.begin(), used_.end(), false);
    assignees_.resize(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) {
        assignees_[i] = i + 1;
        used_[i + 1] = true;
    }
}

void MappingEnumerator::rebuild_intervals() {
    mapping_.intervals = intervals_from_cuts(n_, cuts_);
    mapping_.assignees = assignees_;
}

} // namespace pipemap
