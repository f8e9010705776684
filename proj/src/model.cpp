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

#include "pipemap/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pipemap {

bool nearly_equal(double a, double b, double rel) {
    if (a == b) {
        return true;
    }
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

void PipelineSpec::check() const {
    if (w.empty()) {
        throw std::invalid_argument("pipeline needs at least one stage");
    }
    if (delta.size() != w.size() + 1) {
        throw std::invalid_argument("pipeline needs n+1 data volumes, got " + std::to_string(delta.size()) +
                                    " for n = " + std::to_string(w.size()));
    }
    if (!stage_names.empty() && stage_names.size() != w.size()) {
        throw std::invalid_argument("pipeline needs one name per stage");
    }
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (!(w[k] > 0.0) || !std::isfinite(w[k])) {
            throw std::invalid_argument("stage " + std::to_string(k + 1) + " has non-positive compute cost");
        }
    }
    for (std::size_t k = 0; k < delta.size(); ++k) {
        if (!(delta[k] >= 0.0) || !std::isfinite(delta[k])) {
            throw std::invalid_argument("data volume delta_" + std::to_string(k) + " is negative");
        }
    }
}

Platform Platform::uniform(std::vector<double> speeds, double bw) {
    Platform platform;
    platform.s = std::move(speeds);
    const std::size_t side = platform.s.size() + 2;
    platform.b.assign(side * side, bw);
    for (std::size_t i = 0; i < side; ++i) {
        platform.b[i * side + i] = 0.0;
    }
    return platform;
}

void Platform::check() const {
    if (s.empty()) {
        throw std::invalid_argument("platform needs at least one processor");
    }
    const std::size_t side = s.size() + 2;
    if (b.size() != side * side) {
        throw std::invalid_argument("bandwidth matrix must be " + std::to_string(side) + "x" + std::to_string(side));
    }
    for (std::size_t u = 0; u < s.size(); ++u) {
        if (!(s[u] > 0.0) || !std::isfinite(s[u])) {
            throw std::invalid_argument("processor P" + std::to_string(u + 1) + " has non-positive speed");
        }
    }
    for (std::size_t from = 0; from < side; ++from) {
        for (std::size_t to = 0; to < side; ++to) {
            if (from == to) {
                continue;
            }
            const double value = b[from * side + to];
            if (!(value > 0.0) || !std::isfinite(value)) {
                throw std::invalid_argument("bandwidth b[" + std::to_string(from) + "][" + std::to_string(to) +
                                            "] must be positive");
            }
        }
    }
}

IntervalMapping IntervalMapping::single(int n, int processor) {
    return IntervalMapping{{Interval{1, n}}, {processor}};
}

Validity validate(const PipelineSpec &spec, const Platform &platform, const IntervalMapping &mapping) {
    auto fail = [](std::string message) { return Validity{std::move(message)}; };
    const int n = spec.n();
    const int p = platform.p();
    const int m = mapping.m();

    if (m == 0) {
        return fail("mapping has no intervals");
    }
    if (static_cast<int>(mapping.assignees.size()) != m) {
        return fail("mapping has " + std::to_string(m) + " intervals but " +
                    std::to_string(mapping.assignees.size()) + " assignees");
    }
    if (m > p) {
        return fail("too many intervals: m = " + std::to_string(m) + " > p = " + std::to_string(p));
    }
    std::vector<bool> taken(static_cast<std::size_t>(p) + 1, false);
    for (int j = 0; j < m; ++j) {
        const Interval &iv = mapping.intervals[j];
        const std::string idx = std::to_string(j + 1);
        if (iv.first < 1 || iv.first > n || iv.last < 1 || iv.last > n) {
            return fail("stage index out of range in interval " + idx + ": [" + std::to_string(iv.first) + ".." +
                        std::to_string(iv.last) + "] not within [1.." + std::to_string(n) + "]");
        }
        if (iv.first > iv.last) {
            return fail("empty interval: d_" + idx + " > e_" + idx);
        }
        if (j == 0 && iv.first != 1) {
            return fail("first interval must start at stage 1: d_1 = " + std::to_string(iv.first));
        }
        if (j > 0) {
            const int expected = mapping.intervals[j - 1].last + 1;
            if (iv.first > expected) {
                return fail("gap: d_" + idx + " != e_" + std::to_string(j) + " + 1");
            }
            if (iv.first < expected) {
                return fail("overlap: d_" + idx + " != e_" + std::to_string(j) + " + 1");
            }
        }
        const int u = mapping.assignees[j];
        if (u < 1 || u > p) {
            return fail("processor P" + std::to_string(u) + " out of range [1.." + std::to_string(p) + "]");
        }
        if (taken[u]) {
            return fail("processor P" + std::to_string(u) + " assigned twice");
        }
        taken[u] = true;
    }
    if (mapping.intervals.back().last != n) {
        return fail("last interval must end at stage n: e_" + std::to_string(m) + " = " +
                    std::to_string(mapping.intervals.back().last) + ", n = " + std::to_string(n));
    }
    return {};
}

namespace cost {

double interval_work(const PipelineSpec &spec, int first, int last) {
    double total = 0.0;
    for (int k = first; k <= last; ++k) {
        total += spec.work(k);
    }
    return total;
}

} // namespace cost

namespace {

void require_valid(const PipelineSpec &spec, const Platform &platform, const IntervalMapping &mapping) {
    if (auto verdict = validate(spec, platform, mapping); !verdict) {
        throw std::invalid_argument("invalid mapping: " + *verdict.violation);
    }
}

} // namespace

MappingMetrics evaluate_unchecked(const PipelineSpec &spec, const Platform &platform, const IntervalMapping &mapping) {
    const int m = mapping.m();
    MappingMetrics metrics;
    metrics.per_processor_period.resize(static_cast<std::size_t>(m));
    double latency = 0.0;
    double period = 0.0;
    for (int j = 0; j < m; ++j) {
        const Interval &iv = mapping.intervals[j];
        const int u = mapping.assignees[j];
        const int pred = j == 0 ? Platform::in() : mapping.assignees[j - 1];
        const int succ = j == m - 1 ? platform.out() : mapping.assignees[j + 1];
        const double head = cost::head(spec.data(iv.first - 1), platform.bandwidth(pred, u),
                                       cost::interval_work(spec, iv.first, iv.last), platform.speed(u));
        const double cycle = cost::cycle(head, spec.data(iv.last), platform.bandwidth(u, succ));
        metrics.per_processor_period[j] = cycle;
        period = std::max(period, cycle);
        latency += head;
    }
    latency += spec.data(spec.n()) / platform.bandwidth(mapping.assignees.back(), platform.out());
    metrics.period = period;
    metrics.latency = latency;
    return metrics;
}

PeriodBreakdown evaluate_period(const PipelineSpec &spec, const Platform &platform, const IntervalMapping &mapping) {
    require_valid(spec, platform, mapping);
    MappingMetrics metrics = evaluate_unchecked(spec, platform, mapping);
    return PeriodBreakdown{std::move(metrics.per_processor_period), metrics.period};
}

double evaluate_latency(const PipelineSpec &spec, const Platform &platform, const IntervalMapping &mapping) {
    require_valid(spec, platform, mapping);
    return evaluate_unchecked(spec, platform, mapping).latency;
}

MappingMetrics evaluate(const PipelineSpec &spec, const Platform &platform, const IntervalMapping &mapping) {
    require_valid(spec, platform, mapping);
    return evaluate_unchecked(spec, platform, mapping);
}

std::string signature(const IntervalMapping &mapping) {
    std::ostringstream out;
    for (int j = 0; j < mapping.m(); ++j) {
        if (j > 0) {
            out << ',';
        }
        const Interval &iv = mapping.intervals[j];
        out << iv.first;
        if (iv.last != iv.first) {
            out << '-' << iv.last;
        }
        out << ':' << mapping.assignees[j];
    }
    return out.str();
}

IntervalMapping parse_signature(const std::string &text) {
    IntervalMapping mapping;
    std::istringstream in(text);
    std::string item;
    auto bad = [&](const std::string &why) {
        return std::invalid_argument("malformed mapping '" + text + "': " + why);
    };
    auto to_int = [&](const std::string &digits) {
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
            throw bad("expected a positive integer, got '" + digits + "'");
        }
        return std::stoi(digits);
    };
    while (std::getline(in, item, ',')) {
        std::erase_if(item, [](char c) { return c == ' ' || c == '\t'; });
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            throw bad("missing ':' in '" + item + "'");
        }
        std::string range = item.substr(0, colon);
        std::string proc = item.substr(colon + 1);
        if (!proc.empty() && (proc[0] == 'P' || proc[0] == 'p')) {
            proc.erase(0, 1);
        }
        Interval iv;
        if (const auto dash = range.find('-'); dash != std::string::npos) {
            iv.first = to_int(range.substr(0, dash));
            iv.last = to_int(range.substr(dash + 1));
        } else {
            iv.first = iv.last = to_int(range);
        }
        mapping.intervals.push_back(iv);
        mapping.assignees.push_back(to_int(proc));
    }
    if (mapping.intervals.empty()) {
        throw bad("no intervals");
    }
    return mapping;
}

} // namespace pipemap
