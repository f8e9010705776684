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

#include <optional>
#include <string>
#include <vector>

namespace pipemap {

/// Relative tolerance used for metric equality and threshold slack.
inline constexpr double kCompareTolerance = 1e-9;

/// True when `value` satisfies the bound `threshold` (exact <= plus relative slack).
inline bool within_threshold(double value, double threshold) {
    return value <= threshold + kCompareTolerance * threshold;
}

/// True when a and b agree within the relative comparison tolerance.
bool nearly_equal(double a, double b, double rel = kCompareTolerance);

/**
 * @brief A linear chain of n stages.
 *
 * Stages are numbered 1..n. Stage k performs work(k) operations on each
 * item, receives data(k-1) from its predecessor and emits data(k).
 * data(0) comes from the outside world and data(n) is returned to it.
 */
struct PipelineSpec {
    std::vector<std::string> stage_names;
    std::vector<double> w;     // n compute costs, w[k-1] is stage k
    std::vector<double> delta; // n+1 data volumes, delta[k] leaves stage k

    int n() const { return static_cast<int>(w.size()); }
    double work(int k) const { return w[k - 1]; }
    double data(int k) const { return delta[k]; }
    const std::string &name(int k) const { return stage_names[k - 1]; }

    /// Throws std::invalid_argument naming the first broken invariant.
    void check() const;
};

/**
 * @brief Fully connected heterogeneous platform.
 *
 * Processors are numbered 1..p. The bandwidth matrix is indexed over
 * {in, 1..p, out} with in = 0 and out = p + 1, row-major, so processor
 * ids index it directly. Diagonal entries are ignored.
 */
struct Platform {
    std::vector<double> s; // p speeds, s[u-1] is processor u
    std::vector<double> b; // (p+2)^2 bandwidths

    int p() const { return static_cast<int>(s.size()); }
    static constexpr int in() { return 0; }
    int out() const { return p() + 1; }
    double speed(int u) const { return s[u - 1]; }
    double bandwidth(int from, int to) const { return b[static_cast<std::size_t>(from) * (p() + 2) + to]; }
    double &bandwidth(int from, int to) { return b[static_cast<std::size_t>(from) * (p() + 2) + to]; }

    /// Builds a platform where every link has the same bandwidth.
    static Platform uniform(std::vector<double> speeds, double bw);

    void check() const;
};

struct Interval {
    int first = 1;
    int last = 1;

    int length() const { return last - first + 1; }
    bool operator==(const Interval &) const = default;
};

/// Ordered partition of the stages, interval j hosted by assignees[j].
struct IntervalMapping {
    std::vector<Interval> intervals;
    std::vector<int> assignees;

    int m() const { return static_cast<int>(intervals.size()); }
    bool operator==(const IntervalMapping &) const = default;

    /// All stages on a single processor.
    static IntervalMapping single(int n, int processor);
};

struct MappingMetrics {
    double period = 0.0;
    double latency = 0.0;
    std::vector<double> per_processor_period; // one cycle time per interval, chain order
};

/// Per-interval cycle times and their maximum.
struct PeriodBreakdown {
    std::vector<double> cycles;
    double period = 0.0;
};

struct Validity {
    std::optional<std::string> violation;

    bool ok() const { return !violation.has_value(); }
    explicit operator bool() const { return ok(); }
};

Validity validate(const PipelineSpec &spec, const Platform &platform, const IntervalMapping &mapping);

// The evaluators throw std::invalid_argument on an invalid mapping.
PeriodBreakdown evaluate_period(const PipelineSpec &spec, const Platform &platform, const IntervalMapping &mapping);
double evaluate_latency(const PipelineSpec &spec, const Platform &platform, const IntervalMapping &mapping);
MappingMetrics evaluate(const PipelineSpec &spec, const Platform &platform, const IntervalMapping &mapping);

/// Same as evaluate() without the validity check, for hot loops over mappings known to be valid.
MappingMetrics evaluate_unchecked(const PipelineSpec &spec, const Platform &platform, const IntervalMapping &mapping);

/**
 * Cost terms shared by every evaluator so that the exhaustive solver, the
 * heuristics and the simulator produce bit-identical doubles for the same
 * mapping.
 */
namespace cost {

/// Sum of w over [first, last], accumulated in stage order.
double interval_work(const PipelineSpec &spec, int first, int last);

/// Receive + compute part of an interval's cycle; also its latency contribution.
inline double head(double in_data, double in_bw, double work, double speed) {
    return in_data / in_bw + work / speed;
}

inline double cycle(double head_time, double out_data, double out_bw) { return head_time + out_data / out_bw; }

} // namespace cost

/// "1-2:1,3:2" style text form of a mapping (stage ranges and 1-based processors).
std::string signature(const IntervalMapping &mapping);

/// Parses the signature() form. Throws std::invalid_argument on malformed text.
IntervalMapping parse_signature(const std::string &text);

} // namespace pipemap
