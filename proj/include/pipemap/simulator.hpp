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

#include <iosfwd>
#include <string>
#include <vector>

#include "pipemap/model.hpp"

namespace pipemap {

enum class Phase { Receive, Compute, Send };

const char *to_string(Phase phase); // "recv", "compute", "send"

struct SimEvent {
    double start = 0.0;
    double end = 0.0;
    int processor = 0;
    int item = 0; // 1-based
    Phase phase = Phase::Compute;
};

struct SimulationReport {
    std::vector<double> item_output_times; // sink completion time of items 1..K
    double measured_period = 0.0;          // mean output gap after the warmup prefix
    int gap_count = 0;
    double measured_first_latency = 0.0;   // item 1 injected at t = 0
    std::vector<double> busy_time;         // per interval, receive + compute + send time
    std::vector<SimEvent> event_log;       // filled when requested
};

struct SimulationOptions {
    int items = 100;
    int warmup = 10;
    bool record_events = false;
};

/**
 * @brief Streams `items` data items through a mapped pipeline.
 *
 * Each used processor handles items strictly in turn: receive, compute,
 * send. A transfer occupies sender and receiver for its whole duration and
 * starts once the sender has computed the item and the receiver has sent
 * off its previous item. The source is always ready with the next item and
 * the sink always accepts.
 *
 * Throws std::invalid_argument on an invalid mapping or items <= warmup < 1.
 */
SimulationReport simulate(const PipelineSpec &spec, const Platform &platform, const IntervalMapping &mapping,
                          const SimulationOptions &options);

struct Deviation {
    double period = 0.0;  // |measured - analytic| / analytic
    double latency = 0.0;
    double analytic_period = 0.0;
    double analytic_latency = 0.0;
    double measured_period = 0.0;
    double measured_latency = 0.0;
};

Deviation compare_with_analytic(const PipelineSpec &spec, const Platform &platform, const IntervalMapping &mapping,
                                int items, int warmup);

/// time_start,time_end,processor,item,phase
void write_event_csv(std::ostream &out, const std::vector<SimEvent> &events);

} // namespace pipemap
