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

#include "pipemap/simulator.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <queue>
#include <stdexcept>

namespace pipemap {

const char *to_string(Phase phase) {
    switch (phase) {
    case Phase::Receive:
        return "recv";
    case Phase::Compute:
        return "compute";
    case Phase::Send:
        return "send";
    }
    return "?";
}

namespace {

enum class State { AwaitReceive, Receiving, Computing, AwaitSend, Sending };

enum class EventKind { TransferDone, ComputeDone };

struct Event {
    double time;
    std::uint64_t seq;
    EventKind kind;
    int index; // link or interval
    int item;

    bool operator>(const Event &other) const {
        return time != other.time ? time > other.time : seq > other.seq;
    }
};

/// Event loop over a chain of m stations joined by m + 1 links (source -> ... -> sink).
class ChainSimulation {
  public:
    ChainSimulation(const PipelineSpec &spec, const Platform &platform, const IntervalMapping &mapping,
                    const SimulationOptions &options)
        : mapping_(mapping), options_(options), m_(mapping.m()) {
        const int n = spec.n();
        transfer_.resize(static_cast<std::size_t>(m_) + 1);
        compute_.resize(static_cast<std::size_t>(m_));
        for (int l = 0; l <= m_; ++l) {
            const int from = l == 0 ? Platform::in() : mapping.assignees[l - 1];
            const int to = l == m_ ? platform.out() : mapping.assignees[l];
            const double volume = l == m_ ? spec.data(n) : spec.data(mapping.intervals[l].first - 1);
            transfer_[l] = volume / platform.bandwidth(from, to);
        }
        for (int j = 0; j < m_; ++j) {
            const Interval &iv = mapping.intervals[j];
            compute_[j] = cost::interval_work(spec, iv.first, iv.last) / platform.speed(mapping.assignees[j]);
        }
        state_.assign(static_cast<std::size_t>(m_), State::AwaitReceive);
        holding_.assign(static_cast<std::size_t>(m_), 0);
        report_.busy_time.assign(static_cast<std::size_t>(m_), 0.0);
        report_.item_output_times.reserve(static_cast<std::size_t>(options.items));
    }

    SimulationReport run() {
        try_transfer(0);
        while (!queue_.empty()) {
            const Event event = queue_.top();
            queue_.pop();
            now_ = event.time;
            if (event.kind == EventKind::TransferDone) {
                transfer_done(event.index, event.item);
            } else {
                compute_done(event.index);
            }
        }
        if (static_cast<int>(report_.item_output_times.size()) != options_.items) {
            throw std::logic_error("simulation stalled before every item reached the sink");
        }
        const auto &out = report_.item_output_times;
        report_.measured_first_latency = out.front();
        report_.gap_count = options_.items - options_.warmup;
        report_.measured_period =
            (out[static_cast<std::size_t>(options_.items) - 1] - out[static_cast<std::size_t>(options_.warmup) - 1]) /
            report_.gap_count;
        return std::move(report_);
    }

  private:
    void schedule(double time, EventKind kind, int index, int item) { queue_.push({time, seq_++, kind, index, item}); }

    void log(double start, double end, int station, int item, Phase phase) {
        report_.busy_time[station] += end - start;
        if (options_.record_events) {
            report_.event_log.push_back({start, end, mapping_.assignees[station], item, phase});
        }
    }

    /// Starts the transfer on link l if both of its ends are ready.
    void try_transfer(int l) {
        const bool sender_ready = l == 0 ? (!source_busy_ && source_next_ <= options_.items)
                                         : state_[l - 1] == State::AwaitSend;
        const bool receiver_ready = l == m_ || state_[l] == State::AwaitReceive;
        if (!sender_ready || !receiver_ready) {
            return;
        }
        int item = 0;
        if (l == 0) {
            source_busy_ = true;
            item = source_next_;
        } else {
            state_[l - 1] = State::Sending;
            item = holding_[l - 1];
            log(now_, now_ + transfer_[l], l - 1, item, Phase::Send);
        }
        if (l < m_) {
            state_[l] = State::Receiving;
            holding_[l] = item;
            log(now_, now_ + transfer_[l], l, item, Phase::Receive);
        }
        schedule(now_ + transfer_[l], EventKind::TransferDone, l, item);
    }

    void transfer_done(int l, int item) {
        if (l < m_) {
            state_[l] = State::Computing;
            log(now_, now_ + compute_[l], l, item, Phase::Compute);
            schedule(now_ + compute_[l], EventKind::ComputeDone, l, item);
        } else {
            report_.item_output_times.push_back(now_);
        }
        if (l == 0) {
            source_busy_ = false;
            ++source_next_;
            try_transfer(0);
        } else {
            state_[l - 1] = State::AwaitReceive;
            try_transfer(l - 1);
        }
    }

    void compute_done(int station) {
        state_[station] = State::AwaitSend;
        try_transfer(station + 1);
    }

    const IntervalMapping &mapping_;
    SimulationOptions options_;
    int m_;
    std::vector<double> transfer_;
    std::vector<double> compute_;
    std::vector<State> state_;
    std::vector<int> holding_;
    bool source_busy_ = false;
    int source_next_ = 1;
    double now_ = 0.0;
    std::uint64_t seq_ = 0;
    std::priority_queue<Event, std::vector<Event>, std::greater<>> queue_;
    SimulationReport report_;
};

} // namespace

SimulationReport simulate(const PipelineSpec &spec, const Platform &platform, const IntervalMapping &mapping,
                          const SimulationOptions &options) {
    spec.check();
    platform.check();
    if (auto verdict = validate(spec, platform, mapping); !verdict) {
        throw std::invalid_argument("invalid mapping: " + *verdict.violation);
    }
    if (options.warmup < 1 || options.items <= options.warmup) {
        throw std::invalid_argument("simulation needs items > warmup >= 1");
    }
    return ChainSimulation(spec, platform, mapping, options).run();
}

Deviation compare_with_analytic(const PipelineSpec &spec, const Platform &platform, const IntervalMapping &mapping,
                                int items, int warmup) {
    const MappingMetrics analytic = evaluate(spec, platform, mapping);
    const SimulationReport report = simulate(spec, platform, mapping, {items, warmup, false});
    Deviation d;
    d.analytic_period = analytic.period;
    d.analytic_latency = analytic.latency;
    d.measured_period = report.measured_period;
    d.measured_latency = report.measured_first_latency;
    d.period = std::abs(report.measured_period - analytic.period) / analytic.period;
    d.latency = std::abs(report.measured_first_latency - analytic.latency) / analytic.latency;
    return d;
}

void write_event_csv(std::ostream &out, const std::vector<SimEvent> &events) {
    auto num = [](double v) {
        char buf[64];
        auto r = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, r.ptr);
    };
    out << "time_start,time_end,processor,item,phase\n";
    for (const SimEvent &e : events) {
        out << num(e.start) << ',' << num(e.end) << ',' << e.processor << ',' << e.item << ',' << to_string(e.phase)
            << '\n';
    }
}

} // namespace pipemap
