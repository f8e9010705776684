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

#include "pipemap/ilp.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace pipemap {

namespace {

std::string number(double value) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, result.ptr);
}

std::string name_x(int k, int u, int p) { return "x_" + std::to_string(k) + "_" + processor_label(u, p); }
std::string name_y(int k, int u, int p) { return "y_" + std::to_string(k) + "_" + processor_label(u, p); }
std::string name_z(int k, int u, int v, int p) {
    return "z_" + std::to_string(k) + "_" + processor_label(u, p) + "_" + processor_label(v, p);
}
std::string name_first(int u, int p) { return "first_" + processor_label(u, p); }
std::string name_last(int u, int p) { return "last_" + processor_label(u, p); }

LpVariable binary(std::string name, std::optional<double> fixed = std::nullopt) {
    return LpVariable{std::move(name), VarKind::Binary, 0.0, 1.0, fixed};
}

class Builder {
  public:
    Builder(const PipelineSpec &spec, const Platform &platform, const BicriteriaQuery &query)
        : spec_(spec), platform_(platform), n_(spec.n()), p_(platform.p()), in_(Platform::in()), out_(platform.out()) {
        ilp_.n = n_;
        ilp_.p = p_;
        ilp_.query = query;
    }

    IlpInstance build() {
        declare_variables();
        assignment_rows();
        link_rows();
        implication_rows();
        interval_rows();
        latency_row();
        period_rows();
        return std::move(ilp_);
    }

  private:
    // in, p1..pP, out
    std::vector<int> universe() const {
        std::vector<int> all;
        for (int u = in_; u <= out_; ++u) {
            all.push_back(u);
        }
        return all;
    }

    void declare_variables() {
        for (int k = 0; k <= n_ + 1; ++k) {
            for (int u : universe()) {
                std::optional<double> fixed;
                if (k == 0 && u == in_) {
                    fixed = 1.0;
                } else if (k == n_ + 1 && u == out_) {
                    fixed = 1.0;
                } else if (k >= 1 && k <= n_ && (u == in_ || u == out_)) {
                    fixed = 0.0;
                }
                add(ilp_.x_vars, binary(name_x(k, u, p_), fixed));
            }
        }
        for (int k = 0; k <= n_; ++k) {
            for (int u : universe()) {
                for (int v : universe()) {
                    if (u == v) {
                        continue;
                    }
                    std::optional<double> fixed;
                    if ((u == in_ && k != 0) || (v == out_ && k != n_)) {
                        fixed = 0.0;
                    } else if (u == out_ || v == in_) {
                        // implied: stage k <= n never runs on out, stage k+1 >= 1 never on in
                        fixed = 0.0;
                    }
                    add(ilp_.z_vars, binary(name_z(k, u, v, p_), fixed));
                }
            }
        }
        for (int k = 0; k <= n_; ++k) {
            for (int u : universe()) {
                std::optional<double> fixed;
                if (u == in_ || u == out_ || k == 0 || k == n_) {
                    fixed = 0.0;
                }
                add(ilp_.y_vars, binary(name_y(k, u, p_), fixed));
            }
        }
        for (int u = 1; u <= p_; ++u) {
            add(ilp_.first_last, LpVariable{name_first(u, p_), VarKind::Integer, 1.0, static_cast<double>(n_), {}});
            add(ilp_.first_last, LpVariable{name_last(u, p_), VarKind::Integer, 1.0, static_cast<double>(n_), {}});
        }
        ilp_.topt = LpVariable{"Topt", VarKind::Continuous, 0.0, std::numeric_limits<double>::infinity(), {}};
        fixed_zero_.clear();
        for (const auto *group : {&ilp_.x_vars, &ilp_.z_vars, &ilp_.y_vars}) {
            for (const LpVariable &var : *group) {
                if (var.fixed && *var.fixed == 0.0) {
                    fixed_zero_[var.name] = true;
                }
            }
        }
    }

    void add(std::vector<LpVariable> &group, LpVariable var) { group.push_back(std::move(var)); }

    bool is_zero(const std::string &var) const { return fixed_zero_.contains(var); }

    void row(std::string name, const char *fam, std::vector<LpTerm> terms, Sense sense, double rhs) {
        ilp_.constraints.push_back(LpRow{std::move(name), fam, std::move(terms), sense, rhs});
    }

    void assignment_rows() {
        for (int k = 0; k <= n_ + 1; ++k) {
            std::vector<LpTerm> terms;
            for (int u : universe()) {
                terms.push_back({1.0, name_x(k, u, p_)});
            }
            row(std::string(family::kAssign) + "_" + std::to_string(k), family::kAssign, std::move(terms), Sense::Equal,
                1.0);
        }
    }

    void link_rows() {
        for (int k = 0; k <= n_; ++k) {
            std::vector<LpTerm> terms;
            for (int u : universe()) {
                for (int v : universe()) {
                    if (u != v) {
                        terms.push_back({1.0, name_z(k, u, v, p_)});
                    }
                }
            }
            for (int u : universe()) {
                terms.push_back({1.0, name_y(k, u, p_)});
            }
            row(std::string(family::kLink) + "_" + std::to_string(k), family::kLink, std::move(terms), Sense::Equal, 1.0);
        }
    }

    void implication_rows() {
        for (int k = 0; k <= n_; ++k) {
            for (int u : universe()) {
                for (int v : universe()) {
                    if (u == v) {
                        continue;
                    }
                    row(std::string(family::kLinkUse) + "_" + std::to_string(k) + "_" + processor_label(u, p_) + "_" +
                            processor_label(v, p_),
                        family::kLinkUse,
                        {{1.0, name_x(k, u, p_)}, {1.0, name_x(k + 1, v, p_)}, {-1.0, name_z(k, u, v, p_)}},
                        Sense::LessEqual, 1.0);
                }
            }
        }
        for (int k = 0; k <= n_; ++k) {
            for (int u : universe()) {
                row(std::string(family::kCollapse) + "_" + std::to_string(k) + "_" + processor_label(u, p_),
                    family::kCollapse, {{1.0, name_x(k, u, p_)}, {1.0, name_x(k + 1, u, p_)}, {-1.0, name_y(k, u, p_)}},
                    Sense::LessEqual, 1.0);
            }
        }
    }

    void interval_rows() {
        const double n = n_;
        for (int k = 1; k <= n_; ++k) {
            for (int u = 1; u <= p_; ++u) {
                const std::string suffix = "_" + std::to_string(k) + "_" + processor_label(u, p_);
                // first_u <= k x + n (1 - x)  <=>  first_u + (n - k) x <= n
                row(family::kFirstBound + suffix, family::kFirstBound,
                    {{1.0, name_first(u, p_)}, {n - k, name_x(k, u, p_)}}, Sense::LessEqual, n);
                // last_u >= k x
                row(family::kLastBound + suffix, family::kLastBound, {{1.0, name_last(u, p_)}, {-double(k), name_x(k, u, p_)}},
                    Sense::GreaterEqual, 0.0);
            }
        }
        for (int k = 1; k <= n_ - 1; ++k) {
            for (int u = 1; u <= p_; ++u) {
                for (int v = 1; v <= p_; ++v) {
                    if (u == v) {
                        continue;
                    }
                    const std::string suffix =
                        "_" + std::to_string(k) + "_" + processor_label(u, p_) + "_" + processor_label(v, p_);
                    // last_u <= k z + n (1 - z)  <=>  last_u + (n - k) z <= n
                    row(family::kLastCut + suffix, family::kLastCut,
                        {{1.0, name_last(u, p_)}, {n - k, name_z(k, u, v, p_)}}, Sense::LessEqual, n);
                    // first_v >= (k + 1) z
                    row(family::kFirstCut + suffix, family::kFirstCut,
                        {{1.0, name_first(v, p_)}, {-double(k + 1), name_z(k, u, v, p_)}}, Sense::GreaterEqual, 0.0);
                }
            }
        }
        for (int u = 1; u <= p_; ++u) {
            row(std::string(family::kOrder) + "_" + processor_label(u, p_), family::kOrder,
                {{1.0, name_first(u, p_)}, {-1.0, name_last(u, p_)}}, Sense::LessEqual, 0.0);
        }
    }

    void push(std::vector<LpTerm> &terms, double coef, const std::string &var) const {
        if (!is_zero(var) && coef != 0.0) {
            terms.push_back({coef, var});
        }
    }

    /// Receive and compute terms of processor u, summed over stages.
    void head_terms(std::vector<LpTerm> &terms, int u) const {
        for (int k = 1; k <= n_; ++k) {
            for (int t : universe()) {
                if (t == u || is_zero(name_z(k - 1, t, u, p_))) {
                    continue;
                }
                push(terms, spec_.data(k - 1) / platform_.bandwidth(t, u), name_z(k - 1, t, u, p_));
            }
            push(terms, spec_.work(k) / platform_.speed(u), name_x(k, u, p_));
        }
    }

    void bounded_row(std::string name, const char *fam, std::vector<LpTerm> terms, bool optimized, double bound) {
        if (optimized) {
            terms.push_back({-1.0, ilp_.topt.name});
            row(std::move(name), fam, std::move(terms), Sense::LessEqual, 0.0);
        } else {
            row(std::move(name), fam, std::move(terms), Sense::LessEqual, bound);
        }
    }

    void latency_row() {
        std::vector<LpTerm> terms;
        for (int u = 1; u <= p_; ++u) {
            head_terms(terms, u);
        }
        for (int u = in_; u <= p_; ++u) {
            const std::string var = name_z(n_, u, out_, p_);
            if (!is_zero(var)) {
                push(terms, spec_.data(n_) / platform_.bandwidth(u, out_), var);
            }
        }
        const bool optimized = ilp_.query.objective == Objective::MinimizeLatency;
        bounded_row(family::kLatency, family::kLatency, std::move(terms), optimized, ilp_.query.threshold);
    }

    void period_rows() {
        const bool optimized = ilp_.query.objective == Objective::MinimizePeriod;
        for (int u = 1; u <= p_; ++u) {
            std::vector<LpTerm> terms;
            head_terms(terms, u);
            for (int k = 1; k <= n_; ++k) {
                for (int v : universe()) {
                    if (v == u || is_zero(name_z(k, u, v, p_))) {
                        continue;
                    }
                    push(terms, spec_.data(k) / platform_.bandwidth(u, v), name_z(k, u, v, p_));
                }
            }
            bounded_row(std::string(family::kPeriod) + "_" + processor_label(u, p_), family::kPeriod, std::move(terms),
                        optimized, ilp_.query.threshold);
        }
    }

    const PipelineSpec &spec_;
    const Platform &platform_;
    int n_;
    int p_;
    int in_;
    int out_;
    IlpInstance ilp_;
    std::unordered_map<std::string, bool> fixed_zero_;
};

void write_terms(std::ostream &out, const std::vector<LpTerm> &terms) {
    int on_line = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const LpTerm &term = terms[i];
        if (on_line == 6) {
            out << "\n   ";
            on_line = 0;
        }
        const bool negative = term.coef < 0.0;
        const double magnitude = negative ? -term.coef : term.coef;
        if (i == 0) {
            out << (negative ? "- " : "");
        } else {
            out << (negative ? " - " : " + ");
        }
        if (magnitude != 1.0) {
            out << number(magnitude) << ' ';
        }
        out << term.var;
        ++on_line;
    }
}

const char *sense_text(Sense sense) {
    switch (sense) {
    case Sense::LessEqual:
        return "<=";
    case Sense::GreaterEqual:
        return ">=";
    case Sense::Equal:
        return "=";
    }
    return "=";
}

void write_name_list(std::ostream &out, const std::vector<std::string> &names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        out << (i % 8 == 0 ? (i == 0 ? " " : "\n ") : " ") << names[i];
    }
    out << '\n';
}

} // namespace

std::string processor_label(int u, int p) {
    if (u == Platform::in()) {
        return "in";
    }
    if (u == p + 1) {
        return "out";
    }
    return "p" + std::to_string(u);
}

std::size_t IlpInstance::rows_in(const std::string &family_name) const {
    return static_cast<std::size_t>(
        std::count_if(constraints.begin(), constraints.end(), [&](const LpRow &row) { return row.family == family_name; }));
}

const LpVariable *IlpInstance::find(const std::string &name) const {
    for (const auto *group : {&x_vars, &z_vars, &y_vars, &first_last}) {
        for (const LpVariable &var : *group) {
            if (var.name == name) {
                return &var;
            }
        }
    }
    return name == topt.name ? &topt : nullptr;
}

IlpInstance build_ilp(const PipelineSpec &spec, const Platform &platform, const BicriteriaQuery &query) {
    spec.check();
    platform.check();
    query.check();
    return Builder(spec, platform, query).build();
}

std::string write_lp(const IlpInstance &ilp) {
    std::ostringstream out;
    out << "\\ Interval mapping of " << ilp.n << " stages onto " << ilp.p << " processors\n";
    out << "\\ Objective: " << to_string(ilp.query.objective) << ", "
        << (ilp.query.objective == Objective::MinimizeLatency ? "period" : "latency")
        << " bound = " << number(ilp.query.threshold) << "\n";
    out << "Minimize\n obj: " << ilp.topt.name << "\n";
    out << "Subject To\n";
    for (const LpRow &row : ilp.constraints) {
        out << ' ' << row.name << ": ";
        write_terms(out, row.terms);
        out << ' ' << sense_text(row.sense) << ' ' << number(row.rhs) << '\n';
    }

    out << "Bounds\n";
    std::vector<std::string> binaries;
    std::vector<std::string> generals;
    for (const auto *group : {&ilp.x_vars, &ilp.z_vars, &ilp.y_vars}) {
        for (const LpVariable &var : *group) {
            binaries.push_back(var.name);
            if (var.fixed) {
                out << ' ' << var.name << " = " << number(*var.fixed) << '\n';
            }
        }
    }
    for (const LpVariable &var : ilp.first_last) {
        out << ' ' << number(var.lower) << " <= " << var.name << " <= " << number(var.upper) << '\n';
        generals.push_back(var.name);
    }
    out << ' ' << ilp.topt.name << " >= 0\n";

    out << "Binaries\n";
    write_name_list(out, binaries);
    out << "Generals\n";
    write_name_list(out, generals);
    out << "End\n";
    return out.str();
}

std::string export_ilp(const PipelineSpec &spec, const Platform &platform, const BicriteriaQuery &query) {
    return write_lp(build_ilp(spec, platform, query));
}

IntervalMapping mapping_from_assignment(int n, int p, const std::vector<std::pair<std::string, double>> &values) {
    std::vector<int> host(static_cast<std::size_t>(n) + 1, 0);
    for (const auto &[name, value] : values) {
        if (value < 0.5) {
            continue;
        }
        for (int k = 1; k <= n; ++k) {
            for (int u = 1; u <= p; ++u) {
                if (name == name_x(k, u, p)) {
                    if (host[k] != 0) {
                        throw std::invalid_argument("stage " + std::to_string(k) + " assigned twice");
                    }
                    host[k] = u;
                }
            }
        }
    }
    IntervalMapping mapping;
    for (int k = 1; k <= n; ++k) {
        if (host[k] == 0) {
            throw std::invalid_argument("stage " + std::to_string(k) + " unassigned");
        }
        if (k > 1 && host[k] == host[k - 1]) {
            mapping.intervals.back().last = k;
            continue;
        }
        if (std::find(mapping.assignees.begin(), mapping.assignees.end(), host[k]) != mapping.assignees.end()) {
            throw std::invalid_argument("processor P" + std::to_string(host[k]) + " hosts two intervals");
        }
        mapping.intervals.push_back({k, k});
        mapping.assignees.push_back(host[k]);
    }
    return mapping;
}

} // namespace pipemap
