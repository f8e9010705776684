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

#include "pipemap/lp_syntax.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>

namespace pipemap {

namespace {

enum class Section { None, Objective, Constraints, Bounds, Binaries, Generals, Done };

enum class TokKind { Number, Name, Sign, Compare, Colon, Other };

struct Token {
    TokKind kind;
    std::string text;
    int line;
};

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

bool name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'; }

std::optional<Section> header(const std::string &line) {
    const std::string l = lower(line);
    if (l == "minimize" || l == "minimise" || l == "min" || l == "maximize" || l == "maximise" || l == "max") {
        return Section::Objective;
    }
    if (l == "subject to" || l == "such that" || l == "st" || l == "s.t.") {
        return Section::Constraints;
    }
    if (l == "bounds" || l == "bound") {
        return Section::Bounds;
    }
    if (l == "binaries" || l == "binary" || l == "bin") {
        return Section::Binaries;
    }
    if (l == "generals" || l == "general" || l == "gen") {
        return Section::Generals;
    }
    if (l == "end") {
        return Section::Done;
    }
    return std::nullopt;
}

class Checker {
  public:
    explicit Checker(std::string_view text) : text_(text) {}

    LpReport run() {
        std::size_t pos = 0;
        int line_no = 0;
        Section section = Section::None;
        bool seen_objective = false;
        bool seen_constraints = false;
        while (pos <= text_.size()) {
            const std::size_t eol = std::min(text_.find('\n', pos), text_.size());
            std::string line(text_.substr(pos, eol - pos));
            pos = eol + 1;
            ++line_no;
            if (const auto cut = line.find('\\'); cut != std::string::npos) {
                line.erase(cut);
            }
            const auto b = line.find_first_not_of(" \t\r");
            if (b == std::string::npos) {
                if (eol == text_.size()) {
                    break;
                }
                continue;
            }
            line = line.substr(b, line.find_last_not_of(" \t\r") - b + 1);

            if (auto next = header(line)) {
                flush(section, line_no);
                if (section == Section::Done) {
                    diag(line_no, "content after End");
                }
                if (*next == Section::Objective) {
                    if (seen_objective) {
                        diag(line_no, "second objective section");
                    }
                    seen_objective = true;
                    report_.sense = lower(line).starts_with("max") ? "maximize" : "minimize";
                } else if (*next == Section::Constraints) {
                    if (!seen_objective) {
                        diag(line_no, "Subject To before the objective section");
                    }
                    seen_constraints = true;
                } else if (*next != Section::Done && !seen_constraints) {
                    diag(line_no, "section before Subject To");
                }
                section = *next;
                if (eol == text_.size()) {
                    break;
                }
                continue;
            }
            switch (section) {
            case Section::None:
                diag(line_no, "text before the objective section");
                break;
            case Section::Done:
                diag(line_no, "content after End");
                break;
            case Section::Objective:
            case Section::Constraints:
                tokenize(line, line_no, pending_);
                if (section == Section::Constraints) {
                    try_close_row(line_no);
                }
                break;
            case Section::Bounds:
                bound_line(line, line_no);
                break;
            case Section::Binaries:
            case Section::Generals:
                declare_line(line, line_no, section == Section::Binaries ? report_.binaries : report_.generals);
                break;
            }
            if (eol == text_.size()) {
                break;
            }
        }
        flush(section, line_no);
        if (!seen_objective) {
            diag(line_no, "missing objective section");
        }
        if (!seen_constraints) {
            diag(line_no, "missing Subject To section");
        }
        if (section != Section::Done) {
            diag(line_no, "missing End");
        }
        for (const auto &name : report_.binaries) {
            if (report_.generals.contains(name)) {
                report_.diagnostics.push_back("variable " + name + " declared both binary and general");
            }
        }
        return std::move(report_);
    }

  private:
    void diag(int line, const std::string &message) {
        report_.diagnostics.push_back("line " + std::to_string(line) + ": " + message);
    }

    void tokenize(const std::string &line, int line_no, std::vector<Token> &out) {
        std::size_t i = 0;
        while (i < line.size()) {
            const char c = line[i];
            if (c == ' ' || c == '\t') {
                ++i;
            } else if (c == '+' || c == '-') {
                out.push_back({TokKind::Sign, std::string(1, c), line_no});
                ++i;
            } else if (c == '<' || c == '>' || c == '=') {
                std::string op(1, c);
                if (i + 1 < line.size() && (line[i + 1] == '=' || line[i + 1] == '<' || line[i + 1] == '>')) {
                    op += line[i + 1];
                }
                i += op.size();
                out.push_back({TokKind::Compare, op, line_no});
            } else if (c == ':') {
                out.push_back({TokKind::Colon, ":", line_no});
                ++i;
            } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                std::size_t j = i;
                while (j < line.size() && (std::isdigit(static_cast<unsigned char>(line[j])) || line[j] == '.')) {
                    ++j;
                }
                if (j < line.size() && (line[j] == 'e' || line[j] == 'E')) {
                    std::size_t k = j + 1;
                    if (k < line.size() && (line[k] == '+' || line[k] == '-')) {
                        ++k;
                    }
                    if (k < line.size() && std::isdigit(static_cast<unsigned char>(line[k]))) {
                        j = k;
                        while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) {
                            ++j;
                        }
                    }
                }
                std::string num = line.substr(i, j - i);
                double value = 0.0;
                const auto parsed = std::from_chars(num.data(), num.data() + num.size(), value);
                if (parsed.ec != std::errc() || parsed.ptr != num.data() + num.size()) {
                    diag(line_no, "malformed number '" + num + "'");
                }
                out.push_back({TokKind::Number, num, line_no});
                i = j;
            } else if (name_start(c)) {
                std::size_t j = i;
                while (j < line.size() && name_char(line[j])) {
                    ++j;
                }
                out.push_back({TokKind::Name, line.substr(i, j - i), line_no});
                i = j;
            } else {
                out.push_back({TokKind::Other, std::string(1, c), line_no});
                ++i;
            }
        }
    }

    /// Rows end at "<sense> <number>"; a row may span lines.
    void try_close_row(int line_no) {
        for (std::size_t i = 0; i < pending_.size(); ++i) {
            if (pending_[i].kind != TokKind::Compare) {
                continue;
            }
            std::size_t j = i + 1;
            if (j < pending_.size() && pending_[j].kind == TokKind::Sign) {
                ++j;
            }
            if (j < pending_.size() && pending_[j].kind == TokKind::Number) {
                std::vector<Token> row(pending_.begin(), pending_.begin() + static_cast<std::ptrdiff_t>(j + 1));
                pending_.erase(pending_.begin(), pending_.begin() + static_cast<std::ptrdiff_t>(j + 1));
                constraint(row);
                i = static_cast<std::size_t>(-1);
                continue;
            }
            if (j >= pending_.size()) {
                return; // right-hand side may be on the next line
            }
            diag(line_no, "right-hand side must be a constant");
            pending_.clear();
            return;
        }
    }

    /// Parses "[name:] expr"; returns the index after the expression.
    std::size_t expression(const std::vector<Token> &toks, std::size_t i, std::size_t end, bool allow_empty) {
        int terms = 0;
        bool expect_term = true;
        const Token *dangling = nullptr;
        while (i < end) {
            const Token &t = toks[i];
            if (t.kind == TokKind::Sign) {
                ++i;
                expect_term = true;
                dangling = &t;
                continue;
            }
            dangling = nullptr;
            if (!expect_term && terms > 0) {
                diag(t.line, "missing operator before '" + t.text + "'");
                return end;
            }
            if (t.kind == TokKind::Number) {
                if (i + 1 < end && toks[i + 1].kind == TokKind::Name) {
                    report_.variables.insert(toks[i + 1].text);
                    i += 2;
                } else {
                    diag(t.line, "constant term '" + t.text + "' in a linear expression");
                    return end;
                }
            } else if (t.kind == TokKind::Name) {
                report_.variables.insert(t.text);
                ++i;
            } else {
                diag(t.line, "unexpected '" + t.text + "'");
                return end;
            }
            ++terms;
            expect_term = false;
        }
        if (dangling != nullptr) {
            diag(dangling->line, "sign '" + dangling->text + "' without a term");
        } else if (terms == 0 && !allow_empty) {
            diag(toks.empty() ? 0 : toks.front().line, "empty expression");
        }
        return i;
    }

    std::size_t label(const std::vector<Token> &toks, std::string &name) {
        if (toks.size() >= 2 && toks[0].kind == TokKind::Name && toks[1].kind == TokKind::Colon) {
            name = toks[0].text;
            return 2;
        }
        return 0;
    }

    void constraint(const std::vector<Token> &toks) {
        std::string name;
        const std::size_t start = label(toks, name);
        std::size_t cmp = start;
        while (cmp < toks.size() && toks[cmp].kind != TokKind::Compare) {
            ++cmp;
        }
        expression(toks, start, cmp, false);
        const std::string &op = toks[cmp].text;
        if (op != "<=" && op != ">=" && op != "=" && op != "<" && op != ">" && op != "=<" && op != "=>") {
            diag(toks[cmp].line, "unknown comparison '" + op + "'");
        }
        if (name.empty()) {
            name = "R" + std::to_string(report_.row_names.size() + 1);
        }
        if (!row_set_.insert(name).second) {
            diag(toks[cmp].line, "duplicate row name " + name);
        }
        report_.row_names.push_back(name);
    }

    void flush(Section section, int line_no) {
        if (pending_.empty()) {
            return;
        }
        if (section == Section::Objective) {
            std::string name;
            const std::size_t start = label(pending_, name);
            expression(pending_, start, pending_.size(), true);
        } else {
            diag(line_no, "unterminated constraint");
        }
        pending_.clear();
    }

    void bound_line(const std::string &line, int line_no) {
        std::vector<Token> toks;
        tokenize(line, line_no, toks);
        ++report_.bound_lines;
        auto is_value = [&](std::size_t &i) {
            if (i < toks.size() && toks[i].kind == TokKind::Sign) {
                ++i;
            }
            if (i < toks.size() && toks[i].kind == TokKind::Number) {
                ++i;
                return true;
            }
            if (i < toks.size() && toks[i].kind == TokKind::Name && (lower(toks[i].text) == "inf" ||
                                                                     lower(toks[i].text) == "infinity")) {
                ++i;
                return true;
            }
            return false;
        };
        std::size_t i = 0;
        // "var free"
        if (toks.size() == 2 && toks[0].kind == TokKind::Name && lower(toks[1].text) == "free") {
            report_.variables.insert(toks[0].text);
            return;
        }
        // "[value cmp] var [cmp value]"
        std::size_t save = i;
        if (is_value(i)) {
            if (i >= toks.size() || toks[i].kind != TokKind::Compare) {
                diag(line_no, "malformed bound");
                return;
            }
            ++i;
        } else {
            i = save;
        }
        if (i >= toks.size() || toks[i].kind != TokKind::Name) {
            diag(line_no, "bound without a variable");
            return;
        }
        report_.variables.insert(toks[i].text);
        ++i;
        if (i == toks.size()) {
            if (save == 0 && i == 1) {
                diag(line_no, "bound without a comparison");
            }
            return;
        }
        if (toks[i].kind != TokKind::Compare) {
            diag(line_no, "malformed bound");
            return;
        }
        ++i;
        if (!is_value(i) || i != toks.size()) {
            diag(line_no, "malformed bound");
        }
    }

    void declare_line(const std::string &line, int line_no, std::set<std::string> &into) {
        std::vector<Token> toks;
        tokenize(line, line_no, toks);
        for (const Token &t : toks) {
            if (t.kind != TokKind::Name) {
                diag(line_no, "expected a variable name, got '" + t.text + "'");
                continue;
            }
            report_.variables.insert(t.text);
            into.insert(t.text);
        }
    }

    std::string_view text_;
    LpReport report_;
    std::vector<Token> pending_;
    std::set<std::string> row_set_;
};

} // namespace

std::size_t LpReport::rows_with_prefix(const std::string &prefix) const {
    return static_cast<std::size_t>(std::count_if(row_names.begin(), row_names.end(), [&](const std::string &name) {
        return name == prefix || name.starts_with(prefix + "_");
    }));
}

LpReport check_lp(std::string_view text) { return Checker(text).run(); }

} // namespace pipemap
