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

namespace pipemap {

/// Header plus string cells; quoting follows RFC 4180.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column position by name, throws std::out_of_range if absent.
    std::size_t column(const std::string &name) const;
    const std::string &cell(std::size_t row, const std::string &name) const { return rows.at(row).at(column(name)); }
};

void write_csv(std::ostream &out, const CsvTable &table);
CsvTable read_csv(std::istream &in);

/// Shortest text that parses back to the same double.
std::string format_double(double value);
double parse_double(const std::string &text);

} // namespace pipemap
