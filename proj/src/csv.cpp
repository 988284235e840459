// irspm - IRS reflection design from user power measurements
// Copyright (C) 2026 irspm contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "csv.hpp"

#include "common.hpp"

#include <fstream>
#include <ostream>

namespace irspm {

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void csv_write_row(std::ostream& os, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) os << ',';
        os << csv_escape(fields[i]);
    }
    os << "\n";
}

std::vector<std::string> csv_split_row(const std::string& row, const std::string& where, int line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < row.size(); ++i) {
        const char c = row[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < row.size() && row[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            if (!cur.empty())
                throw parse_error(where + ":" + std::to_string(line) + ": stray quote in field");
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c == '\r') {
            // tolerated at end of record
        } else {
            cur += c;
        }
    }
    if (quoted) throw parse_error(where + ":" + std::to_string(line) + ": unterminated quote");
    fields.push_back(std::move(cur));
    return fields;
}

std::vector<std::vector<std::string>> csv_read_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw parse_error(path + ": cannot open");
    std::vector<std::vector<std::string>> rows;
    std::string row;
    int line = 0;
    while (std::getline(is, row)) {
        ++line;
        if (row.empty()) continue;
        rows.push_back(csv_split_row(row, path, line));
    }
    return rows;
}

}  // namespace irspm
