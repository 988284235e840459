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

#ifndef IRSPM_CSV_HPP
#define IRSPM_CSV_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace irspm {

/// RFC-4180 field quoting (only when the field needs it).
std::string csv_escape(const std::string& field);

void csv_write_row(std::ostream& os, const std::vector<std::string>& fields);

/// Parses one CSV record (no embedded newlines). `where` and `line` feed the
/// parse_error message.
std::vector<std::string> csv_split_row(const std::string& row, const std::string& where, int line);

/// Whole-file reader: returns all records including the header row.
std::vector<std::vector<std::string>> csv_read_file(const std::string& path);

}  // namespace irspm

#endif
