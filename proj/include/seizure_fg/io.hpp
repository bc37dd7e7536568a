// Copyright 2026 The Seizure FG Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "seizure_fg/error.hpp"

namespace seizure_fg::io {

// Writes through a temporary sibling file and renames it into place, so a
// reader never observes a partially written output.
inline void write_atomically(const std::filesystem::path& path,
                             const std::function<void(std::ostream&)>& body,
                             std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, mode | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write '" + tmp.string() + "'");
    body(out);
    out.flush();
    if (!out) throw Error(ErrorCode::kIo, "write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t begin = 0;
  while (true) {
    const auto comma = line.find(',', begin);
    fields.emplace_back(line.substr(begin, comma - begin));
    if (comma == std::string_view::npos) break;
    begin = comma + 1;
  }
  for (auto& field : fields) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
  }
  return fields;
}

// Rows of a CSV file whose first line must equal `expected_header`.
inline std::vector<std::vector<std::string>> read_csv(
    const std::filesystem::path& path, const std::vector<std::string>& expected_header) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || split_csv_line(line) != expected_header) {
    std::string joined;
    for (const auto& name : expected_header) joined += (joined.empty() ? "" : ",") + name;
    throw Error(ErrorCode::kFormat,
                path.filename().string() + ": expected header '" + joined + "'");
  }
  std::vector<std::vector<std::string>> rows;
  std::size_t row_number = 1;
  while (std::getline(in, line)) {
    ++row_number;
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv_line(line);
    if (fields.size() != expected_header.size()) {
      throw Error(ErrorCode::kFormat, path.filename().string() + " row " +
                                          std::to_string(row_number) + ": expected " +
                                          std::to_string(expected_header.size()) +
                                          " fields");
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

inline double parse_double(const std::string& text, const std::string& context) {
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw Error(ErrorCode::kParse, context + ": not a number: '" + text + "'");
  }
  return value;
}

// Shortest decimal text that parses back to the same double.
inline std::string format_double(double value) {
  char buffer[32];
  for (int precision = 6; precision <= 17; ++precision) {
    std::snprintf(buffer, sizeof(buffer), "%.*g", precision, value);
    if (std::strtod(buffer, nullptr) == value) break;
  }
  return buffer;
}

}  // namespace seizure_fg::io
