// Copyright 2026 The flip authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "flip/error.hpp"
#include "flip/series.hpp"

namespace flip {

namespace detail {

/// Splits one CSV record on commas, honoring double-quoted fields with ""
/// escapes.  No multi-line fields.
inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cell);
      cell.clear();
    } else if (c != '\r') {
      cell.push_back(c);
    }
  }
  out.push_back(cell);
  return out;
}

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && (s[a] == ' ' || s[a] == '\t')) ++a;
  while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t')) --b;
  return s.substr(a, b - a);
}

}  // namespace detail

/// Reads one numeric column from a headered CSV file, in file row order.
/// Rows are counted physically (header = row 1) in error messages; empty
/// or non-numeric cells are rejected.
inline TimeSeries load_csv(const std::filesystem::path& path,
                           const std::string& column) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");

  std::string line;
  if (!std::getline(in, line))
    throw ParseError("'" + path.string() + "': missing header row", 1);
  const auto header = detail::split_csv_line(line);
  std::size_t col = header.size();
  for (std::size_t i = 0; i < header.size(); ++i)
    if (detail::trim(header[i]) == column) {
      col = i;
      break;
    }
  if (col == header.size())
    throw ParseError("'" + path.string() + "': no column named '" + column + "'", 1);

  TimeSeries series;
  series.label = column;
  long row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    const auto cells = detail::split_csv_line(line);
    if (col >= cells.size())
      throw ParseError("row " + std::to_string(row) + ": too few columns", row);
    const std::string cell = detail::trim(cells[col]);
    if (cell.empty())
      throw ParseError("row " + std::to_string(row) + ": missing value", row);
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end != cell.c_str() + cell.size() || !std::isfinite(v))
      throw ParseError("row " + std::to_string(row) + ": cannot parse '" + cell +
                           "' as a finite number",
                       row);
    series.values.push_back(v);
  }
  if (series.values.empty())
    throw ParseError("'" + path.string() + "': no data rows", row);
  return series;
}

/// Writes columns of equal length under the given headers.  Doubles are
/// rendered with %.17g so values round-trip and output is byte-stable.
inline void write_csv(const std::filesystem::path& path,
                      const std::vector<std::string>& headers,
                      const std::vector<std::vector<double>>& columns) {
  if (headers.size() != columns.size())
    throw InvalidArgument("write_csv: header/column count mismatch");
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  for (std::size_t i = 0; i < headers.size(); ++i)
    out << (i ? "," : "") << headers[i];
  out << "\n";
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns)
    if (c.size() != rows) throw InvalidArgument("write_csv: ragged columns");
  char buf[32];
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", columns[i][r]);
      out << (i ? "," : "") << buf;
    }
    out << "\n";
  }
}

}  // namespace flip
