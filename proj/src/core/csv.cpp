// Copyright 2026 The vvflow Authors
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


#include "csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>

#include "error.hpp"

namespace vvflow
{

namespace
{

std::string trim(const std::string & s)
{
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_line(const std::string & line)
{
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::size_t CsvTable::column(const std::string & name) const
{
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) fail(ErrorCode::MissingColumn, "missing column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

bool CsvTable::has_column(const std::string & name) const
{
  return std::find(header.begin(), header.end(), name) != header.end();
}

const std::string & CsvTable::cell(std::size_t row, std::size_t col) const
{
  if (col >= rows[row].size()) {
    fail(
      ErrorCode::Format, "line " + std::to_string(lines[row]) + ": expected at least " +
                           std::to_string(col + 1) + " fields");
  }
  return rows[row][col];
}

double CsvTable::number(std::size_t row, std::size_t col) const
{
  const std::string & s = cell(row, col);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || end != s.data() + s.size() || !std::isfinite(v)) {
    fail(
      ErrorCode::Format, "line " + std::to_string(lines[row]) + ", column '" + header[col] +
                           "': not a number: '" + s + "'");
  }
  return v;
}

long long CsvTable::integer(std::size_t row, std::size_t col) const
{
  const double v = number(row, col);
  if (v != std::floor(v)) {
    fail(
      ErrorCode::Format, "line " + std::to_string(lines[row]) + ", column '" + header[col] +
                           "': not an integer");
  }
  return static_cast<long long>(v);
}

CsvTable read_csv(std::istream & is)
{
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (!have_header) {
      table.header = split_line(t);
      if (!table.header.empty() && table.header[0].rfind("\xEF\xBB\xBF", 0) == 0) {
        table.header[0].erase(0, 3);
      }
      have_header = true;
      continue;
    }
    table.rows.push_back(split_line(t));
    table.lines.push_back(line_no);
  }
  if (!have_header) fail(ErrorCode::Format, "missing CSV header row");
  return table;
}

}  // namespace vvflow
