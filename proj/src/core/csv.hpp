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


#ifndef VVFLOW_CORE_CSV_HPP_
#define VVFLOW_CORE_CSV_HPP_

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace vvflow
{

/// Plain comma-separated table with a header row. No quoting.
struct CsvTable
{
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  // 1-based source line of each row, for error messages.
  std::vector<std::size_t> lines;

  /// Throws MissingColumn.
  std::size_t column(const std::string & name) const;
  bool has_column(const std::string & name) const;
  /// Parses a cell as a finite number. Throws Format naming the line.
  double number(std::size_t row, std::size_t col) const;
  long long integer(std::size_t row, std::size_t col) const;
  const std::string & cell(std::size_t row, std::size_t col) const;
};

/// Blank lines and lines starting with '#' are skipped.
CsvTable read_csv(std::istream & is);

}  // namespace vvflow

#endif  // VVFLOW_CORE_CSV_HPP_
