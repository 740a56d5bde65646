//
// Copyright 2026 The egamma Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Tabular output shared by the command-line tool: CSV with a header row and
// full double precision, or a JSON object {"meta": ..., "rows": [...]}.

#ifndef EGAMMA_REPORT_H_
#define EGAMMA_REPORT_H_

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

namespace egamma {

using Cell = std::variant<double, std::string>;

class Table {
 public:
  explicit Table(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }

  // Throws ShapeError unless the row has one cell per column.
  void AddRow(std::vector<Cell> row);

  // Index of `name`; throws ShapeError if absent.
  std::size_t column(std::string_view name) const;
  double number(std::size_t row, std::string_view name) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

// %.17g, with inf, -inf and nan spelled out.
std::string FormatNumber(double x);

// LF line endings, no quoting: text cells must not contain ',', '"' or line
// breaks (DomainError otherwise).
std::string ToCsv(const Table& table);

// Inverse of ToCsv. Cells that parse completely as numbers become numbers.
Table ParseCsv(std::string_view text);

// Non-finite numbers become null.
nlohmann::ordered_json ToJson(const Table& table,
                              const nlohmann::ordered_json& meta);

}  // namespace egamma

#endif  // EGAMMA_REPORT_H_
