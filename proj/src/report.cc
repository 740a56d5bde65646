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

#include "egamma/report.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "egamma/errors.h"

namespace egamma {
namespace {

void CheckText(const std::string& s) {
  if (s.find_first_of(",\"\r\n") != std::string::npos) {
    throw DomainError("CSV text cell contains a separator: " + s);
  }
}

std::vector<std::string> SplitLine(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

Cell ParseCell(const std::string& token) {
  if (token.empty()) return token;
  char* end = nullptr;
  const double x = std::strtod(token.c_str(), &end);
  if (end == token.c_str() + token.size()) return x;
  return token;
}

}  // namespace

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {
  for (const auto& c : columns_) CheckText(c);
}

void Table::AddRow(std::vector<Cell> row) {
  if (row.size() != columns_.size()) {
    throw ShapeError("Table::AddRow: expected " +
                     std::to_string(columns_.size()) + " cells, got " +
                     std::to_string(row.size()));
  }
  rows_.push_back(std::move(row));
}

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i] == name) return i;
  }
  throw ShapeError("Table: no column named " + std::string(name));
}

double Table::number(std::size_t row, std::string_view name) const {
  return std::get<double>(rows_.at(row).at(column(name)));
}

std::string FormatNumber(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string ToCsv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns().size(); ++i) {
    if (i > 0) out += ',';
    out += table.columns()[i];
  }
  out += '\n';
  for (const auto& row : table.rows()) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      if (const double* x = std::get_if<double>(&row[i])) {
        out += FormatNumber(*x);
      } else {
        const std::string& s = std::get<std::string>(row[i]);
        CheckText(s);
        out += s;
      }
    }
    out += '\n';
  }
  return out;
}

Table ParseCsv(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  if (lines.empty()) throw DomainError("ParseCsv: missing header row");
  Table table(SplitLine(lines.front()));
  for (std::size_t l = 1; l < lines.size(); ++l) {
    std::vector<Cell> row;
    for (const auto& token : SplitLine(lines[l])) row.push_back(ParseCell(token));
    if (row.size() != table.columns().size()) {
      throw DomainError("ParseCsv: line " + std::to_string(l + 1) + " has " +
                        std::to_string(row.size()) + " cells");
    }
    table.AddRow(std::move(row));
  }
  return table;
}

nlohmann::ordered_json ToJson(const Table& table,
                              const nlohmann::ordered_json& meta) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows()) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      const std::string& key = table.columns()[i];
      if (const double* x = std::get_if<double>(&row[i])) {
        if (std::isfinite(*x)) {
          obj[key] = *x;
        } else {
          obj[key] = nullptr;
        }
      } else {
        obj[key] = std::get<std::string>(row[i]);
      }
    }
    rows.push_back(std::move(obj));
  }
  nlohmann::ordered_json out;
  out["meta"] = meta;
  out["rows"] = std::move(rows);
  return out;
}

}  // namespace egamma
