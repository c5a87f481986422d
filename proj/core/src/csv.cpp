// Copyright 2026 The mepgof Authors
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

#include "mepgof/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "mepgof/error.hpp"

namespace mepgof {
namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) {
    const auto first = field.find_first_not_of(" \t\r");
    const auto last = field.find_last_not_of(" \t\r");
    out.push_back(first == std::string::npos ? std::string()
                                             : field.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string format_real(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
  for (std::size_t k = 0; k < header.size(); ++k) out_ << (k ? "," : "") << header[k];
  out_ << '\n';
}

void CsvWriter::row(std::initializer_list<Cell> cells) {
  row(std::vector<Cell>(cells));
}

void CsvWriter::row(const std::vector<Cell>& cells) {
  if (cells.size() != columns_) throw InvalidArgument("CSV row has wrong column count");
  for (std::size_t k = 0; k < cells.size(); ++k) out_ << (k ? "," : "") << cells[k].text;
  out_ << '\n';
}

CsvTable CsvTable::parse(std::istream& in) {
  CsvTable table;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line.front() == '#') continue;
    if (table.header_.empty()) {
      table.header_ = split_line(line);
      continue;
    }
    auto cells = split_line(line);
    if (cells.size() != table.header_.size())
      throw InvalidArgument("CSV row " + std::to_string(table.cells_.size() + 1) +
                            " has " + std::to_string(cells.size()) + " fields, expected " +
                            std::to_string(table.header_.size()));
    table.cells_.push_back(std::move(cells));
  }
  if (table.header_.empty()) throw InvalidArgument("CSV input has no header");
  return table;
}

CsvTable CsvTable::read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw RuntimeError("cannot open '" + path.string() + "' for reading");
  return parse(in);
}

bool CsvTable::has_column(const std::string& name) const {
  return std::find(header_.begin(), header_.end(), name) != header_.end();
}

std::size_t CsvTable::index_of(const std::string& name) const {
  const auto it = std::find(header_.begin(), header_.end(), name);
  if (it == header_.end()) throw InvalidArgument("missing column '" + name + "'");
  return static_cast<std::size_t>(it - header_.begin());
}

std::vector<double> CsvTable::numeric_column(const std::string& name) const {
  const std::size_t col = index_of(name);
  std::vector<double> out;
  out.reserve(cells_.size());
  for (std::size_t r = 0; r < cells_.size(); ++r) {
    const std::string& text = cells_[r][col];
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
      throw InvalidArgument("column '" + name + "' row " + std::to_string(r + 1) +
                            ": not a number: '" + text + "'");
    out.push_back(value);
  }
  return out;
}

std::vector<std::string> CsvTable::text_column(const std::string& name) const {
  const std::size_t col = index_of(name);
  std::vector<std::string> out;
  out.reserve(cells_.size());
  for (const auto& row : cells_) out.push_back(row[col]);
  return out;
}

}  // namespace mepgof
