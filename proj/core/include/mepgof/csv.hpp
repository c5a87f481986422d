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

// Minimal CSV reading and writing. Reals are written with 17 significant
// digits so that values round-trip exactly.

#ifndef MEPGOF_CSV_HPP_
#define MEPGOF_CSV_HPP_

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <string>
#include <vector>

namespace mepgof {

std::string format_real(double value);

class CsvWriter {
 public:
  // A cell rendered as text; reals use format_real.
  struct Cell {
    Cell(double v) : text(format_real(v)) {}
    Cell(int v) : text(std::to_string(v)) {}
    Cell(long v) : text(std::to_string(v)) {}
    Cell(long long v) : text(std::to_string(v)) {}
    Cell(unsigned v) : text(std::to_string(v)) {}
    Cell(unsigned long v) : text(std::to_string(v)) {}
    Cell(unsigned long long v) : text(std::to_string(v)) {}
    Cell(const char* v) : text(v) {}
    Cell(std::string v) : text(std::move(v)) {}
    std::string text;
  };

  CsvWriter(std::ostream& out, const std::vector<std::string>& header);
  void row(std::initializer_list<Cell> cells);
  void row(const std::vector<Cell>& cells);

 private:
  std::ostream& out_;
  std::size_t columns_;
};

class CsvTable {
 public:
  static CsvTable parse(std::istream& in);
  // Throws RuntimeError naming the path if the file cannot be opened.
  static CsvTable read(const std::filesystem::path& path);

  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return cells_.size(); }
  bool has_column(const std::string& name) const;

  // Throws InvalidArgument naming the column if it is missing or holds a
  // non-numeric entry.
  std::vector<double> numeric_column(const std::string& name) const;
  std::vector<std::string> text_column(const std::string& name) const;

 private:
  std::size_t index_of(const std::string& name) const;

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> cells_;
};

}  // namespace mepgof

#endif  // MEPGOF_CSV_HPP_
