// Copyright 2026 The carpool-qoe Authors.
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

#ifndef CARPOOL_HARNESS_TABLE_HPP
#define CARPOOL_HARNESS_TABLE_HPP

#include <charconv>
#include <cstddef>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "carpool/error.hpp"

namespace carpool::harness {

/// Shortest text that parses back to the same double; "0" for both zeros.
inline std::string format_number(double v) {
  if (v == 0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

inline double parse_number(std::string_view s) {
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw parse_error("table: not a number: '" + std::string(s) + "'");
  }
  return v;
}

/// Quotes a cell when it holds a comma, quote or line break.
inline std::string csv_cell(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

inline void write_csv_row(std::ostream& out, std::span<std::string const> cells) {
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k != 0) out << ',';
    out << csv_cell(cells[k]);
  }
  out << '\n';
}

using table_row = std::map<std::string, std::string, std::less<>>;

/// Reads a header-led comma-separated table into one map per row.
inline std::vector<table_row> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> rec;
  std::string cell;
  bool quoted = false, any = false;
  for (std::size_t k = 0; k < text.size(); ++k) {
    char const ch = text[k];
    if (quoted) {
      if (ch == '"') {
        if (k + 1 < text.size() && text[k + 1] == '"') {
          cell += '"';
          ++k;
        } else {
          quoted = false;
        }
      } else {
        cell += ch;
      }
      continue;
    }
    if (ch == '"') {
      quoted = true;
      any = true;
    } else if (ch == ',') {
      rec.push_back(std::move(cell));
      cell.clear();
      any = true;
    } else if (ch == '\n') {
      rec.push_back(std::move(cell));
      cell.clear();
      records.push_back(std::move(rec));
      rec.clear();
      any = false;
    } else if (ch != '\r') {
      cell += ch;
      any = true;
    }
  }
  if (quoted) throw parse_error("table: unterminated quoted cell");
  if (any) {
    rec.push_back(std::move(cell));
    records.push_back(std::move(rec));
  }
  if (records.empty()) throw parse_error("table: missing header row");

  auto const& header = records.front();
  std::vector<table_row> rows;
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != header.size()) {
      throw parse_error("table: row " + std::to_string(r) + " has " +
                        std::to_string(records[r].size()) + " cells, header has " +
                        std::to_string(header.size()));
    }
    table_row row;
    for (std::size_t c = 0; c < header.size(); ++c) row[header[c]] = records[r][c];
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string join(std::span<std::string const> parts, char sep = ' ') {
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k != 0) out += sep;
    out += parts[k];
  }
  return out;
}

}  // namespace carpool::harness

#endif  // CARPOOL_HARNESS_TABLE_HPP
