/*
Copyright 2026 The poiwave Authors
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
you may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "poiwave/errors.hpp"
#include "poiwave/risk.hpp"
#include "poiwave/wavelets.hpp"

namespace poiwave::csv {

/// Shortest text that reads back to the same double.
inline std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Writer {
 public:
  explicit Writer(std::ostream& os) : os_(os) {}

  Writer& comment(std::string_view text) {
    os_ << "# " << text << '\n';
    return *this;
  }

  Writer& header(const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) os_ << (i ? "," : "") << cols[i];
    os_ << '\n';
    return *this;
  }

  template <class... Ts>
  Writer& row(const Ts&... cells) {
    bool first = true;
    ((os_ << (first ? "" : ","), write_cell(cells), first = false), ...);
    os_ << '\n';
    return *this;
  }

 private:
  void write_cell(double v) { os_ << number(v); }
  void write_cell(const std::string& s) { os_ << s; }
  void write_cell(const char* s) { os_ << s; }
  template <class I>
    requires std::is_integral_v<I>
  void write_cell(I v) { os_ << v; }

  std::ostream& os_;
};

/// Rows (gamma_from, value); the first row starts at 0.
inline void write_step_curve(std::ostream& os, const StepCurve& c, std::string_view config) {
  Writer w(os);
  w.comment(config).header({"gamma_from", "value"});
  for (std::size_t i = 0; i < c.pieces(); ++i) w.row(c.piece_start(i), c.values()[i]);
}

inline void write_coeffs(std::ostream& os, const CoeffSet& c, std::string_view config) {
  Writer w(os);
  w.comment(config).header({"j", "k", "value"});
  for (const auto& [l, v] : c) w.row(l.j, l.k, v);
}

/// Data rows of a comma-separated file with '#' comments and one header row.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  [[nodiscard]] std::size_t column(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw ConfigError("csv: missing column '" + std::string(name) + "'");
  }
};

inline std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  return out;
}

inline Table read(std::istream& is) {
  Table t;
  std::string line;
  bool have_header = false;
  while (std::getline(is, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (!have_header) {
      t.columns = split(line);
      have_header = true;
      continue;
    }
    auto cells = split(line);
    if (cells.size() != t.columns.size()) throw ConfigError("csv: ragged row: " + line);
    t.rows.push_back(std::move(cells));
  }
  if (!have_header) throw ConfigError("csv: no header row");
  return t;
}

inline Table read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  return read(in);
}

inline double to_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw ConfigError("csv: bad number '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("csv: bad number '" + s + "'");
  }
}

}  // namespace poiwave::csv
