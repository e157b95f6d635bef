// Copyright 2026 The SearchRef DEA Authors
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

// File formats. All files are UTF-8, LF-terminated, '.' decimal separator,
// floats printed with 17 significant digits.
//
//   peer CSV        id,x1..xm,y1..yn   (header names are informative only)
//   results CSV     id,theta,iterations,max_lp_columns,status
//   references CSV  id,ref_id,lambda
//   metadata        key=value per line

#pragma once

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dea/model.hpp"

namespace dea {

class CsvError : public std::runtime_error {
 public:
  CsvError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

inline std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

inline double parse_double(std::string_view field, std::size_t line) {
  const std::string text(field);
  if (text.empty()) throw CsvError(line, "empty numeric field");
  char* end = nullptr;
  errno = 0;
  const double value = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || errno == ERANGE) {
    throw CsvError(line, "not a number: '" + text + "'");
  }
  return value;
}

inline bool read_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

}  // namespace detail

/// Parses a peer CSV with m inputs and n outputs and validates it.
inline Dataset read_dataset_csv(std::istream& in, int m, int n,
                                const ValidationOptions& options = {}) {
  std::string line;
  std::size_t line_no = 1;
  if (!detail::read_line(in, line)) throw CsvError(1, "missing header");
  const std::size_t expected = static_cast<std::size_t>(1 + m + n);
  if (detail::split_fields(line).size() != expected) {
    throw CsvError(1, "header has " + std::to_string(detail::split_fields(line).size()) +
                          " columns, expected " + std::to_string(expected) +
                          " (id + " + std::to_string(m) + " inputs + " +
                          std::to_string(n) + " outputs)");
  }

  std::vector<std::string> ids;
  std::vector<double> values;
  while (detail::read_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = detail::split_fields(line);
    if (fields.size() != expected) {
      throw CsvError(line_no, "expected " + std::to_string(expected) +
                                  " fields, got " + std::to_string(fields.size()));
    }
    ids.emplace_back(fields[0]);
    for (std::size_t c = 1; c < fields.size(); ++c) {
      values.push_back(detail::parse_double(fields[c], line_no));
    }
  }
  RowMatrix raw(static_cast<Eigen::Index>(ids.size()), m + n);
  for (Eigen::Index r = 0; r < raw.rows(); ++r) {
    for (Eigen::Index c = 0; c < raw.cols(); ++c) {
      raw(r, c) = values[static_cast<std::size_t>(r * raw.cols() + c)];
    }
  }
  return validate_dataset(std::move(ids), raw, m, n, options);
}

inline void write_dataset_csv(std::ostream& out, const Dataset& d) {
  out << "id";
  for (int i = 1; i <= d.num_inputs(); ++i) out << ",x" << i;
  for (int j = 1; j <= d.num_outputs(); ++j) out << ",y" << j;
  out << '\n';
  for (std::size_t r = 0; r < d.size(); ++r) {
    out << d.id(r);
    for (int i = 0; i < d.num_inputs(); ++i) out << ',' << format_double(d.input(r)[i]);
    for (int j = 0; j < d.num_outputs(); ++j) out << ',' << format_double(d.output(r)[j]);
    out << '\n';
  }
}

inline void write_results_csv(std::ostream& out,
                              std::span<const EfficiencyResult> results) {
  out << "id,theta,iterations,max_lp_columns,status\n";
  for (const auto& r : results) {
    out << r.dmu << ',' << format_double(r.theta) << ',' << r.iterations << ','
        << r.max_lp_columns << ',' << to_string(r.status) << '\n';
  }
}

inline void write_references_csv(std::ostream& out, const Dataset& d,
                                 std::span<const EfficiencyResult> results) {
  out << "id,ref_id,lambda\n";
  for (const auto& r : results) {
    for (const auto& [index, weight] : r.lambdas) {
      out << r.dmu << ',' << d.id(index) << ',' << format_double(weight) << '\n';
    }
  }
}

using Metadata = std::map<std::string, std::string>;

inline void write_metadata(std::ostream& out, const Metadata& meta) {
  for (const auto& [key, value] : meta) out << key << '=' << value << '\n';
}

inline Metadata read_metadata(std::istream& in) {
  Metadata meta;
  std::string line;
  std::size_t line_no = 0;
  while (detail::read_line(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw CsvError(line_no, "expected key=value");
    meta[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return meta;
}

}  // namespace dea
