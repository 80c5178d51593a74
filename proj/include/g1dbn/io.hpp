/*
 * Copyright 2026 The g1dbn Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/** @file
 * Tab-separated file formats. Indices are 1-based in every file.
 *
 *  - series:      optional header of variable names, then one row per time
 *                 point; values written with 17 significant digits.
 *  - score rows:  header "child\t1\t...\tp", then "i\tS(i,1)\t...\tS(i,p)".
 *                 A full matrix has all p rows in order; a shard any subset.
 *  - edge list:   header "parent\tchild\ts1\ts2", scores with 6 significant
 *                 digits, sorted by s2, then s1, then (child, parent).
 *  - plain edges: header "parent\tchild".
 *  - model:       sections "A", "B", "SIGMA" separated by blank lines.
 *  - PR curve:    header "recall\tprecision\tthreshold".
 */

#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "g1dbn/core.hpp"
#include "g1dbn/eval.hpp"

namespace g1dbn::io {

inline constexpr int kExactDigits = 17;
inline constexpr int kScoreDigits = 6;

inline std::string format_double(double v, int digits = kExactDigits) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v,
                                 std::chars_format::general, digits);
  return std::string(buf, res.ptr);
}

inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find('\t', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

inline bool parse_double(std::string_view field, double& out) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  if (field.empty()) return false;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), out);
  return res.ec == std::errc() && res.ptr == field.data() + field.size();
}

inline double require_double(std::string_view field, std::size_t line_no) {
  double v = 0.0;
  if (!parse_double(field, v)) {
    throw Error(ErrorKind::Parse,
                "line " + std::to_string(line_no) + ": not a number: '" +
                    std::string(field) + "'",
                static_cast<long long>(line_no));
  }
  return v;
}

inline std::size_t require_index(std::string_view field, std::size_t line_no,
                                 std::size_t p) {
  std::size_t v = 0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size() || v < 1 ||
      (p > 0 && v > p)) {
    throw Error(ErrorKind::Parse,
                "line " + std::to_string(line_no) + ": bad 1-based index '" +
                    std::string(field) + "'",
                static_cast<long long>(line_no));
  }
  return v - 1;
}

inline std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

// ---------------------------------------------------------------- series

inline TimeSeries read_series(std::istream& in) {
  std::vector<std::string> names;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(std::move(line));
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    double probe = 0.0;
    if (rows.empty() && names.empty() && !parse_double(fields[0], probe)) {
      for (auto f : fields) names.emplace_back(f);
      continue;
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (auto f : fields) row.push_back(require_double(f, line_no));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorKind::Parse,
                  "line " + std::to_string(line_no) + ": expected " +
                      std::to_string(rows.front().size()) + " columns",
                  static_cast<long long>(line_no));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::Parse, "series file has no data rows");
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto p = static_cast<Eigen::Index>(rows.front().size());
  if (!names.empty() && names.size() != rows.front().size()) {
    throw Error(ErrorKind::Parse, "header and data column counts differ");
  }
  Matrix data(n, p);
  for (Eigen::Index t = 0; t < n; ++t)
    for (Eigen::Index j = 0; j < p; ++j)
      data(t, j) = rows[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)];
  return TimeSeries(std::move(data), std::move(names));
}

inline void write_matrix_rows(std::ostream& out, const Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << '\t';
      out << format_double(m(r, c));
    }
    out << '\n';
  }
}

inline void write_series(std::ostream& out, const TimeSeries& ts) {
  if (!ts.names().empty()) {
    for (std::size_t j = 0; j < ts.names().size(); ++j) {
      if (j) out << '\t';
      out << ts.names()[j];
    }
    out << '\n';
  }
  write_matrix_rows(out, ts.data());
}

// ------------------------------------------------------------ score rows

inline void write_score_header(std::ostream& out, std::size_t p) {
  out << "child";
  for (std::size_t j = 1; j <= p; ++j) out << '\t' << j;
  out << '\n';
}

inline void write_score_row(std::ostream& out, std::size_t child,
                            const Vector& row) {
  out << child + 1;
  for (Eigen::Index j = 0; j < row.size(); ++j) out << '\t' << format_double(row(j));
  out << '\n';
}

inline void write_score_matrix(std::ostream& out, const ScoreMatrix& s) {
  write_score_header(out, s.p());
  for (std::size_t i = 0; i < s.p(); ++i)
    write_score_row(out, i, s.matrix().row(static_cast<Eigen::Index>(i)).transpose());
}

/// Rows of a score file (full or shard), keyed by 0-based child index.
struct ScoreRows {
  std::size_t p = 0;
  std::map<std::size_t, Vector> rows;
};

inline ScoreRows read_score_rows(std::istream& in) {
  ScoreRows out;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(std::move(line));
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (!header_seen) {
      if (fields.empty() || fields[0] != "child" || fields.size() < 2) {
        throw Error(ErrorKind::Parse, "score file must start with a 'child' header");
      }
      out.p = fields.size() - 1;
      header_seen = true;
      continue;
    }
    if (fields.size() != out.p + 1) {
      throw Error(ErrorKind::Parse,
                  "line " + std::to_string(line_no) + ": expected " +
                      std::to_string(out.p + 1) + " fields",
                  static_cast<long long>(line_no));
    }
    const auto child = require_index(fields[0], line_no, out.p);
    Vector row(static_cast<Eigen::Index>(out.p));
    for (std::size_t j = 0; j < out.p; ++j)
      row(static_cast<Eigen::Index>(j)) = require_double(fields[j + 1], line_no);
    if (!out.rows.emplace(child, std::move(row)).second) {
      throw Error(ErrorKind::Parse,
                  "duplicate row for child " + std::to_string(child + 1),
                  static_cast<long long>(child));
    }
  }
  if (!header_seen) throw Error(ErrorKind::Parse, "empty score file");
  return out;
}

/// Combines shards; every child row must appear exactly once overall.
inline ScoreMatrix merge_score_rows(const std::vector<ScoreRows>& shards) {
  if (shards.empty()) throw Error(ErrorKind::Parse, "no score shards to merge");
  const auto p = shards.front().p;
  Matrix m(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  std::vector<bool> seen(p, false);
  for (const auto& shard : shards) {
    if (shard.p != p) throw Error(ErrorKind::Parse, "shards disagree on p");
    for (const auto& [child, row] : shard.rows) {
      if (seen[child]) {
        throw Error(ErrorKind::Parse,
                    "child " + std::to_string(child + 1) + " appears in two shards",
                    static_cast<long long>(child));
      }
      seen[child] = true;
      m.row(static_cast<Eigen::Index>(child)) = row.transpose();
    }
  }
  for (std::size_t i = 0; i < p; ++i) {
    if (!seen[i]) {
      throw Error(ErrorKind::Parse,
                  "missing score row for child " + std::to_string(i + 1),
                  static_cast<long long>(i));
    }
  }
  return ScoreMatrix(std::move(m));
}

inline ScoreMatrix read_score_matrix(std::istream& in) {
  return merge_score_rows({read_score_rows(in)});
}

// ------------------------------------------------------------ edge lists

/// Scored edge list sorted by s2, then s1, then (child, parent).
inline void write_edge_list(std::ostream& out, const EdgeSet& edges,
                            const ScoreMatrix& s1, const ScoreMatrix& s2) {
  std::vector<Edge> order(edges.begin(), edges.end());
  std::sort(order.begin(), order.end(), [&](const Edge& a, const Edge& b) {
    return std::make_tuple(s2.at(a), s1.at(a), a.child, a.parent) <
           std::make_tuple(s2.at(b), s1.at(b), b.child, b.parent);
  });
  out << "parent\tchild\ts1\ts2\n";
  for (const auto& e : order) {
    out << e.parent + 1 << '\t' << e.child + 1 << '\t'
        << format_double(s1.at(e), kScoreDigits) << '\t'
        << format_double(s2.at(e), kScoreDigits) << '\n';
  }
}

/// Unscored edges in (child, parent) order.
inline void write_plain_edges(std::ostream& out, const EdgeSet& edges) {
  std::vector<Edge> order(edges.begin(), edges.end());
  std::sort(order.begin(), order.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.child, a.parent) < std::tie(b.child, b.parent);
  });
  out << "parent\tchild\n";
  for (const auto& e : order) out << e.parent + 1 << '\t' << e.child + 1 << '\n';
}

/// Reads the parent/child columns of either edge format (extra columns are
/// ignored; a non-numeric first line is treated as a header).
inline EdgeSet read_edges(std::istream& in, std::size_t p) {
  EdgeSet out(p);
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(std::move(line));
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    double probe = 0.0;
    if (first && !parse_double(fields[0], probe)) {
      first = false;
      continue;
    }
    first = false;
    if (fields.size() < 2) {
      throw Error(ErrorKind::Parse,
                  "line " + std::to_string(line_no) + ": expected parent and child",
                  static_cast<long long>(line_no));
    }
    out.insert({require_index(fields[0], line_no, p),
                require_index(fields[1], line_no, p)});
  }
  return out;
}

// ------------------------------------------------------------------ model

inline void write_model(std::ostream& out, const AR1Model& model) {
  out << "A\n";
  write_matrix_rows(out, model.a());
  out << "\nB\n";
  write_matrix_rows(out, model.b().transpose());
  out << "\nSIGMA\n";
  write_matrix_rows(out, model.sigma());
}

inline AR1Model read_model(std::istream& in) {
  std::map<std::string, std::vector<std::vector<double>>> sections;
  std::string current;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(std::move(line));
    if (line.empty()) {
      current.clear();
      continue;
    }
    if (current.empty()) {
      if (line != "A" && line != "B" && line != "SIGMA") {
        throw Error(ErrorKind::Parse,
                    "line " + std::to_string(line_no) +
                        ": expected section name A, B or SIGMA",
                    static_cast<long long>(line_no));
      }
      current = line;
      if (sections.count(current)) {
        throw Error(ErrorKind::Parse, "duplicate section " + current);
      }
      sections[current];
      continue;
    }
    std::vector<double> row;
    for (auto f : split_tabs(line)) row.push_back(require_double(f, line_no));
    sections[current].push_back(std::move(row));
  }
  for (const char* name : {"A", "B", "SIGMA"}) {
    if (!sections.count(name)) {
      throw Error(ErrorKind::Parse, std::string("model file lacks section ") + name);
    }
  }
  const auto& a_rows = sections["A"];
  const auto p = a_rows.size();
  auto to_matrix = [&](const std::vector<std::vector<double>>& rows,
                       std::size_t r, std::size_t c, const char* name) {
    if (rows.size() != r) {
      throw Error(ErrorKind::Parse, std::string("section ") + name + " has wrong row count");
    }
    Matrix m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    for (std::size_t i = 0; i < r; ++i) {
      if (rows[i].size() != c) {
        throw Error(ErrorKind::Parse, std::string("section ") + name + " has wrong column count");
      }
      for (std::size_t j = 0; j < c; ++j)
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    return m;
  };
  if (p == 0) throw Error(ErrorKind::Parse, "empty A section");
  Matrix a = to_matrix(a_rows, p, p, "A");
  Matrix b = to_matrix(sections["B"], 1, p, "B");
  Matrix sigma = to_matrix(sections["SIGMA"], p, p, "SIGMA");
  return AR1Model(std::move(a), b.row(0).transpose(), std::move(sigma));
}

// --------------------------------------------------------------- PR curve

inline void write_pr_curve(std::ostream& out, const PRCurve& curve) {
  out << "recall\tprecision\tthreshold\n";
  for (const auto& pt : curve.points) {
    out << format_double(pt.recall) << '\t' << format_double(pt.precision)
        << '\t' << format_double(pt.threshold) << '\n';
  }
}

}  // namespace g1dbn::io
