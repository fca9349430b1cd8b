// Copyright 2026 The qmem Authors
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

// Result tables as RFC-4180 CSV, and static SVG line plots.

#ifndef QMEM_IO_HPP_
#define QMEM_IO_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qmem/errors.hpp"

namespace qmem {

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  Table() = default;
  Table(std::string n, std::vector<std::string> cols) : name(std::move(n)), columns(std::move(cols)) {}

  std::string name;  ///< file stem
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) {
    detail::require(row.size() == columns.size(), "Table '" + name + "': row width does not match header");
    rows.push_back(std::move(row));
  }
};

/// 17 significant digits, round-trip exact.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string csv_field(const std::string &s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string format_cell(const Cell &c) {
  if (auto i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (auto d = std::get_if<double>(&c)) return format_double(*d);
  return csv_field(std::get<std::string>(c));
}

inline void write_csv(std::ostream &os, const Table &t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_field(t.columns[i]);
  os << "\r\n";
  for (const auto &row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_cell(row[i]);
    os << "\r\n";
  }
}

inline void write_text_file(const std::filesystem::path &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

inline std::string to_csv(const Table &t) {
  std::ostringstream os;
  write_csv(os, t);
  return os.str();
}

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct Plot {
  std::string name;  ///< file stem
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<Series> series;
};

namespace detail {

inline std::string xml_escape(const std::string &s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

}  // namespace detail

inline std::string render_svg(const Plot &p) {
  constexpr double W = 640, H = 420, L = 80, R = 20, T = 40, B = 60;
  static const char *colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  auto tx = [&](double v) { return p.log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return p.log_y ? std::log10(v) : v; };
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto &s : p.series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if ((p.log_x && !(s.x[i] > 0)) || (p.log_y && !(s.y[i] > 0))) continue;
      x0 = std::min(x0, tx(s.x[i]));
      x1 = std::max(x1, tx(s.x[i]));
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  auto px = [&](double v) { return L + (tx(v) - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double v) { return H - B - (ty(v) - y0) / (y1 - y0) * (H - T - B); };
  auto axis_label = [](double v, bool lg) { return lg ? "1e" + format_double(std::round(v * 100) / 100) : format_double(v); };

  std::ostringstream os;
  os.precision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
     << ' ' << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
     << detail::xml_escape(p.title) << "</text>\n";
  os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << L << "\" y=\"" << H - B + 16 << "\" font-family=\"sans-serif\" font-size=\"11\">"
     << axis_label(x0, p.log_x) << "</text>\n";
  os << "<text x=\"" << W - R << "\" y=\"" << H - B + 16
     << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << axis_label(x1, p.log_x) << "</text>\n";
  os << "<text x=\"" << L - 4 << "\" y=\"" << H - B
     << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << axis_label(y0, p.log_y) << "</text>\n";
  os << "<text x=\"" << L - 4 << "\" y=\"" << T + 10
     << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << axis_label(y1, p.log_y) << "</text>\n";
  os << "<text x=\"" << (W + L - R) / 2 << "\" y=\"" << H - 20
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << detail::xml_escape(p.x_label)
     << "</text>\n";
  os << "<text x=\"18\" y=\"" << (H - B + T) / 2 << "\" transform=\"rotate(-90 18 " << (H - B + T) / 2
     << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << detail::xml_escape(p.y_label)
     << "</text>\n";
  for (std::size_t k = 0; k < p.series.size(); ++k) {
    const auto &s = p.series[k];
    const char *color = colors[k % std::size(colors)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if ((p.log_x && !(s.x[i] > 0)) || (p.log_y && !(s.y[i] > 0))) continue;
      os << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    }
    os << "\"/>\n";
    os << "<text x=\"" << W - R - 6 << "\" y=\"" << T + 16 + 14 * static_cast<double>(k)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << color << "\">"
       << detail::xml_escape(s.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace qmem

#endif
