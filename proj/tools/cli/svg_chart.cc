// Copyright 2026 The codeinterp Authors.
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

#include "svg_chart.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace codeinterp::cli {
namespace {

constexpr const char* kPalette[] = {"#4e79a7", "#f28e2b", "#59a14f", "#e15759",
                                    "#76b7b2", "#edc948", "#b07aa1", "#9c755f"};

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// 1, 2 or 5 times a power of ten, at least `v`.
double NiceCeil(double v) {
  if (v <= 0) return 1.0;
  const double p = std::pow(10.0, std::floor(std::log10(v)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * p >= v) return m * p;
  }
  return 10 * p;
}

std::string Text(double x, double y, const std::string& anchor, int size,
                 const std::string& body, const std::string& extra = "") {
  return "<text x=\"" + Num(x) + "\" y=\"" + Num(y) + "\" text-anchor=\"" + anchor +
         "\" font-size=\"" + std::to_string(size) + "\"" + extra + ">" + Escape(body) +
         "</text>\n";
}

}  // namespace

std::string RenderSvg(const BarChart& chart) {
  for (const BarSeries& s : chart.series) {
    if (s.values.size() != chart.groups.size()) {
      throw std::invalid_argument("series '" + s.name + "' does not match the groups");
    }
  }
  const double left = 70, right = 20, top = 50, bottom = 70;
  const double group_w = std::max(60.0, 28.0 * std::max<size_t>(1, chart.series.size()) + 20);
  const double plot_w = group_w * std::max<size_t>(1, chart.groups.size());
  const double plot_h = 300;
  const double legend_h = 20.0 * chart.series.size();
  const double width = left + plot_w + right;
  const double height = top + plot_h + bottom + legend_h;

  double data_max = 0;
  for (const BarSeries& s : chart.series) {
    for (double v : s.values) data_max = std::max(data_max, v);
  }
  const double y_max = chart.y_max > 0 ? chart.y_max : NiceCeil(data_max);
  auto y_of = [&](double v) { return top + plot_h * (1.0 - std::clamp(v / y_max, 0.0, 1.0)); };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + Num(width) +
                    "\" height=\"" + Num(height) + "\" viewBox=\"0 0 " + Num(width) + " " +
                    Num(height) + "\" font-family=\"sans-serif\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += Text(width / 2, 25, "middle", 16, chart.title);
  svg += Text(18, top + plot_h / 2, "middle", 12, chart.y_label,
              " transform=\"rotate(-90 18 " + Num(top + plot_h / 2) + ")\"");

  for (int i = 0; i <= 5; ++i) {
    const double v = y_max * i / 5.0;
    const double y = y_of(v);
    svg += "<line x1=\"" + Num(left) + "\" y1=\"" + Num(y) + "\" x2=\"" + Num(left + plot_w) +
           "\" y2=\"" + Num(y) + "\" stroke=\"#dddddd\"/>\n";
    char label[32];
    std::snprintf(label, sizeof label, "%g", v);
    svg += Text(left - 6, y + 4, "end", 11, label);
  }
  svg += "<line x1=\"" + Num(left) + "\" y1=\"" + Num(top + plot_h) + "\" x2=\"" +
         Num(left + plot_w) + "\" y2=\"" + Num(top + plot_h) + "\" stroke=\"black\"/>\n";

  const double bar_w = (group_w - 20) / std::max<size_t>(1, chart.series.size());
  for (size_t g = 0; g < chart.groups.size(); ++g) {
    const double gx = left + g * group_w + 10;
    for (size_t s = 0; s < chart.series.size(); ++s) {
      const double v = chart.series[s].values[g];
      const double x = gx + s * bar_w;
      const double y = y_of(v);
      svg += "<rect x=\"" + Num(x) + "\" y=\"" + Num(y) + "\" width=\"" + Num(bar_w - 2) +
             "\" height=\"" + Num(top + plot_h - y) + "\" fill=\"" +
             kPalette[s % std::size(kPalette)] + "\"/>\n";
      char label[48];
      std::snprintf(label, sizeof label, chart.value_format.c_str(), v);
      svg += Text(x + (bar_w - 2) / 2, y - 4, "middle", 10, label);
    }
    svg += Text(gx + (group_w - 20) / 2, top + plot_h + 18, "middle", 12, chart.groups[g]);
  }

  for (size_t s = 0; s < chart.series.size(); ++s) {
    const double y = top + plot_h + 45 + 20.0 * s;
    svg += "<rect x=\"" + Num(left) + "\" y=\"" + Num(y - 10) +
           "\" width=\"12\" height=\"12\" fill=\"" + kPalette[s % std::size(kPalette)] +
           "\"/>\n";
    svg += Text(left + 18, y, "start", 12, chart.series[s].name);
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace codeinterp::cli
