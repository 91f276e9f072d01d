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

#ifndef CODEINTERP_TOOLS_CLI_SVG_CHART_H_
#define CODEINTERP_TOOLS_CLI_SVG_CHART_H_

#include <string>
#include <vector>

namespace codeinterp::cli {

struct BarSeries {
  std::string name;
  std::vector<double> values;  // one per group
};

struct BarChart {
  std::string title;
  std::string y_label;
  std::vector<std::string> groups;
  std::vector<BarSeries> series;
  // Printed above each bar, e.g. "%.0f" or "%.2f%%".
  std::string value_format = "%.0f";
  // Upper end of the y axis; 0 picks one from the data.
  double y_max = 0.0;
};

// Static grouped bar chart. Output depends only on the chart contents.
std::string RenderSvg(const BarChart& chart);

}  // namespace codeinterp::cli

#endif  // CODEINTERP_TOOLS_CLI_SVG_CHART_H_
