/*
 * Copyright 2026 The nocsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "nocsim/charts.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace nocsim {

std::string render_bar_chart_svg(const std::string& title,
                                 const std::vector<BarChartSeries>& bars) {
  const int width = 120 + static_cast<int>(bars.size()) * 90;
  const int height = 260;
  const int plot_h = 180;
  const int base_y = 220;

  double max_v = 0.0;
  for (const auto& b : bars) max_v = std::max(max_v, b.value);
  if (max_v <= 0.0) max_v = 1.0;

  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return std::string(buf);
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\">\n";
  os << "  <text x=\"" << width / 2
     << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"15\">"
     << title << "</text>\n";
  os << "  <line x1=\"50\" y1=\"" << base_y << "\" x2=\"" << (width - 20)
     << "\" y2=\"" << base_y << "\" stroke=\"black\"/>\n";

  for (std::size_t i = 0; i < bars.size(); ++i) {
    const double h = plot_h * bars[i].value / max_v;
    const int x = 70 + static_cast<int>(i) * 90;
    const int y = base_y - static_cast<int>(h);
    os << "  <rect x=\"" << x << "\" y=\"" << y << "\" width=\"50\" height=\""
       << (base_y - y) << "\" fill=\"#4878a8\"/>\n";
    os << "  <text x=\"" << (x + 25) << "\" y=\"" << (y - 6)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"12\">"
       << fmt(bars[i].value) << "</text>\n";
    os << "  <text x=\"" << (x + 25) << "\" y=\"" << (base_y + 18)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"12\">"
       << bars[i].label << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace nocsim
