#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

// Minimal self-contained SVG line/scatter charts. Output is data-first: CSV
// carries the numbers, the chart is a static companion file.

namespace blockcast {

struct ChartSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
  bool scatter = false;
};

inline void write_svg_chart(const std::string& path, const std::string& title,
                            const std::string& xlabel, const std::string& ylabel,
                            const std::vector<ChartSeries>& series) {
  const int W = 860, H = 520, ml = 70, mr = 20, mt = 40, mb = 50;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (xmin > xmax) {
    xmin = 0;
    xmax = 1;
  }
  if (ymin > ymax) {
    ymin = 0;
    ymax = 1;
  }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + (std::fabs(ymin) > 0 ? std::fabs(ymin) * 0.1 : 1.0);
  const double px = (W - ml - mr) / (xmax - xmin);
  const double py = (H - mt - mb) / (ymax - ymin);
  auto X = [&](double x) { return ml + (x - xmin) * px; };
  auto Y = [&](double y) { return H - mb - (y - ymin) * py; };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  std::ostringstream os;
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
  os << "<rect width='100%' height='100%' fill='white'/>\n";
  os << "<text x='" << W / 2 << "' y='24' text-anchor='middle' font-size='16'>" << title
     << "</text>\n";
  // axes
  os << "<line x1='" << ml << "' y1='" << H - mb << "' x2='" << W - mr << "' y2='" << H - mb
     << "' stroke='black'/>\n";
  os << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << H - mb
     << "' stroke='black'/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double xv = xmin + (xmax - xmin) * k / 5.0;
    const double yv = ymin + (ymax - ymin) * k / 5.0;
    os << "<text x='" << X(xv) << "' y='" << H - mb + 18
       << "' text-anchor='middle' font-size='11'>" << xv << "</text>\n";
    os << "<text x='" << ml - 6 << "' y='" << Y(yv) + 4
       << "' text-anchor='end' font-size='11'>" << yv << "</text>\n";
    os << "<line x1='" << ml << "' y1='" << Y(yv) << "' x2='" << W - mr << "' y2='" << Y(yv)
       << "' stroke='#dddddd'/>\n";
  }
  os << "<text x='" << W / 2 << "' y='" << H - 10 << "' text-anchor='middle' font-size='13'>"
     << xlabel << "</text>\n";
  os << "<text x='18' y='" << H / 2 << "' text-anchor='middle' font-size='13' transform='rotate(-90 18 "
     << H / 2 << ")'>" << ylabel << "</text>\n";
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* col = colors[si % 5];
    if (s.scatter) {
      for (const auto& [x, y] : s.points)
        os << "<circle cx='" << X(x) << "' cy='" << Y(y) << "' r='3' fill='" << col << "'/>\n";
    } else {
      os << "<polyline fill='none' stroke='" << col << "' stroke-width='1.5' points='";
      for (const auto& [x, y] : s.points) os << X(x) << "," << Y(y) << " ";
      os << "'/>\n";
    }
    os << "<text x='" << W - mr - 10 << "' y='" << mt + 16 * (si + 1)
       << "' text-anchor='end' font-size='12' fill='" << col << "'>" << s.label << "</text>\n";
  }
  os << "</svg>\n";
  std::ofstream f(path);
  f << os.str();
}

}  // namespace blockcast
