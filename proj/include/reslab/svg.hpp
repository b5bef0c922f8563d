// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace reslab
{

// Minimal deterministic SVG scatter/line plot: fixed canvas, automatic data
// ranges with nice decimal ticks, series colored from a fixed palette.
// Rendering the same data twice yields identical bytes (no timestamps, no
// random ids).
class SvgPlot
{
public:
  SvgPlot(std::string title, std::string x_label, std::string y_label);

  // Polyline through the points, in data coordinates.
  void add_line(const std::vector<double>& x, const std::vector<double>& y);
  // Circle markers at the points.
  void add_points(const std::vector<double>& x, const std::vector<double>& y);

  std::string render() const;

private:
  struct Series
  {
    std::vector<double> x, y;
    bool line = true;
  };
  std::string title_, x_label_, y_label_;
  std::vector<Series> series_;
};

} // namespace reslab
