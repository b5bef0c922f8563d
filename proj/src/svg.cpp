// SPDX-License-Identifier: Apache-2.0
#include "reslab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <utility>

namespace reslab
{

namespace
{

constexpr int kWidth = 720;
constexpr int kHeight = 480;
constexpr int kLeft = 70, kRight = 20, kTop = 40, kBottom = 55;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kPaletteSize = 8;

std::string fmt(double v, const char* spec = "%.2f")
{
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string escape(const std::string& s)
{
  std::string out;
  for (char c : s)
  {
    if (c == '&')
      out += "&amp;";
    else if (c == '<')
      out += "&lt;";
    else if (c == '>')
      out += "&gt;";
    else
      out.push_back(c);
  }
  return out;
}

struct Range
{
  double lo = 0.0;
  double hi = 1.0;
};

// Tick positions at a 1/2/5 decimal step covering the range.
std::vector<double> nice_ticks(const Range& r)
{
  const double span = r.hi - r.lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (raw <= m * mag)
    {
      step = m * mag;
      break;
    }
  std::vector<double> ticks;
  const double first = std::ceil(r.lo / step - 1e-9) * step;
  for (double t = first; t <= r.hi + 1e-9 * span; t += step)
    ticks.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
  return ticks;
}

} // namespace

SvgPlot::SvgPlot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label))
{
}

void SvgPlot::add_line(const std::vector<double>& x, const std::vector<double>& y)
{
  series_.push_back({x, y, true});
}

void SvgPlot::add_points(const std::vector<double>& x, const std::vector<double>& y)
{
  series_.push_back({x, y, false});
}

std::string SvgPlot::render() const
{
  Range rx, ry;
  bool any = false;
  for (const Series& s : series_)
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
    {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]))
        continue;
      if (!any)
      {
        rx = {s.x[i], s.x[i]};
        ry = {s.y[i], s.y[i]};
        any = true;
      }
      rx.lo = std::min(rx.lo, s.x[i]);
      rx.hi = std::max(rx.hi, s.x[i]);
      ry.lo = std::min(ry.lo, s.y[i]);
      ry.hi = std::max(ry.hi, s.y[i]);
    }
  auto widen = [](Range& r) {
    if (r.hi - r.lo < 1e-12 * std::max(1.0, std::abs(r.lo)))
    {
      const double pad = std::max(0.5, std::abs(r.lo) * 0.1);
      r.lo -= pad;
      r.hi += pad;
    }
    else
    {
      const double pad = 0.05 * (r.hi - r.lo);
      r.lo -= pad;
      r.hi += pad;
    }
  };
  widen(rx);
  widen(ry);

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + (v - rx.lo) / (rx.hi - rx.lo) * plot_w; };
  auto py = [&](double v) { return kTop + (ry.hi - v) / (ry.hi - ry.lo) * plot_h; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">"
      << escape(title_) << "</text>\n";

  // axes box
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << fmt(plot_w)
      << "\" height=\"" << fmt(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (double t : nice_ticks(rx))
  {
    const double x = px(t);
    out << "<line x1=\"" << fmt(x) << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << fmt(x)
        << "\" y2=\"" << fmt(kTop + plot_h + 5) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(kTop + plot_h + 20)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt(t, "%g") << "</text>\n";
  }
  for (double t : nice_ticks(ry))
  {
    const double y = py(t);
    out << "<line x1=\"" << fmt(kLeft - 5.0) << "\" y1=\"" << fmt(y) << "\" x2=\"" << kLeft
        << "\" y2=\"" << fmt(y) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fmt(kLeft - 8.0) << "\" y=\"" << fmt(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt(t, "%g") << "</text>\n";
  }
  out << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << escape(x_label_) << "</text>\n";
  out << "<text x=\"18\" y=\"" << kTop + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 18 "
      << kTop + plot_h / 2 << ")\">" << escape(y_label_) << "</text>\n";

  int color = 0;
  for (const Series& s : series_)
  {
    const char* c = kPalette[color % kPaletteSize];
    ++color;
    if (s.line)
    {
      out << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
      bool first = true;
      for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
      {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]))
          continue;
        if (!first)
          out << " ";
        out << fmt(px(s.x[i])) << "," << fmt(py(s.y[i]));
        first = false;
      }
      out << "\"/>\n";
    }
    else
    {
      for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
      {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]))
          continue;
        out << "<circle cx=\"" << fmt(px(s.x[i])) << "\" cy=\"" << fmt(py(s.y[i]))
            << "\" r=\"2.5\" fill=\"" << c << "\"/>\n";
      }
    }
  }
  out << "</svg>\n";
  return out.str();
}

} // namespace reslab
