// SPDX-License-Identifier: Apache-2.0
#include "reslab/field_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace reslab
{

FieldMap sample_field(const DomainLayout& layout, const Eigen::VectorXcd& field)
{
  if (field.size() != layout.n())
    throw DimensionMismatchError("sample_field: vector does not match the layout");
  const Grid& gr = layout.grid;

  // complex value at lattice node (i, j); zero off the unknowns (walls,
  // scatterer interior, sealed aperture)
  auto node_value = [&](int i, int j) -> Complex {
    const int dof = layout.dof_at(i, j);
    return dof >= 0 ? field[dof] : Complex(0.0, 0.0);
  };

  FieldMap map;
  map.h = gr.hx;
  map.x0 = BilliardGeometry::x_l;
  map.nx = gr.nx + 1;
  const double height = layout.geom.height();
  const int rows_below = static_cast<int>(std::floor(height / gr.hx + 1e-9));
  map.ny = rows_below + 1;
  map.y0 = -rows_below * gr.hx;
  map.values.resize(static_cast<std::size_t>(map.nx) * map.ny);

  for (int r = 0; r < map.ny; ++r)
  {
    const double y = map.y0 + r * gr.hx;
    // fractional lattice row; y <= 0 so t is measured downward from row j_hi
    const double jr = y / gr.hy;
    int j0 = static_cast<int>(std::floor(jr + 1e-9));
    double t = jr - j0;
    if (t < 1e-9)
      t = 0.0;
    if (j0 < -gr.ny_cav)
    {
      j0 = -gr.ny_cav;
      t = 0.0;
    }
    for (int i = 0; i < map.nx; ++i)
    {
      const Complex v = t == 0.0 ? node_value(i, j0)
                                 : (1.0 - t) * node_value(i, j0) + t * node_value(i, j0 + 1);
      map.values[static_cast<std::size_t>(r) * map.nx + i] = std::norm(v);
    }
  }
  return map;
}

void export_field(const DomainLayout& layout, const Eigen::VectorXcd& field,
                  const std::string& path)
{
  const FieldMap map = sample_field(layout, field);
  std::ofstream out(path);
  if (!out)
    throw IoError("cannot open " + path + " for writing");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", map.h);
  out << "# billiard-field v1, nx=" << map.nx << " ny=" << map.ny << " h=" << buf;
  std::snprintf(buf, sizeof buf, "%.17g", map.x0);
  out << " x0=" << buf;
  std::snprintf(buf, sizeof buf, "%.17g", map.y0);
  out << " y0=" << buf << "\n";
  for (int r = 0; r < map.ny; ++r)
  {
    for (int i = 0; i < map.nx; ++i)
    {
      std::snprintf(buf, sizeof buf, "%.17g", map.at(i, r));
      out << (i ? " " : "") << buf;
    }
    out << "\n";
  }
  out.flush();
  if (!out)
    throw IoError("write failed for " + path);
}

FieldMap read_field(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open " + path);
  std::string header;
  if (!std::getline(in, header))
    throw ParseError(1, "missing field header");
  FieldMap map;
  if (std::sscanf(header.c_str(), "# billiard-field v1, nx=%d ny=%d h=%lf x0=%lf y0=%lf",
                  &map.nx, &map.ny, &map.h, &map.x0, &map.y0) != 5)
    throw ParseError(1, "malformed field header: " + header);
  if (map.nx <= 0 || map.ny <= 0 || map.h <= 0.0)
    throw ParseError(1, "non-positive field dimensions");
  map.values.reserve(static_cast<std::size_t>(map.nx) * map.ny);
  std::string line;
  for (int r = 0; r < map.ny; ++r)
  {
    if (!std::getline(in, line))
      throw ParseError(r + 2, "missing field row");
    std::istringstream row(line);
    double v = 0.0;
    int count = 0;
    while (row >> v)
    {
      map.values.push_back(v);
      ++count;
    }
    if (count != map.nx)
      throw ParseError(r + 2, "expected " + std::to_string(map.nx) + " values, found " +
                                  std::to_string(count));
  }
  return map;
}

} // namespace reslab
