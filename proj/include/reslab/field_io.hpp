// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "reslab/assembly.hpp"

namespace reslab
{

// Uniform |Phi|^2 map over the cavity rectangle, as stored in the grid field
// file: values[r * nx + i] sits at (x0 + i*h, y0 + r*h), rows y-ascending.
struct FieldMap
{
  int nx = 0, ny = 0;
  double h = 0.0, x0 = 0.0, y0 = 0.0;
  std::vector<double> values;

  double at(int i, int r) const
  {
    return values[static_cast<std::size_t>(r) * static_cast<std::size_t>(nx) + i];
  }
};

// Samples |Phi|^2 of a solution vector over the cavity rectangle on a square
// lattice of spacing hx. Wall, scatterer, and sealed-aperture points are
// zero. When the row spacing hy differs from hx the field is interpolated
// linearly in y; if hx does not divide the cavity height exactly, the bottom
// row starts at the lowest multiple of hx above the wall (the sub-cell
// sliver at the wall, where the field vanishes anyway, is dropped).
FieldMap sample_field(const DomainLayout& layout, const Eigen::VectorXcd& field);

// Writes the map in the grid field file format: one header line
//   # billiard-field v1, nx=<int> ny=<int> h=<float> x0=<float> y0=<float>
// then ny rows of nx space-separated values with 17 significant digits.
// Bytes are deterministic for fixed inputs. Throws IoError on write failure.
void export_field(const DomainLayout& layout, const Eigen::VectorXcd& field,
                  const std::string& path);

// Parses a grid field file back. Throws IoError if the file cannot be read,
// ParseError on malformed header or rows.
FieldMap read_field(const std::string& path);

} // namespace reslab
