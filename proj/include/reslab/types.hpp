// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace reslab
{

using Complex = std::complex<double>;

// A resonance energy E - (i/2)*Gamma. For decaying states im <= 0 and the
// width Gamma = -2*im is nonnegative; bound states of a closed system sit on
// the real axis (im == 0).
struct ComplexEnergy
{
  double re = 0.0;
  double im = 0.0;

  ComplexEnergy() = default;
  ComplexEnergy(double re_, double im_) : re(re_), im(im_) {}
  explicit ComplexEnergy(Complex z) : re(z.real()), im(z.imag()) {}

  Complex value() const { return {re, im}; }
  double width() const { return -2.0 * im; }
};

inline bool operator==(const ComplexEnergy& a, const ComplexEnergy& b)
{
  return a.re == b.re && a.im == b.im;
}

// One eigenstate of a complex-symmetric Hamiltonian. The vector carries the
// c-normalization v^T v = 1 (bilinear, no conjugation); norm_sq = <v|v> is the
// Hermitian self-overlap, >= 1 with equality only for real states. Near an
// exceptional point v^T v -> 0 and the state is flagged degenerate instead of
// being normalized into overflow.
struct ResonanceState
{
  ComplexEnergy energy;
  Eigen::VectorXcd vector;
  double norm_sq = 1.0;
  bool degenerate = false;
  // Expansion coefficients against a reference basis (filled on request by
  // mixing_coefficients; empty otherwise).
  Eigen::VectorXcd mixing;

  double width() const { return energy.width(); }
};

// Eigenstates of one Hamiltonian, sorted by (re asc, im desc).
// biorthogonality = (1/N) sum norm_sq over non-degenerate states; 1 for a
// Hermitian (real-symmetric) matrix, > 1 otherwise, NaN if every state is
// degenerate.
struct ResonanceSet
{
  std::vector<ResonanceState> states;
  double biorthogonality = 1.0;

  std::size_t size() const { return states.size(); }
  bool empty() const { return states.empty(); }
  const ResonanceState& operator[](std::size_t i) const { return states[i]; }
  auto begin() const { return states.begin(); }
  auto end() const { return states.end(); }
  auto begin() { return states.begin(); }
  auto end() { return states.end(); }
};

// ---------------------------------------------------------------------------
// Error taxonomy. Everything derives from Error (a runtime_error) so callers
// can catch coarsely; the CLI maps ParseError/ValidationError to exit code 1
// and the rest to exit code 2.

struct Error : std::runtime_error
{
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input matrix fails the complex-symmetry check H == H^T.
struct NonSymmetricError : Error
{
  using Error::Error;
};

// Incompatible dimensions between operands (e.g. mixing basis vs vector).
struct DimensionMismatchError : Error
{
  using Error::Error;
};

// Requested evaluation sits on (or numerically on) a pole of the S-matrix.
struct PoleOnAxisError : Error
{
  using Error::Error;
};

// Grid spacing too coarse to resolve the requested energy window.
struct GridTooCoarseError : Error
{
  using Error::Error;
};

// An iterative solver failed to reach its tolerance.
struct ConvergenceError : Error
{
  using Error::Error;
};

// A linear system turned out singular where it must not be.
struct SingularSystemError : Error
{
  using Error::Error;
};

// A diagnostic was requested on a window that contains no states.
struct EmptyWindowError : Error
{
  using Error::Error;
};

// Config file could not be parsed; carries the 1-based line number.
struct ParseError : Error
{
  int line = 0;
  ParseError(int line_, const std::string& msg)
      : Error("line " + std::to_string(line_) + ": " + msg), line(line_)
  {
  }
};

// Config parsed but a value violates a constraint; carries the key name.
struct ValidationError : Error
{
  std::string key;
  ValidationError(std::string key_, const std::string& constraint)
      : Error(key_ + ": " + constraint), key(std::move(key_))
  {
  }
};

// Filesystem-level failure writing or reading artifacts.
struct IoError : Error
{
  using Error::Error;
};

} // namespace reslab
