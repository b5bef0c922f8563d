// SPDX-License-Identifier: Apache-2.0
#include "reslab/eig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace reslab
{

namespace
{

// Flip the overall sign so the largest-modulus component has its phase in
// (-pi/2, pi/2]: Re > 0, or Re == 0 and Im > 0. This is the only gauge freedom
// left once v^T v = 1 is imposed.
void fix_sign(Eigen::VectorXcd& v)
{
  Eigen::Index imax = 0;
  double best = -1.0;
  for (Eigen::Index k = 0; k < v.size(); ++k)
  {
    double a = std::abs(v[k]);
    if (a > best)
    {
      best = a;
      imax = k;
    }
  }
  const Complex& c = v[imax];
  if (c.real() < 0.0 || (c.real() == 0.0 && c.imag() < 0.0))
    v = -v;
}

} // namespace

std::pair<double, bool> c_normalize(Eigen::VectorXcd& v)
{
  const Complex c = v.transpose() * v;
  if (std::abs(c) < 1e-12)
    return {std::numeric_limits<double>::infinity(), true};
  v /= std::sqrt(c);
  fix_sign(v);
  return {v.squaredNorm(), false};
}

ResonanceSet eig_complex_symmetric(const Eigen::MatrixXcd& H)
{
  if (H.rows() != H.cols())
    throw DimensionMismatchError("eig_complex_symmetric: matrix must be square");

  const double scale = H.cwiseAbs().maxCoeff();
  const double asym = (H - H.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(scale, 1.0))
    throw NonSymmetricError("eig_complex_symmetric: matrix is not complex-symmetric "
                            "(max asymmetry " +
                            std::to_string(asym) + ")");

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(H, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success)
    throw ConvergenceError("eig_complex_symmetric: dense eigensolver did not converge");

  const Eigen::Index n = H.rows();
  ResonanceSet set;
  set.states.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
  {
    ResonanceState st;
    st.energy = ComplexEnergy(solver.eigenvalues()[i]);
    // Near an exceptional point the c-norm vanishes and the state cannot be
    // c-normalized; c_normalize then leaves the unit-Hermitian-norm vector
    // and flags it.
    Eigen::VectorXcd v = solver.eigenvectors().col(i);
    std::tie(st.norm_sq, st.degenerate) = c_normalize(v);
    st.vector = std::move(v);
    set.states.push_back(std::move(st));
  }

  std::sort(set.states.begin(), set.states.end(),
            [](const ResonanceState& a, const ResonanceState& b) {
              if (a.energy.re != b.energy.re)
                return a.energy.re < b.energy.re;
              return a.energy.im > b.energy.im;
            });

  set.biorthogonality = biorthogonality_measure(set);
  return set;
}

Eigen::VectorXcd mixing_coefficients(const ResonanceState& state,
                                     const Eigen::MatrixXcd& basis)
{
  if (basis.rows() != state.vector.size())
    throw DimensionMismatchError("mixing_coefficients: basis has " +
                                 std::to_string(basis.rows()) + " rows, vector has " +
                                 std::to_string(state.vector.size()));
  return basis.adjoint() * state.vector;
}

double biorthogonality_measure(const ResonanceSet& set)
{
  double sum = 0.0;
  std::size_t n = 0;
  for (const ResonanceState& st : set.states)
  {
    if (st.degenerate)
      continue;
    sum += st.norm_sq;
    ++n;
  }
  if (n == 0)
    return std::numeric_limits<double>::quiet_NaN();
  return sum / static_cast<double>(n);
}

} // namespace reslab
