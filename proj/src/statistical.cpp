// SPDX-License-Identifier: Apache-2.0
#include "reslab/statistical.hpp"

#include <cmath>
#include <string>

namespace reslab
{

namespace
{

void check_symmetric(const Eigen::MatrixXd& M, const char* name)
{
  if (M.rows() != M.cols())
    throw DimensionMismatchError(std::string(name) + " must be square");
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  const double asym = (M - M.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale)
    throw NonSymmetricError(std::string(name) + " is not symmetric (max asymmetry " +
                            std::to_string(asym) + ")");
}

} // namespace

Eigen::MatrixXcd build_statistical(const StatisticalParams& p)
{
  check_symmetric(p.H0, "H0");
  const Eigen::Index n = p.H0.rows();

  Eigen::MatrixXd rew = p.ReW;
  if (rew.size() == 0)
    rew = Eigen::MatrixXd::Zero(n, n);
  check_symmetric(rew, "ReW");
  if (rew.rows() != n)
    throw DimensionMismatchError("ReW must match H0 in size");

  if (p.V.rows() != n)
    throw DimensionMismatchError("V must have one row per level");
  if (p.V.cols() < 1)
    throw ValidationError("V", "at least one channel column required");

  const Eigen::MatrixXd VVt = p.V * p.V.transpose();
  return (p.H0 + rew).cast<Complex>() - Complex(0.0, 1.0) * VVt.cast<Complex>();
}

Eigen::MatrixXcd dressed_couplings(const ResonanceSet& set, const Eigen::MatrixXd& V)
{
  const Eigen::Index n_res = static_cast<Eigen::Index>(set.size());
  Eigen::MatrixXcd gamma(n_res, V.cols());
  for (Eigen::Index r = 0; r < n_res; ++r)
  {
    const ResonanceState& st = set[static_cast<std::size_t>(r)];
    if (st.vector.size() != V.rows())
      throw DimensionMismatchError("dressed_couplings: vector length " +
                                   std::to_string(st.vector.size()) + " vs V rows " +
                                   std::to_string(V.rows()));
    // Bilinear contraction: the c-normalized eigenfunction is not conjugated.
    gamma.row(r) = (V.transpose().cast<Complex>() * st.vector).transpose();
  }
  return gamma;
}

Eigen::MatrixXcd resonance_s_matrix(const std::vector<ComplexEnergy>& poles,
                                    const Eigen::MatrixXcd& couplings, double E)
{
  const Eigen::Index n_res = static_cast<Eigen::Index>(poles.size());
  if (couplings.rows() != n_res)
    throw DimensionMismatchError("resonance_s_matrix: one coupling row per pole required");
  const Eigen::Index n_ch = couplings.cols();

  for (const ComplexEnergy& p : poles)
  {
    if (std::abs(E - p.re) < 1e-12 && p.width() < 1e-12)
      throw PoleOnAxisError("resonance_s_matrix: E = " + std::to_string(E) +
                            " coincides with a zero-width pole");
  }

  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(n_ch, n_ch);
  for (Eigen::Index r = 0; r < n_res; ++r)
  {
    const Complex den = Complex(E, 0.0) - poles[static_cast<std::size_t>(r)].value();
    S.noalias() += (couplings.row(r).transpose() * couplings.row(r)) / den;
  }
  return Complex(0.0, 1.0) * S;
}

} // namespace reslab
