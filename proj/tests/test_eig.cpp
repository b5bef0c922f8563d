// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "reslab/eig.hpp"

using namespace reslab;

namespace
{

Eigen::MatrixXcd random_complex_symmetric(int n, std::mt19937_64& rng)
{
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXcd H(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
    {
      const Complex z(u(rng), u(rng));
      H(i, j) = z;
      H(j, i) = z;
    }
  return H;
}

} // namespace

TEST_CASE("diagonal matrix: eigenvalues in order, unit vectors, B = 1")
{
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(2, 2);
  H(1, 1) = 1.0;
  const ResonanceSet set = eig_complex_symmetric(H);
  REQUIRE(set.size() == 2);
  CHECK(std::abs(set[0].energy.value() - Complex(0, 0)) < 1e-12);
  CHECK(std::abs(set[1].energy.value() - Complex(1, 0)) < 1e-12);
  CHECK(std::abs(set[0].vector[0] - 1.0) < 1e-12);
  CHECK(std::abs(set[0].vector[1]) < 1e-12);
  CHECK(std::abs(set[1].vector[1] - 1.0) < 1e-12);
  CHECK(set.biorthogonality == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("imaginary off-diagonal 2x2: hand-solved eigenpairs and B = 5/3")
{
  // H = [[0, 0.4i], [0.4i, 1]]: eigenvalues 0.2 and 0.8 with eigenvectors
  // (2, -i)/sqrt(3) and (0.4i, 0.8)/sqrt(0.48); both have <v|v> = 5/3.
  Eigen::MatrixXcd H(2, 2);
  H << Complex(0, 0), Complex(0, 0.4), Complex(0, 0.4), Complex(1, 0);
  const ResonanceSet set = eig_complex_symmetric(H);
  REQUIRE(set.size() == 2);
  CHECK(std::abs(set[0].energy.value() - Complex(0.2, 0)) < 1e-10);
  CHECK(std::abs(set[1].energy.value() - Complex(0.8, 0)) < 1e-10);

  const double s3 = std::sqrt(3.0);
  CHECK(std::abs(set[0].vector[0] - Complex(2.0 / s3, 0)) < 1e-9);
  CHECK(std::abs(set[0].vector[1] - Complex(0, -1.0 / s3)) < 1e-9);
  const double s048 = std::sqrt(0.48);
  CHECK(std::abs(set[1].vector[0] - Complex(0, 0.4 / s048)) < 1e-9);
  CHECK(std::abs(set[1].vector[1] - Complex(0.8 / s048, 0)) < 1e-9);

  CHECK(std::abs(set[0].norm_sq - 5.0 / 3.0) < 1e-9);
  CHECK(std::abs(set[1].norm_sq - 5.0 / 3.0) < 1e-9);
  CHECK(std::abs(set.biorthogonality - 5.0 / 3.0) < 1e-9);
  CHECK(std::abs(biorthogonality_measure(set) - 5.0 / 3.0) < 1e-9);
}

TEST_CASE("branch point 2x2: coincident eigenvalues reported degenerate")
{
  // H = [[0, 0.5i], [0.5i, 1]] is defective: double eigenvalue 0.5 whose
  // eigenvector (i, 1) is exactly self-orthogonal under the c-product.
  Eigen::MatrixXcd H(2, 2);
  H << Complex(0, 0), Complex(0, 0.5), Complex(0, 0.5), Complex(1, 0);
  const ResonanceSet set = eig_complex_symmetric(H);
  REQUIRE(set.size() == 2);
  CHECK(std::abs(set[0].energy.value() - Complex(0.5, 0)) < 1e-6);
  CHECK(std::abs(set[1].energy.value() - Complex(0.5, 0)) < 1e-6);
  CHECK(set[0].degenerate);
  CHECK(set[1].degenerate);
  CHECK(std::isnan(set.biorthogonality));
}

TEST_CASE("non-symmetric input rejected")
{
  Eigen::MatrixXcd H(2, 2);
  H << 0.0, 1.0, 2.0, 0.0;
  CHECK_THROWS_AS(eig_complex_symmetric(H), NonSymmetricError);
}

TEST_CASE("random complex-symmetric matrices: residual, trace, c-orthogonality, B >= 1")
{
  std::mt19937_64 rng(20240817u);
  for (int trial = 0; trial < 40; ++trial)
  {
    const int n = 2 + static_cast<int>(rng() % 49); // up to 50
    const Eigen::MatrixXcd H = random_complex_symmetric(n, rng);
    const ResonanceSet set = eig_complex_symmetric(H);
    REQUIRE(static_cast<int>(set.size()) == n);

    const double hnorm = H.cwiseAbs().rowwise().sum().maxCoeff();

    Complex trace_sum(0, 0);
    for (const auto& st : set)
    {
      trace_sum += st.energy.value();
      if (st.degenerate)
        continue;
      const Eigen::VectorXcd r = H * st.vector - st.energy.value() * st.vector;
      CHECK(r.cwiseAbs().maxCoeff() <= 1e-9 * hnorm);
      const Complex c = st.vector.transpose() * st.vector;
      CHECK(std::abs(c - 1.0) < 1e-10);
      CHECK(st.norm_sq >= 1.0 - 1e-10);
    }
    CHECK(std::abs(trace_sum - H.trace()) <= 1e-9 * hnorm);
    CHECK(set.biorthogonality >= 1.0 - 1e-10);

    // c-orthogonality of distinct, well-separated eigenvalues.
    for (std::size_t i = 0; i < set.size(); ++i)
      for (std::size_t j = i + 1; j < set.size(); ++j)
      {
        if (set[i].degenerate || set[j].degenerate)
          continue;
        if (std::abs(set[i].energy.value() - set[j].energy.value()) < 1e-6 * hnorm)
          continue;
        const Complex c = set[i].vector.transpose() * set[j].vector;
        CHECK(std::abs(c) < 1e-8);
      }
  }
}

TEST_CASE("real symmetric input: B = 1 within 1e-10 and real vectors")
{
  std::mt19937_64 rng(7u);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial)
  {
    const int n = 3 + static_cast<int>(rng() % 20);
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
      {
        A(i, j) = u(rng);
        A(j, i) = A(i, j);
      }
    const ResonanceSet set = eig_complex_symmetric(A.cast<Complex>());
    CHECK(std::abs(set.biorthogonality - 1.0) <= 1e-10);
    for (const auto& st : set)
      CHECK(st.vector.imag().cwiseAbs().maxCoeff() < 1e-7);
  }
}

TEST_CASE("mixing coefficients: identity basis and decoupled delta property")
{
  ResonanceState st;
  st.vector = Eigen::VectorXcd(2);
  st.vector << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const Eigen::MatrixXcd I2 = Eigen::MatrixXcd::Identity(2, 2);
  const Eigen::VectorXcd b = mixing_coefficients(st, I2);
  CHECK(std::abs(b[0] - 0.7071067811865475) < 1e-12);
  CHECK(std::abs(b[1] - 0.7071067811865475) < 1e-12);

  // Zero coupling: eigenvectors of a real diagonal are the basis itself.
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(3, 3);
  H(0, 0) = 1.0;
  H(1, 1) = 2.0;
  H(2, 2) = 3.0;
  const ResonanceSet set = eig_complex_symmetric(H);
  const Eigen::MatrixXcd basis = Eigen::MatrixXcd::Identity(3, 3);
  for (int i = 0; i < 3; ++i)
  {
    const Eigen::VectorXcd bi = mixing_coefficients(set[i], basis);
    for (int j = 0; j < 3; ++j)
      CHECK(std::abs(bi[j] - (i == j ? 1.0 : 0.0)) < 1e-12);
  }

  Eigen::MatrixXcd wrong = Eigen::MatrixXcd::Identity(4, 4);
  CHECK_THROWS_AS(mixing_coefficients(st, wrong), DimensionMismatchError);
}

TEST_CASE("symmetric two-level mixing: equal weights 0.5 on both basis states")
{
  // Identical diagonal entries with real coupling: eigenvectors (1, +-1)/sqrt(2)
  // regardless of the coupling strength.
  Eigen::MatrixXcd H(2, 2);
  H << Complex(0, -0.5), Complex(0.3, 0), Complex(0.3, 0), Complex(0, -0.5);
  const ResonanceSet set = eig_complex_symmetric(H);
  const Eigen::MatrixXcd basis = Eigen::MatrixXcd::Identity(2, 2);
  for (int i = 0; i < 2; ++i)
  {
    const Eigen::VectorXcd b = mixing_coefficients(set[i], basis);
    CHECK(std::abs(std::norm(b[0]) - 0.5) < 1e-10);
    CHECK(std::abs(std::norm(b[1]) - 0.5) < 1e-10);
  }
}
