// SPDX-License-Identifier: Apache-2.0
#include "reslab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include <Eigen/SparseLU>

namespace reslab
{

namespace
{

double inf_norm(const SpMatC& L)
{
  Eigen::VectorXd rowsum = Eigen::VectorXd::Zero(L.rows());
  for (int k = 0; k < L.outerSize(); ++k)
    for (SpMatC::InnerIterator it(L, k); it; ++it)
      rowsum[it.row()] += std::abs(it.value());
  return rowsum.size() ? rowsum.maxCoeff() : 0.0;
}

// Deterministic start vector independent of library RNG internals.
struct Xorshift64
{
  std::uint64_t s;
  explicit Xorshift64(std::uint64_t seed) : s(seed ? seed : 0x9e3779b97f4a7c15ull) {}
  double next()
  {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return static_cast<double>(s >> 11) * 0x1.0p-53 - 0.5;
  }
};

struct Candidate
{
  Complex value;
  Eigen::VectorXcd vec;
  double residual;
};

// Rayleigh-quotient iteration polish. The Ritz pairs that barely pass the
// residual gate can still carry eigenvalue errors of order tol * ||L||; one
// or two inverse-iteration steps with the bilinear Rayleigh quotient bring
// them to near machine accuracy. Returns the factorization count.
int refine_pair(const SpMatC& L, double lnorm, int max_iter, Candidate& c)
{
  int fact = 0;
  const Complex lam0 = c.value;
  SpMatC eye(L.rows(), L.rows());
  eye.setIdentity();
  for (int it = 0; it < max_iter && c.residual > 1e-13; ++it)
  {
    SpMatC A = L - c.value * eye;
    A.makeCompressed();
    Eigen::SparseLU<SpMatC> lu;
    lu.compute(A);
    ++fact;
    if (lu.info() != Eigen::Success)
      break; // exactly singular: the pair is as converged as it gets
    Eigen::VectorXcd z = lu.solve(c.vec);
    if (!z.allFinite() || z.norm() == 0.0)
      break;
    z.normalize();
    Eigen::VectorXcd Lz = L * z;
    Complex lam = c.value;
    const Complex cc = z.transpose() * z;
    if (std::abs(cc) > 1e-8)
      lam = (z.transpose() * Lz).value() / cc;
    else
      lam = z.dot(Lz); // Hermitian fallback near an exceptional point
    // Guard against the iteration hopping to a different eigenvalue.
    if (std::abs(lam - lam0) > 1e-2 * std::max(1.0, std::abs(lam0)))
      break;
    const double res = (Lz - lam * z).cwiseAbs().maxCoeff() / lnorm;
    if (res >= c.residual)
      break;
    c.value = lam;
    c.vec = std::move(z);
    c.residual = res;
  }
  return fact;
}

} // namespace

WindowEig eigs_in_window(const SpMatC& L, double re_lo, double re_hi,
                         const WindowEigOptions& opt)
{
  const Eigen::Index n = L.rows();
  WindowEig out;
  if (n == 0 || re_hi <= re_lo)
    return out;

  const double lnorm = std::max(inf_norm(L), 1e-300);
  const double margin = opt.window_margin;

  std::vector<Candidate> pool;

  if (n <= opt.dense_threshold)
  {
    Eigen::MatrixXcd D(L);
    const bool is_real = D.imag().cwiseAbs().maxCoeff() == 0.0;
    const bool is_sym = (D - D.transpose()).cwiseAbs().maxCoeff() <= 1e-14 * lnorm;
    auto keep = [&](Complex lam, const Eigen::VectorXcd& v) {
      if (lam.real() < re_lo - margin || lam.real() > re_hi + margin)
        return;
      Candidate c;
      c.value = lam;
      c.vec = v;
      c.residual = (L * c.vec - lam * c.vec).cwiseAbs().maxCoeff() / lnorm;
      pool.push_back(std::move(c));
    };
    if (is_real && is_sym)
    {
      // Real-symmetric operators (no complex scaling) take the much faster
      // self-adjoint path; the complex QR would dominate the runtime.
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(D.real());
      if (solver.info() != Eigen::Success)
        throw ConvergenceError("eigs_in_window: dense symmetric eigensolver failed");
      for (Eigen::Index i = 0; i < n; ++i)
        keep(solver.eigenvalues()[i], solver.eigenvectors().col(i).cast<Complex>());
    }
    else
    {
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(D, true);
      if (solver.info() != Eigen::Success)
        throw ConvergenceError("eigs_in_window: dense eigensolver failed");
      for (Eigen::Index i = 0; i < n; ++i)
        keep(solver.eigenvalues()[i], solver.eigenvectors().col(i));
    }
    out.factorizations = 1;
  }
  else
  {
    const int nsh = std::max(1, static_cast<int>(std::ceil((re_hi - re_lo) / opt.spacing)));
    const double pitch = (re_hi - re_lo) / nsh;
    const double trust =
        opt.trust_radius > 0.0 ? opt.trust_radius : std::max(3.0, 1.8 * pitch);
    const int m = std::min<int>(opt.krylov, static_cast<int>(n) - 1);

    SpMatC eye(n, n);
    eye.setIdentity();

    for (int k = 0; k < nsh; ++k)
    {
      Complex sigma(re_lo + (k + 0.5) * pitch, opt.shift_imag);
      Eigen::SparseLU<SpMatC> lu;
      for (int attempt = 0; attempt < 2; ++attempt)
      {
        SpMatC A = L - sigma * eye;
        A.makeCompressed();
        lu.compute(A);
        ++out.factorizations;
        if (lu.info() == Eigen::Success)
          break;
        sigma += Complex(0.013, -0.029) * std::max(pitch, 1e-3);
      }
      if (lu.info() != Eigen::Success)
      {
        out.warnings.push_back("factorization failed near shift re=" +
                               std::to_string(sigma.real()));
        continue;
      }

      // Arnoldi on (L - sigma)^{-1} with twice-reorthogonalized MGS. Two
      // independently seeded runs share the factorization: a single Krylov
      // space carries only one direction of a degenerate eigenspace, so a
      // second start vector is needed to recover the partner state.
      constexpr std::uint64_t seeds[2] = {0x5eedbeefull, 0xfacefeedull};
      for (std::uint64_t seed : seeds)
      {
        Eigen::MatrixXcd V(n, m + 1);
        Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(m + 1, m);
        {
          Xorshift64 rng(seed ^ static_cast<std::uint64_t>(n));
          Eigen::VectorXcd v0(n);
          for (Eigen::Index i = 0; i < n; ++i)
            v0[i] = Complex(rng.next(), rng.next());
          V.col(0) = v0 / v0.norm();
        }
        int m_eff = m;
        for (int j = 0; j < m; ++j)
        {
          Eigen::VectorXcd w = lu.solve(V.col(j));
          for (int pass = 0; pass < 2; ++pass)
            for (int i = 0; i <= j; ++i)
            {
              const Complex hij = V.col(i).dot(w);
              w -= hij * V.col(i);
              H(i, j) += hij;
            }
          const double hn = w.norm();
          H(j + 1, j) = hn;
          if (hn < 1e-12)
          {
            m_eff = j + 1;
            break;
          }
          V.col(j + 1) = w / hn;
        }

        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ritz(H.topLeftCorner(m_eff, m_eff),
                                                         true);
        if (ritz.info() != Eigen::Success)
        {
          out.warnings.push_back("Ritz solve failed near shift re=" +
                                 std::to_string(sigma.real()));
          continue;
        }
        for (Eigen::Index r = 0; r < m_eff; ++r)
        {
          const Complex theta = ritz.eigenvalues()[r];
          if (std::abs(theta) < 1e-14)
            continue;
          Complex lam = sigma + 1.0 / theta;
          if (std::abs(lam - sigma) > trust)
            continue;
          if (lam.real() < re_lo - margin || lam.real() > re_hi + margin)
            continue;

          Eigen::VectorXcd x = V.leftCols(m_eff) * ritz.eigenvectors().col(r);
          x /= x.norm();
          Eigen::VectorXcd Lx = L * x;
          double res = (Lx - lam * x).cwiseAbs().maxCoeff() / lnorm;

          // One c-product Rayleigh update usually buys an order of magnitude.
          const Complex c = x.transpose() * x;
          if (std::abs(c) > 1e-6)
          {
            const Complex lam2 = (x.transpose() * Lx).value() / c;
            const double res2 = (Lx - lam2 * x).cwiseAbs().maxCoeff() / lnorm;
            if (res2 < res)
            {
              lam = lam2;
              res = res2;
            }
          }
          if (res > opt.residual_tol)
            continue;
          Candidate cand;
          cand.value = lam;
          cand.vec = std::move(x);
          cand.residual = res;
          pool.push_back(std::move(cand));
        }
      }
    }
  }

  // Pre-collapse repeated finds of one state before the (factorization-heavy)
  // polish: same value and essentially the same direction means the same
  // state. Partners of a degenerate eigenvalue arrive with distinct
  // directions and survive to the rank-revealing merge below.
  std::sort(pool.begin(), pool.end(), [](const Candidate& a, const Candidate& b) {
    if (a.value.real() != b.value.real())
      return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  });
  const double near_tol = 1e-4 * std::max({1.0, std::abs(re_lo), std::abs(re_hi)});
  std::vector<char> dead(pool.size(), 0);
  for (std::size_t i = 0; i < pool.size(); ++i)
  {
    if (dead[i])
      continue;
    for (std::size_t j = i + 1; j < pool.size(); ++j)
    {
      if (pool[j].value.real() - pool[i].value.real() > near_tol)
        break;
      if (dead[j] || std::abs(pool[j].value - pool[i].value) > near_tol)
        continue;
      if (std::abs(pool[i].vec.dot(pool[j].vec)) > 0.9995)
      {
        if (pool[j].residual < pool[i].residual)
          std::swap(pool[i], pool[j]);
        dead[j] = 1;
      }
    }
  }
  {
    std::vector<Candidate> alive;
    alive.reserve(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i)
      if (!dead[i])
        alive.push_back(std::move(pool[i]));
    pool = std::move(alive);
  }

  // Polish marginal pairs so duplicates of one eigenvalue agree far below the
  // merge tolerance and widths of genuinely real eigenvalues come out clean.
  if (opt.refine_iters > 0)
    for (auto& c : pool)
      if (c.residual > 1e-13)
        out.factorizations += refine_pair(L, lnorm, opt.refine_iters, c);

  // Merge duplicates found from neighboring shifts or start vectors, keeping
  // degenerate partners apart. Clusters of numerically equal values are
  // rank-revealed by Gram-Schmidt: a repeated find of the same state deflates
  // to noise (and the amplified noise fails the direct residual check), while
  // a genuinely independent partner survives with its own Rayleigh quotient.
  std::sort(pool.begin(), pool.end(), [](const Candidate& a, const Candidate& b) {
    if (a.value.real() != b.value.real())
      return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  });
  const double merge_tol =
      1e-7 * std::max({1.0, std::abs(re_lo), std::abs(re_hi)});
  std::vector<Candidate> merged;
  std::size_t c0 = 0;
  while (c0 < pool.size())
  {
    std::size_t c1 = c0 + 1;
    while (c1 < pool.size() && std::abs(pool[c1].value - pool[c1 - 1].value) < merge_tol)
      ++c1;
    if (c1 - c0 == 1)
    {
      merged.push_back(std::move(pool[c0]));
      c0 = c1;
      continue;
    }
    std::vector<Candidate*> members;
    for (std::size_t k = c0; k < c1; ++k)
      members.push_back(&pool[k]);
    std::stable_sort(members.begin(), members.end(),
                     [](const Candidate* a, const Candidate* b) {
                       return a->residual < b->residual;
                     });
    std::vector<Eigen::VectorXcd> kept;
    for (Candidate* mem : members)
    {
      Eigen::VectorXcd w = mem->vec;
      for (int pass = 0; pass < 2; ++pass)
        for (const Eigen::VectorXcd& k : kept)
          w -= k.dot(w) * k;
      if (w.norm() < 0.05)
        continue;
      w.normalize();
      Eigen::VectorXcd Lw = L * w;
      Complex lam;
      const Complex cc = w.transpose() * w;
      if (std::abs(cc) > 1e-6)
        lam = (w.transpose() * Lw).value() / cc;
      else
        lam = w.dot(Lw);
      const double res = (Lw - lam * w).cwiseAbs().maxCoeff() / lnorm;
      if (res > opt.residual_tol)
        continue;
      kept.push_back(w);
      Candidate c;
      c.value = lam;
      c.vec = std::move(w);
      c.residual = res;
      merged.push_back(std::move(c));
    }
    if (kept.empty()) // noisy cluster: fall back to the best original find
      merged.push_back(std::move(*members.front()));
    c0 = c1;
  }
  std::sort(merged.begin(), merged.end(), [](const Candidate& a, const Candidate& b) {
    if (a.value.real() != b.value.real())
      return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  });

  out.values.reserve(merged.size());
  out.residuals.reserve(merged.size());
  out.vectors.resize(n, static_cast<Eigen::Index>(merged.size()));
  for (std::size_t i = 0; i < merged.size(); ++i)
  {
    out.values.push_back(merged[i].value);
    out.residuals.push_back(merged[i].residual);
    out.vectors.col(static_cast<Eigen::Index>(i)) = merged[i].vec;
  }
  return out;
}

} // namespace reslab
