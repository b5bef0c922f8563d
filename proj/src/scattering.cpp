// SPDX-License-Identifier: Apache-2.0
#include "reslab/scattering.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/SparseLU>

#include "reslab/billiard.hpp"

namespace reslab
{

namespace
{

constexpr double kPi = 3.141592653589793;

struct LeadModes
{
  std::vector<int> row_dofs;        // dofs of the matching row, by column
  Eigen::MatrixXd u;                // one column per transverse mode
  std::vector<Complex> lambda;      // per-step factor of the outgoing solution
};

// Outgoing/decaying root of lambda + 1/lambda = 2 + hy^2 (mu - E): the
// propagating branch carries flux away (positive imaginary part), the
// evanescent branch decays away from the cavity.
Complex outgoing_lambda(double mu, double E, double hy)
{
  const double b = 1.0 + hy * hy * (mu - E) / 2.0;
  if (b >= 1.0)
    return b - std::sqrt(b * b - 1.0);
  if (b <= -1.0)
    return b + std::sqrt(b * b - 1.0);
  return {b, std::sqrt(1.0 - b * b)};
}

LeadModes build_lead(const DomainLayout& L, int lead, double E, int n_modes)
{
  const Grid& gr = L.grid;
  LeadModes m;
  m.row_dofs = L.lead_row_dofs(lead, gr.js);
  const int n_t = static_cast<int>(m.row_dofs.size());
  const int C = std::min(n_modes, n_t);
  m.u.resize(n_t, C);
  m.lambda.resize(static_cast<std::size_t>(C));
  for (int c = 1; c <= C; ++c)
  {
    for (int a = 0; a < n_t; ++a)
      m.u(a, c - 1) = std::sqrt(2.0) * std::sin(c * kPi * (a + 1) * gr.hx);
    m.lambda[static_cast<std::size_t>(c - 1)] =
        outgoing_lambda(discrete_threshold(c, gr.hx), E, gr.hy);
  }
  return m;
}

} // namespace

double discrete_threshold(int c, double hx)
{
  const double s = std::sin(c * kPi * hx / 2.0);
  return 4.0 / (hx * hx) * s * s;
}

namespace
{

// One factorize-and-solve attempt at fixed matching depth. Returns false when
// the linear system is numerically singular.
bool solve_at_depth(const BilliardGeometry& g, const DiscretizationParams& d, double E,
                    ScatteringSolution& out)
{
  out.layout = build_layout(g, d, LeadTreatment::Dtn);
  const Grid& gr = out.layout.grid;
  const int n = out.layout.n();
  const double ihy2 = 1.0 / (gr.hy * gr.hy);

  SpMatC A = build_operator(out.layout, 0.0);
  {
    SpMatC eye(n, n);
    eye.setIdentity();
    A = A - Complex(E, 0.0) * eye;
  }

  const int n_leads = g.lead2_enabled ? 2 : 1;
  std::vector<LeadModes> leads;
  for (int l = 1; l <= n_leads; ++l)
    leads.push_back(build_lead(out.layout, l, E, d.n_modes));

  // Dirichlet-to-Neumann closure: the exterior row is expanded over the kept
  // transverse modes, u_ext = sum_c lambda_c <u_c, u_row> u_c, which turns
  // into a dense rank-C block coupling the matching-row dofs.
  std::vector<Eigen::Triplet<Complex>> extra;
  for (const LeadModes& lm : leads)
  {
    const int n_t = static_cast<int>(lm.row_dofs.size());
    for (int c = 0; c < static_cast<int>(lm.lambda.size()); ++c)
      for (int a = 0; a < n_t; ++a)
        for (int b = 0; b < n_t; ++b)
          extra.emplace_back(lm.row_dofs[static_cast<std::size_t>(a)],
                             lm.row_dofs[static_cast<std::size_t>(b)],
                             -ihy2 * lm.lambda[static_cast<std::size_t>(c)] *
                                 lm.u(a, c) * lm.u(b, c) * gr.hx);
  }
  {
    SpMatC D(n, n);
    D.setFromTriplets(extra.begin(), extra.end());
    A = A + D;
  }
  A.makeCompressed();

  Eigen::SparseLU<SpMatC> lu;
  lu.compute(A);
  ++out.factorizations;
  if (lu.info() != Eigen::Success)
    return false;

  // Incident unit mode-1 wave per lead, amplitude referenced at the matching
  // plane: moving the known incoming part of the exterior row to the right
  // hand side leaves b = (1/hy^2)(1/lambda_1 - lambda_1) u_1 on that row.
  Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(n, n_leads);
  for (int l = 0; l < n_leads; ++l)
  {
    const LeadModes& lm = leads[static_cast<std::size_t>(l)];
    const Complex l1 = lm.lambda[0];
    const Complex src = ihy2 * (1.0 / l1 - l1);
    for (int a = 0; a < static_cast<int>(lm.row_dofs.size()); ++a)
      rhs(lm.row_dofs[static_cast<std::size_t>(a)], l) = src * lm.u(a, 0);
  }
  // Singularity probe: when E sits on an eigenvalue of a decoupled (sealed)
  // part of the domain, the incident right-hand side may not excite it and
  // the solve would silently succeed. A fixed pseudo-random probe overlaps
  // every mode, so a resolvent norm this large flags the singular system.
  {
    Eigen::VectorXcd r(n);
    std::uint64_t s = 0x9e3779b97f4a7c15ull;
    for (int i = 0; i < n; ++i)
    {
      s = s * 6364136223846793005ull + 1442695040888963407ull;
      r[i] = static_cast<double>(s >> 11) * (2.0 / 9007199254740992.0) - 1.0;
    }
    Eigen::VectorXcd z = lu.solve(r);
    if (!z.allFinite() || z.cwiseAbs().maxCoeff() > 1e8)
      return false;
  }

  Eigen::MatrixXcd sol = lu.solve(rhs);
  if (!sol.allFinite())
    return false;
  for (int l = 0; l < n_leads; ++l)
  {
    const double res = (A * sol.col(l) - rhs.col(l)).cwiseAbs().maxCoeff();
    const double scale = rhs.col(l).cwiseAbs().maxCoeff();
    if (!(res <= 1e-8 * std::max(1.0, scale) * std::max(1.0, sol.col(l).cwiseAbs().maxCoeff())))
      return false;
  }

  // Mode-1 amplitudes at the matching plane; subtracting the incident unit
  // gives the plane-referenced scattering amplitudes, then the phase is
  // re-referenced to the mouth (2 js lattice steps of mode-1 propagation).
  out.S.resize(n_leads, n_leads);
  for (int lo = 0; lo < n_leads; ++lo)
  {
    const LeadModes& lm = leads[static_cast<std::size_t>(lo)];
    const Complex l1 = lm.lambda[0];
    Complex ref = std::pow(l1, -2 * gr.js);
    for (int li = 0; li < n_leads; ++li)
    {
      Complex amp = 0.0;
      for (int a = 0; a < static_cast<int>(lm.row_dofs.size()); ++a)
        amp += lm.u(a, 0) * sol(lm.row_dofs[static_cast<std::size_t>(a)], li) * gr.hx;
      if (lo == li)
        amp -= 1.0;
      out.S(lo, li) = amp * ref;
    }
  }
  out.R_amp = out.S(0, 0);
  out.field = sol.col(0);
  return true;
}

} // namespace

ScatteringSolution scattering_solve(const BilliardGeometry& g,
                                    const DiscretizationParams& d, double E)
{
  ScatteringSolution out;
  out.E = E;

  // Resolve the snapped grid first: the usable one-mode window ends at the
  // lattice second threshold, a bit below the continuum (2 pi)^2.
  const Grid probe = make_grid(g, d, true);
  const double top = discrete_threshold(2, probe.hx);
  if (!(E > kThreshold1 + 1e-9))
    throw ValidationError("E", "scattering energy must exceed the first threshold pi^2");
  if (!(E < top - 1e-9))
    throw ValidationError("E", "scattering energy must stay below the lattice "
                               "second threshold " +
                               std::to_string(top) + " (one-mode window)");
  out.k = std::sqrt(E - kThreshold1);

  if (solve_at_depth(g, d, E, out))
    return out;

  // Singular system: E coincides with an eigenvalue of the truncated closed
  // problem. One retry with a matching plane one row deeper.
  DiscretizationParams deeper = d;
  deeper.ecs_start = probe.ecs_start_actual + probe.hy;
  if (solve_at_depth(g, deeper, E, out))
    return out;
  throw SingularSystemError("scattering solve singular at E = " + std::to_string(E));
}

double conductance(const BilliardGeometry& g, const DiscretizationParams& d, double E)
{
  if (!g.lead2_enabled)
    throw ValidationError("lead2_enabled", "conductance needs both leads");
  const ScatteringSolution s = scattering_solve(g, d, E);
  return std::norm(s.S(0, 1));
}

double time_delay(const BilliardGeometry& g, const DiscretizationParams& d, double E)
{
  const double dE = 1e-4 * E;
  const Grid probe = make_grid(g, d, true);
  const double top = discrete_threshold(2, probe.hx);
  if (E - 3.0 * dE <= kThreshold1 || E + 3.0 * dE >= top)
    throw ValidationError("E", "time delay needs E at least 3 dE inside the window");
  const Complex r_plus = scattering_solve(g, d, E + dE).R_amp;
  const Complex r_minus = scattering_solve(g, d, E - dE).R_amp;
  // arg(R+/R-) unwraps the phase difference onto (-pi, pi].
  return std::arg(r_plus * std::conj(r_minus)) / (2.0 * dE);
}

} // namespace reslab
