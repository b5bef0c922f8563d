// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "reslab/eig.hpp"
#include "reslab/matching.hpp"
#include "reslab/two_level.hpp"

using namespace reslab;

TEST_CASE("min_cost_assignment picks the cheapest pairing")
{
  Eigen::MatrixXd cost(2, 2);
  cost << 1.0, 10.0, 10.0, 1.0;
  auto a = min_cost_assignment(cost);
  CHECK(a[0] == 0);
  CHECK(a[1] == 1);

  cost << 10.0, 1.0, 1.0, 10.0;
  a = min_cost_assignment(cost);
  CHECK(a[0] == 1);
  CHECK(a[1] == 0);

  // Rectangular: the expensive row must still take its best remaining column.
  Eigen::MatrixXd rect(2, 3);
  rect << 5.0, 1.0, 9.0, 4.0, 1.5, 9.0;
  a = min_cost_assignment(rect);
  CHECK(a[0] == 1);
  CHECK(a[1] == 0);
}

TEST_CASE("min_cost_assignment beats greedy matching")
{
  // Greedy would grab (0,0) cost 1 and then pay 100 for row 1; the optimum
  // pays 2 + 3.
  Eigen::MatrixXd cost(2, 2);
  cost << 1.0, 3.0, 2.0, 100.0;
  const auto a = min_cost_assignment(cost);
  CHECK(a[0] == 1);
  CHECK(a[1] == 0);
}

TEST_CASE("match_states: identity and transposition")
{
  Eigen::MatrixXcd H(2, 2);
  H << Complex(0, -0.1), Complex(0, 0.2), Complex(0, 0.2), Complex(1, -0.3);
  const ResonanceSet a = eig_complex_symmetric(H);
  const auto id = match_states(a, a);
  CHECK(id[0] == 0);
  CHECK(id[1] == 1);

  // Swap list order by hand; the match must follow.
  ResonanceSet b = a;
  std::swap(b.states[0], b.states[1]);
  const auto perm = match_states(a, b);
  CHECK(perm[0] == 1);
  CHECK(perm[1] == 0);

  ResonanceSet c = a;
  c.states.pop_back();
  CHECK_THROWS_AS(match_states(a, c), DimensionMismatchError);
}

TEST_CASE("match_energies handles unequal sizes and gating")
{
  std::vector<ComplexEnergy> prev = {{0.0, -0.1}, {1.0, -0.2}, {2.0, -0.3}};
  std::vector<ComplexEnergy> next = {{1.01, -0.2}, {0.02, -0.1}};
  const Assignment as = match_energies(prev, next, 0.5);
  REQUIRE(as.pairs.size() == 2);
  CHECK(as.pairs[0] == std::pair<int, int>(0, 1));
  CHECK(as.pairs[1] == std::pair<int, int>(1, 0));
  REQUIRE(as.unmatched_prev.size() == 1);
  CHECK(as.unmatched_prev[0] == 2);
  CHECK(as.unmatched_next.empty());

  // With a tight gate everything splits into leave + enter.
  const Assignment tight = match_energies(prev, next, 1e-6);
  CHECK(tight.pairs.empty());
  CHECK(tight.unmatched_prev.size() == 3);
  CHECK(tight.unmatched_next.size() == 2);
}

TEST_CASE("width-bifurcation sweep: matched trajectories are continuous")
{
  // Sweep the external coupling through its critical value and require that
  // the coarse-step trajectories never jump by more than 10x the motion seen
  // in a 10x finer reference sweep.
  auto poles_at = [](double w) {
    TwoLevelParams p;
    p.E1 = 0.0;
    p.E2 = 0.5;
    p.Gamma1 = 1.0;
    p.Gamma2 = 1.0;
    p.w_ex = w;
    return eig_complex_symmetric(build_two_level(p));
  };

  const double w_lo = 0.05, w_hi = 0.55;
  const double coarse = 0.01, fine = 0.001;

  double max_fine_step = 0.0;
  {
    ResonanceSet prev = poles_at(w_lo);
    for (double w = w_lo + fine; w <= w_hi + 1e-12; w += fine)
    {
      const ResonanceSet cur = poles_at(w);
      const auto perm = match_states(prev, cur);
      for (int i = 0; i < 2; ++i)
        max_fine_step = std::max(max_fine_step,
                                 std::abs(prev[i].energy.value() -
                                          cur[static_cast<std::size_t>(perm[i])].energy.value()));
      prev = cur;
    }
  }

  ResonanceSet prev = poles_at(w_lo);
  for (double w = w_lo + coarse; w <= w_hi + 1e-12; w += coarse)
  {
    const ResonanceSet cur = poles_at(w);
    const auto perm = match_states(prev, cur);
    for (int i = 0; i < 2; ++i)
    {
      const double jump = std::abs(prev[i].energy.value() -
                                   cur[static_cast<std::size_t>(perm[i])].energy.value());
      CHECK(jump <= 10.0 * (coarse / fine) * max_fine_step);
    }
    prev = cur;
  }
}

TEST_CASE("reversed sweep gives the inverse permutation at every step")
{
  auto poles_at = [](double v) {
    TwoLevelParams p;
    p.E1 = -0.3;
    p.E2 = 0.4;
    p.Gamma1 = 0.8;
    p.Gamma2 = 0.1;
    p.v_in = v;
    return eig_complex_symmetric(build_two_level(p));
  };
  std::vector<double> vs;
  for (double v = 0.0; v <= 1.0 + 1e-12; v += 0.05)
    vs.push_back(v);
  for (std::size_t s = 0; s + 1 < vs.size(); ++s)
  {
    const ResonanceSet a = poles_at(vs[s]);
    const ResonanceSet b = poles_at(vs[s + 1]);
    const auto fwd = match_states(a, b);
    const auto bwd = match_states(b, a);
    for (int i = 0; i < 2; ++i)
      CHECK(bwd[static_cast<std::size_t>(fwd[i])] == i);
  }
}
