// SPDX-License-Identifier: Apache-2.0
#include "reslab/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace reslab
{

std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost)
{
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());
  if (n == 0)
    return {};
  if (n > m)
    throw DimensionMismatchError("min_cost_assignment: needs rows <= cols");

  const double inf = std::numeric_limits<double>::infinity();
  // Potentials u, v and column ownership p (1-indexed, p[0] is the scratch
  // row being inserted); way tracks the augmenting path.
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i)
  {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do
    {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = -1;
      double delta = inf;
      for (int j = 1; j <= m; ++j)
      {
        if (used[j])
          continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j])
        {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta)
        {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j)
      {
        if (used[j])
        {
          u[p[j]] += delta;
          v[j] -= delta;
        }
        else
        {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do
    {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> result(n, -1);
  for (int j = 1; j <= m; ++j)
    if (p[j] != 0)
      result[p[j] - 1] = j - 1;
  return result;
}

Assignment match_energies(const std::vector<ComplexEnergy>& prev,
                          const std::vector<ComplexEnergy>& next, double gate)
{
  Assignment out;
  const int np = static_cast<int>(prev.size());
  const int nn = static_cast<int>(next.size());
  if (np == 0 || nn == 0)
  {
    for (int i = 0; i < np; ++i)
      out.unmatched_prev.push_back(i);
    for (int j = 0; j < nn; ++j)
      out.unmatched_next.push_back(j);
    return out;
  }

  // The Hungarian core wants rows <= cols; run it on the smaller side.
  const bool flipped = np > nn;
  const int nr = flipped ? nn : np;
  const int nc = flipped ? np : nn;
  Eigen::MatrixXd cost(nr, nc);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j)
    {
      const ComplexEnergy& a = flipped ? next[i] : prev[i];
      const ComplexEnergy& b = flipped ? prev[j] : next[j];
      cost(i, j) = std::abs(a.value() - b.value());
    }

  const std::vector<int> col_of_row = min_cost_assignment(cost);
  std::vector<char> row_matched(nr, 0), col_matched(nc, 0);
  for (int i = 0; i < nr; ++i)
  {
    const int j = col_of_row[i];
    if (gate > 0.0 && cost(i, j) > gate)
      continue; // too far apart: treat as leave + enter
    row_matched[i] = 1;
    col_matched[j] = 1;
    if (flipped)
      out.pairs.emplace_back(j, i);
    else
      out.pairs.emplace_back(i, j);
  }
  std::sort(out.pairs.begin(), out.pairs.end());

  for (int i = 0; i < nr; ++i)
    if (!row_matched[i])
      (flipped ? out.unmatched_next : out.unmatched_prev).push_back(i);
  for (int j = 0; j < nc; ++j)
    if (!col_matched[j])
      (flipped ? out.unmatched_prev : out.unmatched_next).push_back(j);
  std::sort(out.unmatched_prev.begin(), out.unmatched_prev.end());
  std::sort(out.unmatched_next.begin(), out.unmatched_next.end());
  return out;
}

std::vector<int> match_states(const ResonanceSet& prev, const ResonanceSet& next)
{
  if (prev.size() != next.size())
    throw DimensionMismatchError("match_states: sets differ in size (" +
                                 std::to_string(prev.size()) + " vs " +
                                 std::to_string(next.size()) + ")");
  std::vector<ComplexEnergy> a, b;
  a.reserve(prev.size());
  b.reserve(next.size());
  for (const auto& st : prev.states)
    a.push_back(st.energy);
  for (const auto& st : next.states)
    b.push_back(st.energy);
  const Assignment as = match_energies(a, b, 0.0);
  std::vector<int> perm(prev.size(), -1);
  for (const auto& [i, j] : as.pairs)
    perm[static_cast<std::size_t>(i)] = j;
  return perm;
}

} // namespace reslab
