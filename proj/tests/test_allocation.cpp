//------------------------------------------------------------------------------
//
//   Copyright 2026 The clubgood Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include "clubgood/allocation.hpp"
#include "clubgood/economy.hpp"
#include "clubgood/numerics.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace clubgood;

namespace {

std::uint8_t mask_of(Allocation const &a)
{
  std::uint8_t m = 0;
  for (std::size_t i = 0; i < a.consume.size(); ++i)
  {
    if (a.consume[i])
    {
      m = static_cast<std::uint8_t>(m | (1u << i));
    }
  }
  return m;
}

}  // namespace

class TwoBuyerRegions : public ::testing::TestWithParam<double>
{
};

TEST_P(TwoBuyerRegions, MatchesClosedFormVirtualSurplus)
{
  double const pi = GetParam();
  Economy      e  = pi_economy(pi, 0.25);
  int          n  = 0;
  for (int i = 0; i < 300; ++i)
  {
    for (int j = 0; j < 300; ++j)
    {
      double t1 = (i + 0.5) / 300.0, t2 = (j + 0.5) / 300.0;
      if (oracle::two_buyer_margin(pi, 1.0 - pi, 0.25, 0.25, t1, t2) < 1e-12)
      {
        continue;  // exact tie on a grid line, resolved by rounding
      }
      double p[2] = {t1, t2};
      auto   a    = solve_allocation(e, p);
      EXPECT_EQ(mask_of(a), oracle::two_buyer_label(pi, 1.0 - pi, 0.25, 0.25, t1, t2))
          << "pi=" << pi << " at " << t1 << "," << t2;
      n += 1;
    }
  }
  EXPECT_GT(n, 89000);
}

INSTANTIATE_TEST_SUITE_P(PiValues, TwoBuyerRegions,
                         ::testing::Values(0.0, 0.25, 3.0 / 8.0, 0.5, 5.0 / 8.0, 0.8, 1.0));

TEST(Allocation, RankedProfileSortsDescendingAndKeepsIndices)
{
  std::vector<double> p{0.2, 0.9, 0.5};
  auto                r = RankedProfile::rank(p);
  EXPECT_EQ(r.sorted_thetas, (std::vector<double>{0.9, 0.5, 0.2}));
  EXPECT_EQ(r.original_indices, (std::vector<int>{1, 2, 0}));
}

TEST(Allocation, GreedyMatchesBruteForceOnRandomProfiles)
{
  Economy e(5, 0.6, TypeDistribution::uniform(1.0), ValuationModel::saturating(1.0, 0.4),
            phi_linear(5, 0.05));
  AllocationSolver  solver(e);
  std::vector<bool> consume;
  for (std::uint64_t s = 0; s < 3000; ++s)
  {
    std::vector<double> p(5);
    for (std::size_t i = 0; i < 5; ++i)
    {
      p[i] = counter_uniform(99, s, i);
    }
    auto oracle = brute_force_allocation(e, p);
    int  size   = solver.solve(p, consume);
    EXPECT_EQ(size, oracle.allocation.set_size);
    EXPECT_NEAR(subset_profit(e, p, consume), subset_profit(e, p, oracle.allocation.consume), 1e-12);
  }
}

TEST(Allocation, ConsumersAreTheTopTypes)
{
  Economy e(6, 1.0, TypeDistribution::uniform(1.0), ValuationModel::linear_in_k(0.5, 0.2),
            phi_zero(6));
  for (std::uint64_t s = 0; s < 500; ++s)
  {
    std::vector<double> p(6);
    for (std::size_t i = 0; i < 6; ++i)
    {
      p[i] = counter_uniform(5, s, i);
    }
    auto a = solve_allocation(e, p);
    for (std::size_t i = 0; i < 6; ++i)
    {
      for (std::size_t j = 0; j < 6; ++j)
      {
        if (a.consume[i] && !a.consume[j])
        {
          EXPECT_GT(p[i], p[j]);
        }
      }
    }
  }
}

TEST(Allocation, AllocationIsMonotoneInOwnType)
{
  Economy e = pi_economy(3.0 / 8.0, 0.25);
  for (double opp : {0.1, 0.4, 0.7, 0.95})
  {
    int prev = 0;
    for (double t : linspace(0.0, 1.0, 2001))
    {
      double p[2] = {t, opp};
      auto   a    = solve_allocation(e, p);
      int    q    = a.consume[0] ? 1 : 0;
      EXPECT_GE(q, prev) << "opp=" << opp << " t=" << t;
      prev = q;
    }
  }
}

TEST(Allocation, NoProvisionBelowCost)
{
  Economy e = pi_economy(0.5, 0.25);
  double  p[2] = {0.55, 0.6};
  auto    a    = solve_allocation(e, p);
  EXPECT_FALSE(a.provided);
  EXPECT_EQ(a.set_size, 0);
  EXPECT_FALSE(provision_possible(e, p));
}
