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

#include "clubgood/economy.hpp"
#include "clubgood/numerics.hpp"
#include "clubgood/payments.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace clubgood;

TEST(Transfers, SoloOnlyEconomyIsSecondPriceWithReserve)
{
  Economy e = pi_economy(1.0, 0.25);
  for (std::uint64_t s = 0; s < 2000; ++s)
  {
    double p[2] = {counter_uniform(3, s, 0), counter_uniform(3, s, 1)};
    auto   t    = expost_transfers(e, p);
    auto   want = oracle::rival_transfers(p[0], p[1]);
    EXPECT_NEAR(t.payments[0], want[0], 1e-9);
    EXPECT_NEAR(t.payments[1], want[1], 1e-9);
  }
}

TEST(Transfers, SharedOnlyEconomyChargesProvisionThreshold)
{
  Economy e = pi_economy(0.0, 0.25);
  for (std::uint64_t s = 0; s < 2000; ++s)
  {
    double p[2] = {counter_uniform(4, s, 0), counter_uniform(4, s, 1)};
    auto   t    = expost_transfers(e, p);
    auto   want = oracle::shared_transfers(p[0], p[1]);
    EXPECT_NEAR(t.payments[0], want[0], 1e-9);
    EXPECT_NEAR(t.payments[1], want[1], 1e-9);
  }
}

TEST(Transfers, KnownProfile)
{
  Economy e    = pi_economy(1.0, 0.25);
  double  p[2] = {0.9, 0.7};
  auto    t    = expost_transfers(e, p);
  EXPECT_NEAR(t.payments[0], 0.7, 1e-12);
  EXPECT_EQ(t.payments[1], 0.0);
}

TEST(OwnTypePath, SegmentsCoverTheSupportAndEntryCutoffMatchesReserve)
{
  Economy             e = pi_economy(1.0, 0.25);
  std::vector<double> p{0.3, 0.2};
  auto                path = own_type_path(e, 0, p, 1.0);
  ASSERT_FALSE(path.segments.empty());
  EXPECT_EQ(path.segments.front().lo, 0.0);
  EXPECT_EQ(path.segments.back().hi, 1.0);
  EXPECT_NEAR(path.entry_cutoff(), 5.0 / 8.0, 1e-10);
  EXPECT_TRUE(path.at(0.9).consume);
  EXPECT_FALSE(path.at(0.5).consume);
}

TEST(Interim, QuadratureMatchesClosedFormOnSoloOnlyEconomy)
{
  Economy            e = pi_economy(1.0, 0.25);
  OpponentQuadrature q(e, 0);
  for (double t : linspace(0.0, 1.0, 81))
  {
    auto pt = q.at(t);
    EXPECT_NEAR(pt.m, oracle::rival_interim(t), 1e-10) << t;
    EXPECT_NEAR(pt.total_q(), t < 5.0 / 8.0 ? 0.0 : t, 1e-12) << t;
  }
}

TEST(Interim, MonteCarloAgreesWithQuadratureWithinStandardErrors)
{
  Economy         e    = pi_economy(3.0 / 8.0, 0.25);
  auto            grid = linspace(0.05, 0.95, 10);
  InterimOptions  quad;
  InterimOptions  mc;
  mc.method  = InterimMethod::MonteCarlo;
  mc.seed    = 11;
  mc.draws   = 40000;
  mc.threads = 2;
  auto a = interim_schedule(e, 0, grid, quad);
  auto b = interim_schedule(e, 0, grid, mc);
  ASSERT_EQ(b.m_stderr.size(), grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g)
  {
    EXPECT_LE(std::abs(a.m[g] - b.m[g]), 5.0 * b.m_stderr[g] + 1e-9) << grid[g];
  }
}

TEST(Interim, MonteCarloIsIndependentOfThreadCount)
{
  Economy        e    = pi_economy(5.0 / 8.0, 0.25);
  auto           grid = linspace(0.1, 0.9, 5);
  InterimOptions a;
  a.method  = InterimMethod::MonteCarlo;
  a.seed    = 3;
  a.draws   = 5000;
  a.threads = 1;
  InterimOptions b = a;
  b.threads        = 3;
  EXPECT_EQ(interim_schedule(e, 1, grid, a).to_csv(), interim_schedule(e, 1, grid, b).to_csv());
}

TEST(Interim, EnvelopePaymentsAreNondecreasing)
{
  for (double pi : {0.2, 3.0 / 8.0, 5.0 / 8.0, 0.9})
  {
    Economy            e = pi_economy(pi, 0.25);
    OpponentQuadrature q(e, 0);
    auto               m = envelope_payments(q, linspace(0.0, 1.0, 101));
    for (std::size_t i = 1; i < m.size(); ++i)
    {
      EXPECT_GE(m[i], m[i - 1] - 1e-12) << pi;
    }
  }
}

TEST(ServedBounds, SoloOnlyEconomy)
{
  auto b = served_bounds(pi_economy(1.0, 0.25));
  EXPECT_NEAR(b.y_lower, 5.0 / 8.0, 1e-6);
}

TEST(Triviality, ClassifiesExtremes)
{
  EXPECT_EQ(classify_trivial(pi_economy(0.5, 5.0)).verdict, Triviality::NeverProvide);
  EXPECT_EQ(classify_trivial(pi_economy(0.5, 0.25)).verdict, Triviality::NonTrivial);
  auto   val = ValuationModel::custom([](double t, int) { return 2.0 + t; },
                                      [](double, int) { return 1.0; }, "shifted");
  Economy e(2, 0.1, TypeDistribution::uniform(1.0), val, phi_zero(2));
  EXPECT_EQ(classify_trivial(e).verdict, Triviality::AlwaysProvideFree);
}
