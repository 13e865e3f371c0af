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
#include "clubgood/errors.hpp"
#include "clubgood/numerics.hpp"
#include "clubgood/payments.hpp"
#include "clubgood/verification.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace clubgood;

namespace {

double realized_utility(Economy const &e, double own, std::vector<double> reported, int buyer)
{
  auto a = solve_allocation(e, reported);
  auto t = expost_transfers(e, reported);
  double v = a.consume[static_cast<std::size_t>(buyer)] ? e.value(own, a.set_size) : 0.0;
  return v - t.payments[static_cast<std::size_t>(buyer)];
}

}  // namespace

TEST(Incentives, KnownMisreportDoesNotPay)
{
  Economy e     = pi_economy(5.0 / 8.0, 0.25);
  double  truth = realized_utility(e, 0.75, {0.75, 0.72}, 0);
  double  lie   = realized_utility(e, 0.75, {0.95, 0.72}, 0);
  EXPECT_LT(lie - truth, 0.0);
}

TEST(Incentives, RandomMisreportsNeverPayAndTruthIsIndividuallyRational)
{
  for (double pi : {3.0 / 8.0, 5.0 / 8.0})
  {
    Economy e = pi_economy(pi, 0.25);
    for (std::uint64_t s = 0; s < 1500; ++s)
    {
      double own = counter_uniform(8, s, 0), opp = counter_uniform(8, s, 1);
      double lie = counter_uniform(8, s, 2);
      double u   = realized_utility(e, own, {own, opp}, 0);
      EXPECT_GE(u, -1e-9);
      EXPECT_LE(realized_utility(e, own, {lie, opp}, 0) - u, 1e-9)
          << pi << " " << own << " " << lie << " " << opp;
    }
  }
}

TEST(Incentives, LibraryChecksPassOnBenchmarkEconomies)
{
  Economy e    = pi_economy(3.0 / 8.0, 0.25, 3);
  auto    grid = linspace(0.0, 1.0, 21);
  auto    dsic = check_dsic(e, grid, linspace(0.0, 1.0, 41), 60, 5, 2);
  EXPECT_TRUE(dsic.pass) << dsic.to_text();
  EXPECT_LE(dsic.worst, 1e-9);
  auto ir = check_ir(e, grid, 60, 5, 2);
  EXPECT_TRUE(ir.pass) << ir.to_text();
  EXPECT_GE(ir.worst, -1e-9);
}

TEST(Regions, GridLabelsMatchClosedForm)
{
  Economy e = pi_economy(5.0 / 8.0, 0.25);
  auto    g = region_grid(e, 80, 2);
  for (int i = 0; i < 80; ++i)
  {
    for (int j = 0; j < 80; ++j)
    {
      if (oracle::two_buyer_margin(5.0 / 8.0, 3.0 / 8.0, 0.25, 0.25, g.center(i), g.center(j)) < 1e-12)
      {
        continue;
      }
      EXPECT_EQ(g.label(i, j), oracle::two_buyer_label(5.0 / 8.0, 3.0 / 8.0, 0.25, 0.25, g.center(i),
                                                       g.center(j)));
    }
  }
  EXPECT_EQ(g.labels, region_grid(e, 80, 1).labels);
  EXPECT_STREQ(region_label(3), "{1,2}");
}

TEST(Regions, SoloShareRisesWithSoloValue)
{
  double prev = -1.0;
  for (double pi : {0.55, 0.6, 0.65})
  {
    auto   g    = region_grid(pi_economy(pi, 0.25), 100);
    double solo = 0;
    for (auto l : g.labels)
    {
      solo += (l == 1 || l == 2) ? 1 : 0;
    }
    EXPECT_GT(solo, prev);
    prev = solo;
  }
}

TEST(Cutoffs, NegativeEffectValues)
{
  auto c = solve_benchmark_cutoffs(5.0 / 8.0, 0.25);
  EXPECT_FALSE(c.positive);
  EXPECT_NEAR(c.x, 19.0 / 30.0, 1e-12);
  EXPECT_NEAR(c.y, 7.0 / 10.0, 1e-12);
  EXPECT_NEAR(c.z, 5.0 / 6.0, 1e-12);
}

TEST(Cutoffs, PositiveEffectValues)
{
  auto c = solve_benchmark_cutoffs(3.0 / 8.0, 0.25);
  EXPECT_TRUE(c.positive);
  EXPECT_NEAR(c.x, 0.3, 1e-12);
  EXPECT_NEAR(c.y, 11.0 / 30.0, 1e-12);
  EXPECT_NEAR(c.z, 5.0 / 6.0, 1e-12);
  EXPECT_THROW(solve_benchmark_cutoffs(0.5, 0.25), PreconditionError);
  EXPECT_NEAR(rival_reserve(1.0, 0.25), 5.0 / 8.0, 1e-12);
  EXPECT_NEAR(shared_entry(0.0, 0.25), 1.0 / 8.0, 1e-12);
}

TEST(Cutoffs, PartitionAgainstFixedOpponent)
{
  // pi = 5/8: against a partner at 0.75, the buyer shares from 19/30 on and
  // takes the good alone above the kink where sharing stops paying.
  Economy e = pi_economy(5.0 / 8.0, 0.25);
  auto    p = extract_cutoff_partition(e, 0, {0.0, 0.75});
  EXPECT_TRUE(p.ordered);
  double const opp_share = (3.0 / 8.0) * (2 * 0.75 - 1);
  // Shared entry: psi2(t) + psi2(0.75) >= c, compared with the partner alone.
  double const shared_from = ((0.25 - opp_share) / (3.0 / 8.0) + 1) / 2;
  double const partner_alone = (5.0 / 8.0) * (2 * 0.75 - 1) - 0.25;
  // Solo against sharing: psi1(t) - c >= psi2(t) + psi2(0.75) - c.
  double const solo_from = (opp_share / (2.0 / 8.0) + 1) / 2;
  ASSERT_GT(partner_alone, 0.0);
  // Sharing must beat the partner alone: psi2(t) + psi2(.75) >= psi1(.75).
  double const beat_partner = (((5.0 / 8.0) * 0.5 - opp_share) / (3.0 / 8.0) + 1) / 2;
  EXPECT_NEAR(p.entry_cutoff, std::max(shared_from, beat_partner), 1e-9);
  EXPECT_EQ(p.segments.back().set_size, 1);
  EXPECT_TRUE(p.segments.back().consume);
  double solo_lo = 0;
  for (auto const &s : p.segments)
  {
    if (s.consume && s.set_size == 1)
    {
      solo_lo = s.lo;
      break;
    }
  }
  EXPECT_NEAR(solo_lo, std::max(solo_from, 0.75), 1e-9);
}

TEST(Limit, PostedPriceConvergesForSaturatingFamily)
{
  EconomyFamily f;
  f.valuation = ValuationModel::saturating(2.0, 1.0);
  f.phi       = [](int n) { return phi_log(n, 1.0); };
  f.cost      = 1.0;
  auto r      = posted_price_limit(f, {50, 400}, 20, 7, 2);
  EXPECT_NEAR(r.price, 0.5, 1e-12);
  EXPECT_NEAR(r.target_fraction, 0.5, 1e-12);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_NEAR(r.rows[1].threshold_mean, 0.5, 0.02);
  EXPECT_NEAR(r.rows[1].fraction_mean, 0.5, 0.02);
  EXPECT_LT(std::abs(r.rows[1].threshold_mean - 0.5), std::abs(r.rows[0].threshold_mean - 0.5) + 0.01);
}

TEST(Limit, RejectsDecreasingValueInSetSize)
{
  EconomyFamily f;
  f.valuation = ValuationModel::pi_family(5.0 / 8.0);
  f.cost      = 0.25;
  EXPECT_THROW(posted_price_limit(f, {10}, 2, 1), PreconditionError);
}
