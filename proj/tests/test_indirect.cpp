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
#include "clubgood/errors.hpp"
#include "clubgood/indirect.hpp"
#include "clubgood/numerics.hpp"
#include "clubgood/payments.hpp"
#include "clubgood/verification.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <memory>

using namespace clubgood;

namespace {

TableOptions small_tables()
{
  TableOptions o;
  o.knots = 201;
  return o;
}

// Games are costly to build, so each is built once for the whole suite.
GiftGame const &gift()
{
  static GiftGame const g(3.0 / 8.0, 0.25, small_tables());
  return g;
}

ExclusivityGame const &exclusivity()
{
  static ExclusivityGame const g(5.0 / 8.0, 0.25, small_tables());
  return g;
}

AllPayGame const &solo_allpay()
{
  static AllPayGame const g(pi_economy(1.0, 0.25), small_tables());
  return g;
}

}  // namespace

TEST(MonotoneMap, InterpolatesAndInverts)
{
  MonotoneMap m({0.0, 1.0, 2.0}, {0.0, 2.0, 3.0});
  EXPECT_DOUBLE_EQ(m(0.5), 1.0);
  EXPECT_DOUBLE_EQ(m(1.5), 2.5);
  EXPECT_DOUBLE_EQ(m.inverse(2.5), 1.5);
  EXPECT_TRUE(m.strictly_increasing());
}

TEST(MonotoneMap, JumpsDecodeToTheJumpLocation)
{
  MonotoneMap m({0.0, 1.0, 1.0, 2.0}, {0.0, 1.0, 3.0, 4.0});
  EXPECT_DOUBLE_EQ(m(2.0), 4.0);
  bool gap = false;
  EXPECT_DOUBLE_EQ(m.inverse(2.0, &gap), 1.0);
  EXPECT_TRUE(gap);
  EXPECT_DOUBLE_EQ(m.inverse(3.5, &gap), 1.5);
  EXPECT_FALSE(gap);
}

TEST(MonotoneMap, FlatPiecesInvertToTheSmallestAbscissa)
{
  MonotoneMap m({0.0, 1.0, 2.0}, {0.0, 1.0, 1.0});
  EXPECT_DOUBLE_EQ(m.inverse(1.0), 1.0);
  EXPECT_FALSE(m.strictly_increasing());
}

TEST(MonotoneMap, RejectsDecreasingInput)
{
  EXPECT_THROW(MonotoneMap({0.0, 1.0}, {1.0, 0.0}), NumericalError);
  EXPECT_THROW(MonotoneMap({1.0, 0.0}, {0.0, 1.0}), std::invalid_argument);
}

TEST(AllPay, BidEqualsInterimPaymentOnSoloOnlyEconomy)
{
  auto const &g = solo_allpay();
  EXPECT_NEAR(g.strategy(0.8).price, 0.5153125, 1e-5);
  for (double t : linspace(0.63, 1.0, 30))
  {
    EXPECT_NEAR(g.strategy(t).price, oracle::rival_interim(t), 1e-5) << t;
  }
  EXPECT_EQ(g.strategy(0.3).price, 0.0);
  EXPECT_EQ(g.prepare(g.strategy(0.3)).tier, 0);
}

TEST(AllPay, HighestBidderWinsAndEveryBidderPays)
{
  auto const &g = solo_allpay();
  Action      a[2] = {g.strategy(0.9), g.strategy(0.7)};
  auto        o    = g.play(a);
  EXPECT_TRUE(o[0].consume);
  EXPECT_FALSE(o[1].consume);
  EXPECT_DOUBLE_EQ(o[0].payment, a[0].price);
  EXPECT_DOUBLE_EQ(o[1].payment, a[1].price);
}

TEST(AllPay, DominatedBidsArePaidAndFlagged)
{
  auto const &g    = solo_allpay();
  Action      high{g.max_price() + 0.1, 0.0};
  EXPECT_EQ(g.prepare(high).tier, -1);
  Action a[2] = {high, g.strategy(0.9)};
  auto   o    = g.play(a);
  EXPECT_DOUBLE_EQ(o[0].payment, high.price);
  EXPECT_THROW(g.prepare(Action{-1.0, 0.0}), std::invalid_argument);
}

TEST(GiftGame, PostedPricesMatchClosedForm)
{
  auto const &g = gift();
  EXPECT_NEAR(g.x(), 0.3, 1e-12);
  EXPECT_NEAR(g.y(), 11.0 / 30.0, 1e-12);
  EXPECT_NEAR(g.z(), 5.0 / 6.0, 1e-12);
  EXPECT_NEAR(g.low_price(), 5.0 / 144.0, 1e-8);
  EXPECT_NEAR(g.high_price(), 151.0 / 720.0, 1e-8);
  EXPECT_EQ(g.maps().size(), 3u);
}

TEST(GiftGame, TiersFollowTheCutoffs)
{
  auto const &g = gift();
  EXPECT_EQ(g.prepare(g.strategy(0.2)).tier, 0);
  EXPECT_EQ(g.prepare(g.strategy(0.33)).tier, 1);
  EXPECT_EQ(g.prepare(g.strategy(0.6)).tier, 2);
  EXPECT_EQ(g.prepare(g.strategy(0.9)).tier, 3);
}

TEST(GiftGame, OutcomesMatchTheDirectMechanism)
{
  auto const &g = gift();
  for (std::uint64_t s = 0; s < 3000; ++s)
  {
    double t[2] = {counter_uniform(21, s, 0), counter_uniform(21, s, 1)};
    Action a[2] = {g.strategy(t[0]), g.strategy(t[1])};
    auto   o    = g.play(a);
    auto   d    = solve_allocation(g.economy(), t);
    EXPECT_EQ(o[0].consume, static_cast<bool>(d.consume[0])) << t[0] << " " << t[1];
    EXPECT_EQ(o[1].consume, static_cast<bool>(d.consume[1])) << t[0] << " " << t[1];
  }
}

TEST(ExclusivityGame, FeesMatchClosedForm)
{
  auto const &g = exclusivity();
  EXPECT_NEAR(g.x(), 19.0 / 30.0, 1e-12);
  EXPECT_NEAR(g.y(), 0.7, 1e-12);
  EXPECT_NEAR(g.z(), 5.0 / 6.0, 1e-12);
  EXPECT_NEAR(g.fee_mid(), 1.0 / 24.0, 1e-8);
  EXPECT_LT(g.fee_mid(), g.fee_high());
}

TEST(ExclusivityGame, LowestTierIsNeverServedAlone)
{
  auto const &g = exclusivity();
  for (double own : linspace(19.0 / 30.0 + 1e-6, 0.7 - 1e-6, 25))
  {
    EXPECT_EQ(g.prepare(g.strategy(own)).tier, 1);
    for (double opp : linspace(0.0, 1.0, 101))
    {
      Action a[2] = {g.strategy(own), g.strategy(opp)};
      auto   o    = g.play(a);
      if (o[0].consume)
      {
        EXPECT_EQ(o[0].set_size, 2) << own << " " << opp;
      }
    }
  }
}

TEST(ExclusivityGame, OutcomesMatchTheDirectMechanism)
{
  auto const &g = exclusivity();
  for (std::uint64_t s = 0; s < 3000; ++s)
  {
    double t[2] = {counter_uniform(22, s, 0), counter_uniform(22, s, 1)};
    Action a[2] = {g.strategy(t[0]), g.strategy(t[1])};
    auto   o    = g.play(a);
    auto   d    = solve_allocation(g.economy(), t);
    EXPECT_EQ(o[0].consume, static_cast<bool>(d.consume[0])) << t[0] << " " << t[1];
    EXPECT_EQ(o[1].consume, static_cast<bool>(d.consume[1])) << t[0] << " " << t[1];
  }
}

TEST(Equilibrium, SmallSweepsPass)
{
  for (IndirectGame const *g :
       std::initializer_list<IndirectGame const *>{&gift(), &exclusivity(), &solo_allpay()})
  {
    auto r = verify_equilibrium(*g, linspace(0.0, 1.0, 11), linspace(0.0, 1.0, 21), 4000, 9, 2);
    EXPECT_TRUE(r.equilibrium_pass) << r.to_text();
    auto eq = verify_outcome_equivalence(*g, 41, 2);
    EXPECT_TRUE(eq.equivalence_pass) << eq.to_text();
    EXPECT_LT(eq.max_payment_gap, 1e-5) << g->id();
  }
}

TEST(Equilibrium, ReportIsIndependentOfThreadCount)
{
  auto const &g = gift();
  auto        a = verify_equilibrium(g, linspace(0.0, 1.0, 5), linspace(0.0, 1.0, 9), 500, 4, 1);
  auto        b = verify_equilibrium(g, linspace(0.0, 1.0, 5), linspace(0.0, 1.0, 9), 500, 4, 3);
  EXPECT_EQ(a.to_csv(), b.to_csv());
}

TEST(Strategy, CsvHasOneRowPerGridPoint)
{
  auto csv = strategy_csv(gift(), linspace(0.0, 1.0, 11));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 12);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "theta,price,extra,tier");
}
