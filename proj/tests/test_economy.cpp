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
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace clubgood;

TEST(Distribution, UniformCdfPdfQuantile)
{
  auto d = TypeDistribution::uniform(2.0);
  EXPECT_DOUBLE_EQ(d.cdf(0.5), 0.25);
  EXPECT_DOUBLE_EQ(d.pdf(1.3), 0.5);
  EXPECT_DOUBLE_EQ(d.quantile(0.75), 1.5);
}

TEST(Distribution, PiecewiseLinearRoundTripAndRightSlope)
{
  auto d = TypeDistribution::piecewise_linear({{0.0, 0.0}, {0.5, 0.2}, {1.0, 1.0}});
  EXPECT_DOUBLE_EQ(d.cdf(0.25), 0.1);
  EXPECT_DOUBLE_EQ(d.pdf(0.25), 0.4);
  EXPECT_DOUBLE_EQ(d.pdf(0.5), 1.6);
  for (double u : {0.01, 0.2, 0.37, 0.99})
  {
    EXPECT_NEAR(d.cdf(d.quantile(u)), u, 1e-15);
  }
}

TEST(Distribution, RejectsMalformedKnots)
{
  EXPECT_THROW(TypeDistribution::piecewise_linear({{0.0, 0.0}, {0.5, 0.5}, {0.4, 1.0}}), ConfigError);
  EXPECT_THROW(TypeDistribution::piecewise_linear({{0.1, 0.0}, {1.0, 1.0}}), ConfigError);
  EXPECT_THROW(TypeDistribution::uniform(0.0), ConfigError);
}

TEST(Economy, VirtualValueMatchesClosedFormOnUniform)
{
  for (double pi : {0.0, 3.0 / 8.0, 5.0 / 8.0, 1.0})
  {
    Economy e = pi_economy(pi, 0.25);
    for (double t : {0.0, 0.1, 0.5, 0.73, 1.0})
    {
      for (int k = 1; k <= 2; ++k)
      {
        EXPECT_NEAR(e.virtual_value(t, k), oracle::psi_linear(oracle::pi_weight(pi, k), t), 1e-12);
      }
    }
  }
}

TEST(Economy, VirtualValueWithoutAnalyticDerivative)
{
  auto    val = ValuationModel::custom([](double t, int k) { return t * (1.0 + 0.1 * k); });
  Economy e(2, 0.5, TypeDistribution::uniform(1.0), val, phi_zero(2));
  EXPECT_NEAR(e.virtual_value(0.4, 2), 1.2 * (0.8 - 1.0), 1e-8);
}

TEST(Economy, AdjustedCostAndGamma)
{
  Economy e(3, 0.5, TypeDistribution::uniform(1.0), ValuationModel::linear_in_k(1.0, 0.1),
            {0.0, 0.1, 0.3, 0.35});
  EXPECT_DOUBLE_EQ(e.adjusted_cost(2), 0.2);
  std::vector<double> prefix{0.9};
  double              want = (0.1 - 0.35) + (1.1 * (2 * 0.9 - 1) - 1.3 * (2 * 0.9 - 1));
  EXPECT_NEAR(e.gamma(1, 2, prefix), want, 1e-12);
}

TEST(Economy, RejectsNonRegularDistribution)
{
  auto d = TypeDistribution::piecewise_linear({{0.0, 0.0}, {0.1, 0.9}, {1.0, 1.0}});
  EXPECT_THROW(Economy(2, 0.25, d, ValuationModel::no_network_effects(), phi_zero(2)), PreconditionError);
  EXPECT_NO_THROW(Economy(2, 0.25, d, ValuationModel::no_network_effects(), phi_zero(2), 1001,
                          Economy::Validation::Skip));
}

TEST(Economy, RejectsFlippingValueRanking)
{
  // Set size 2 is worth more to low types and less to high types.
  auto val = ValuationModel::custom([](double t, int k) { return k == 1 ? t : 0.2 + 0.5 * t; },
                                    [](double, int k) { return k == 1 ? 1.0 : 0.5; });
  EXPECT_THROW(Economy(2, 0.25, TypeDistribution::uniform(1.0), val, phi_zero(2)), PreconditionError);
}

TEST(Economy, EffectSignFollowsValuation)
{
  EXPECT_EQ(pi_economy(3.0 / 8.0, 0.25).effect_sign(1, 2), -1);
  EXPECT_EQ(pi_economy(5.0 / 8.0, 0.25).effect_sign(1, 2), 1);
  EXPECT_EQ(pi_economy(0.5, 0.25).effect_sign(1, 2), 0);
}

TEST(Economy, ConfigValidation)
{
  EXPECT_THROW(Economy(2, -1.0, TypeDistribution::uniform(1.0), ValuationModel::no_network_effects(),
                       phi_zero(2)),
               ConfigError);
  EXPECT_THROW(Economy(2, 0.5, TypeDistribution::uniform(1.0), ValuationModel::no_network_effects(),
                       {0.0, 0.1}),
               ConfigError);
  EXPECT_THROW(ValuationModel::pi_family(1.5), ConfigError);
}

TEST(Economy, ProfitEffectShapes)
{
  auto lin = phi_linear(3, 0.5);
  EXPECT_EQ(lin, (std::vector<double>{0.0, 0.5, 1.0, 1.5}));
  auto lg = phi_log(3, 2.0);
  EXPECT_NEAR(lg[3], 2.0 * std::log(4.0), 1e-15);
}
