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

#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace clubgood {

// Distribution of a buyer's type on [0, upper]. Types are iid across buyers.
class TypeDistribution
{
public:
  enum class Kind
  {
    Uniform,
    PiecewiseLinearCdf
  };

  struct Knot
  {
    double theta;
    double cdf;
  };

  static TypeDistribution uniform(double upper);
  // Knots must start at (0, 0), end at (upper, 1) and be strictly increasing
  // in both coordinates so that the density (the slope) is positive.
  static TypeDistribution piecewise_linear(std::vector<Knot> knots);

  Kind   kind() const { return kind_; }
  double upper() const { return upper_; }
  double cdf(double theta) const;
  // Density is the slope of the cdf; at an interior knot the right slope is used.
  double pdf(double theta) const;
  double quantile(double u) const;
  std::vector<Knot> const &knots() const { return knots_; }

private:
  TypeDistribution() = default;
  std::size_t segment(double theta) const;

  Kind              kind_  = Kind::Uniform;
  double            upper_ = 1.0;
  std::vector<Knot> knots_;
};

// Consumption value v(theta, k) for a buyer of type theta in a consumer set of size k.
class ValuationModel
{
public:
  enum class Kind
  {
    NoNetworkEffects,
    PiFamily,
    LinearInK,
    Saturating,
    Custom
  };

  using Function = std::function<double(double, int)>;

  // v = theta
  static ValuationModel no_network_effects();
  // v(theta, 1) = pi * theta, v(theta, k >= 2) = (1 - pi) * theta
  static ValuationModel pi_family(double pi);
  // v = (intercept + slope * k) * theta
  static ValuationModel linear_in_k(double intercept, double slope);
  // v = (level - decay / k) * theta, converging to level * theta
  static ValuationModel saturating(double level, double decay);
  // Without a derivative the economy falls back to finite differences.
  static ValuationModel custom(Function value, Function derivative = nullptr,
                               std::string label = "custom");

  Kind               kind() const { return kind_; }
  std::string const &label() const { return label_; }
  std::vector<double> const &parameters() const { return params_; }
  bool               has_derivative() const;

  double value(double theta, int k) const;
  // Only valid when has_derivative() is true.
  double derivative(double theta, int k) const;
  // Limit of v(theta, k) as k grows, for the families where it exists.
  bool   has_limit() const;
  double limit_value(double theta) const;
  double limit_derivative(double theta) const;

private:
  ValuationModel() = default;
  double weight(int k) const;

  Kind                kind_ = Kind::NoNetworkEffects;
  std::vector<double> params_;
  Function            value_;
  Function            derivative_;
  std::string         label_;
};

struct CheckReport
{
  std::string name;
  bool        pass       = true;
  double      worst      = 0.0;
  int         resolution = 0;
  std::string witness;
};

class Economy
{
public:
  enum class Validation
  {
    Enforce,
    Skip
  };

  // phi holds the profit network effect for set sizes 0..n and must have n+1 entries.
  Economy(int n, double cost, TypeDistribution distribution, ValuationModel valuation,
          std::vector<double> phi, int grid_resolution = 1001,
          Validation validation = Validation::Enforce);

  int                     buyers() const { return n_; }
  double                  cost() const { return cost_; }
  double                  upper() const { return distribution_.upper(); }
  TypeDistribution const &distribution() const { return distribution_; }
  ValuationModel const   &valuation() const { return valuation_; }
  std::vector<double> const &phi_table() const { return phi_; }
  int                     validation_resolution() const { return resolution_; }

  double phi(int k) const;
  double value(double theta, int k) const;
  double dvalue(double theta, int k) const;
  double virtual_value(double theta, int k) const;
  double adjusted_cost(int k) const;
  // Revenue hurdle for growing the top-k set by j buyers; prefix holds the top
  // k types in descending order.
  double gamma(int k, int j, std::span<double const> prefix) const;

  CheckReport check_regularity(int grid_resolution) const;
  CheckReport check_single_crossing(int grid_resolution) const;
  CheckReport check_direction(int grid_resolution) const;

  // +1 if larger sets are worth more, -1 if less, 0 if no value effect between k and kk.
  int effect_sign(int k, int kk) const;

private:
  void check_domain(double theta) const;
  bool size_is_flat(int k) const;

  int                 n_;
  double              cost_;
  TypeDistribution    distribution_;
  ValuationModel      valuation_;
  std::vector<double> phi_;
  int                 resolution_;
};

// Profit network effect tables of common shapes, sized n+1.
std::vector<double> phi_zero(int n);
std::vector<double> phi_linear(int n, double slope);
std::vector<double> phi_log(int n, double scale);

// Uniform[0,1] two-buyer economy with the pi family and no profit effect.
Economy pi_economy(double pi, double cost, int n = 2);

}  // namespace clubgood
