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
#include "clubgood/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace clubgood {

TypeDistribution TypeDistribution::uniform(double upper)
{
  if (!(upper > 0.0) || !std::isfinite(upper))
  {
    throw ConfigError("uniform distribution needs a positive finite upper bound");
  }
  TypeDistribution d;
  d.kind_  = Kind::Uniform;
  d.upper_ = upper;
  d.knots_ = {{0.0, 0.0}, {upper, 1.0}};
  return d;
}

TypeDistribution TypeDistribution::piecewise_linear(std::vector<Knot> knots)
{
  if (knots.size() < 2)
  {
    throw ConfigError("piecewise-linear cdf needs at least two knots");
  }
  if (knots.front().theta != 0.0 || knots.front().cdf != 0.0)
  {
    throw ConfigError("piecewise-linear cdf must start at (0, 0)");
  }
  if (knots.back().cdf != 1.0)
  {
    throw ConfigError("piecewise-linear cdf must end at cdf 1");
  }
  for (std::size_t i = 1; i < knots.size(); ++i)
  {
    if (!(knots[i].theta > knots[i - 1].theta) || !(knots[i].cdf > knots[i - 1].cdf))
    {
      throw ConfigError("piecewise-linear cdf knots must be strictly increasing with positive slope");
    }
  }
  TypeDistribution d;
  d.kind_  = Kind::PiecewiseLinearCdf;
  d.upper_ = knots.back().theta;
  d.knots_ = std::move(knots);
  return d;
}

std::size_t TypeDistribution::segment(double theta) const
{
  auto it = std::upper_bound(knots_.begin(), knots_.end(), theta,
                             [](double t, Knot const &k) { return t < k.theta; });
  std::size_t idx = static_cast<std::size_t>(it - knots_.begin());
  idx             = idx == 0 ? 0 : idx - 1;
  return std::min(idx, knots_.size() - 2);
}

double TypeDistribution::cdf(double theta) const
{
  if (theta <= 0.0)
  {
    return 0.0;
  }
  if (theta >= upper_)
  {
    return 1.0;
  }
  if (kind_ == Kind::Uniform)
  {
    return theta / upper_;
  }
  std::size_t s = segment(theta);
  Knot const &a = knots_[s];
  Knot const &b = knots_[s + 1];
  return a.cdf + (b.cdf - a.cdf) * (theta - a.theta) / (b.theta - a.theta);
}

double TypeDistribution::pdf(double theta) const
{
  if (kind_ == Kind::Uniform)
  {
    return 1.0 / upper_;
  }
  std::size_t s = segment(theta);
  Knot const &a = knots_[s];
  Knot const &b = knots_[s + 1];
  return (b.cdf - a.cdf) / (b.theta - a.theta);
}

double TypeDistribution::quantile(double u) const
{
  u = std::clamp(u, 0.0, 1.0);
  if (kind_ == Kind::Uniform)
  {
    return u * upper_;
  }
  auto it = std::upper_bound(knots_.begin(), knots_.end(), u,
                             [](double v, Knot const &k) { return v < k.cdf; });
  std::size_t s = static_cast<std::size_t>(it - knots_.begin());
  s             = std::min(s == 0 ? 0 : s - 1, knots_.size() - 2);
  Knot const &a = knots_[s];
  Knot const &b = knots_[s + 1];
  return a.theta + (b.theta - a.theta) * (u - a.cdf) / (b.cdf - a.cdf);
}

ValuationModel ValuationModel::no_network_effects()
{
  ValuationModel m;
  m.kind_   = Kind::NoNetworkEffects;
  m.params_ = {};
  m.label_  = "none";
  return m;
}

ValuationModel ValuationModel::pi_family(double pi)
{
  if (!(pi >= 0.0 && pi <= 1.0))
  {
    throw ConfigError("pi must lie in [0, 1]");
  }
  ValuationModel m;
  m.kind_   = Kind::PiFamily;
  m.params_ = {pi};
  m.label_  = "pi";
  return m;
}

ValuationModel ValuationModel::linear_in_k(double intercept, double slope)
{
  ValuationModel m;
  m.kind_   = Kind::LinearInK;
  m.params_ = {intercept, slope};
  m.label_  = "linear_in_k";
  return m;
}

ValuationModel ValuationModel::saturating(double level, double decay)
{
  ValuationModel m;
  m.kind_   = Kind::Saturating;
  m.params_ = {level, decay};
  m.label_  = "saturating";
  return m;
}

ValuationModel ValuationModel::custom(Function value, Function derivative, std::string label)
{
  if (!value)
  {
    throw ConfigError("custom valuation needs a value function");
  }
  ValuationModel m;
  m.kind_       = Kind::Custom;
  m.value_      = std::move(value);
  m.derivative_ = std::move(derivative);
  m.label_      = std::move(label);
  return m;
}

bool ValuationModel::has_derivative() const
{
  return kind_ != Kind::Custom || static_cast<bool>(derivative_);
}

double ValuationModel::weight(int k) const
{
  switch (kind_)
  {
  case Kind::NoNetworkEffects:
    return 1.0;
  case Kind::PiFamily:
    return k == 1 ? params_[0] : 1.0 - params_[0];
  case Kind::LinearInK:
    return params_[0] + params_[1] * k;
  case Kind::Saturating:
    return params_[0] - params_[1] / k;
  case Kind::Custom:
    break;
  }
  return 0.0;
}

double ValuationModel::value(double theta, int k) const
{
  if (kind_ == Kind::Custom)
  {
    return value_(theta, k);
  }
  return weight(k) * theta;
}

double ValuationModel::derivative(double theta, int k) const
{
  if (kind_ == Kind::Custom)
  {
    return derivative_(theta, k);
  }
  return weight(k);
}

bool ValuationModel::has_limit() const
{
  return kind_ == Kind::NoNetworkEffects || kind_ == Kind::Saturating ||
         (kind_ == Kind::LinearInK && params_[1] == 0.0);
}

double ValuationModel::limit_value(double theta) const
{
  return limit_derivative(theta) * theta;
}

double ValuationModel::limit_derivative(double /*theta*/) const
{
  switch (kind_)
  {
  case Kind::NoNetworkEffects:
    return 1.0;
  case Kind::Saturating:
    return params_[0];
  case Kind::LinearInK:
    if (params_[1] == 0.0)
    {
      return params_[0];
    }
    break;
  default:
    break;
  }
  throw PreconditionError("valuation family has no finite large-market limit");
}

Economy::Economy(int n, double cost, TypeDistribution distribution, ValuationModel valuation,
                 std::vector<double> phi, int grid_resolution, Validation validation)
  : n_(n)
  , cost_(cost)
  , distribution_(std::move(distribution))
  , valuation_(std::move(valuation))
  , phi_(std::move(phi))
  , resolution_(grid_resolution)
{
  if (n_ < 1)
  {
    throw ConfigError("economy needs at least one buyer");
  }
  if (!(cost_ >= 0.0) || !std::isfinite(cost_))
  {
    throw ConfigError("cost must be a nonnegative finite number");
  }
  if (phi_.size() != static_cast<std::size_t>(n_) + 1)
  {
    throw ConfigError("profit effect table must have n+1 entries (sizes 0..n)");
  }
  for (double p : phi_)
  {
    if (!std::isfinite(p))
    {
      throw ConfigError("profit effect entries must be finite");
    }
  }
  if (resolution_ < 2)
  {
    throw ConfigError("validation grid needs at least two points");
  }
  if (validation == Validation::Skip)
  {
    return;
  }
  for (CheckReport const &r : {check_direction(resolution_), check_regularity(resolution_),
                               check_single_crossing(resolution_)})
  {
    if (!r.pass)
    {
      throw PreconditionError(r.name + " check failed: " + r.witness);
    }
  }
}

double Economy::phi(int k) const
{
  if (k < 0 || k > n_)
  {
    throw std::out_of_range("set size outside 0..n");
  }
  return phi_[static_cast<std::size_t>(k)];
}

void Economy::check_domain(double theta) const
{
  if (!(theta >= 0.0 && theta <= upper()))
  {
    throw std::out_of_range("type outside the support");
  }
}

double Economy::value(double theta, int k) const
{
  return valuation_.value(theta, k);
}

double Economy::dvalue(double theta, int k) const
{
  if (valuation_.has_derivative())
  {
    return valuation_.derivative(theta, k);
  }
  double const h = 1e-6 * upper();
  if (theta - h < 0.0)
  {
    return (value(theta + h, k) - value(theta, k)) / h;
  }
  if (theta + h > upper())
  {
    return (value(theta, k) - value(theta - h, k)) / h;
  }
  return (value(theta + h, k) - value(theta - h, k)) / (2.0 * h);
}

double Economy::virtual_value(double theta, int k) const
{
  if (k < 1 || k > n_)
  {
    throw std::out_of_range("virtual value needs 1 <= k <= n");
  }
  check_domain(theta);
  double const density = distribution_.pdf(theta);
  if (!(density > 0.0))
  {
    throw PreconditionError("density must be positive on the support");
  }
  double const tail = 1.0 - distribution_.cdf(theta);
  double const v    = value(theta, k);
  if (tail == 0.0)
  {
    return v;
  }
  return v - tail / density * dvalue(theta, k);
}

double Economy::adjusted_cost(int k) const
{
  return cost_ - (phi(k) - phi(0));
}

double Economy::gamma(int k, int j, std::span<double const> prefix) const
{
  if (k < 0 || j < 1 || k + j > n_ || prefix.size() != static_cast<std::size_t>(k))
  {
    throw std::out_of_range("gamma needs k >= 0, j >= 1, k + j <= n and k prefix types");
  }
  double sum = phi(k) - phi(k + j);
  for (double theta : prefix)
  {
    sum += virtual_value(theta, k) - virtual_value(theta, k + j);
  }
  return sum;
}

bool Economy::size_is_flat(int k) const
{
  // v(., k) constant on the support: that size carries no type-dependent value.
  double const lo = value(0.0, k);
  for (double t : linspace(0.0, upper(), 33))
  {
    if (std::abs(value(t, k) - lo) > 1e-14 || std::abs(dvalue(t, k)) > 1e-14)
    {
      return false;
    }
  }
  return true;
}

CheckReport Economy::check_regularity(int grid_resolution) const
{
  CheckReport report;
  report.name       = "regularity";
  report.resolution = grid_resolution;
  report.worst      = std::numeric_limits<double>::infinity();
  if (grid_resolution < 2)
  {
    throw std::invalid_argument("grid resolution must be at least 2");
  }
  std::vector<double> const grid = linspace(0.0, upper(), static_cast<std::size_t>(grid_resolution));
  for (int k = 1; k <= n_; ++k)
  {
    if (size_is_flat(k))
    {
      continue;
    }
    double prev = virtual_value(grid[0], k);
    for (std::size_t g = 1; g < grid.size(); ++g)
    {
      double const cur  = virtual_value(grid[g], k);
      double const step = cur - prev;
      if (step < report.worst)
      {
        report.worst = step;
      }
      if (!(step > 0.0) && report.pass)
      {
        report.pass = false;
        std::ostringstream os;
        os << "virtual value for set size " << k << " does not increase between " << grid[g - 1]
           << " and " << grid[g] << " (" << prev << " -> " << cur << ")";
        report.witness = os.str();
      }
      double const slope = dvalue(grid[g], k);
      if (!(slope > 0.0) && report.pass)
      {
        report.pass = false;
        std::ostringstream os;
        os << "value for set size " << k << " is not strictly increasing at " << grid[g];
        report.witness = os.str();
      }
      prev = cur;
    }
  }
  if (!std::isfinite(report.worst))
  {
    report.worst = 0.0;
  }
  return report;
}

namespace {

// Size pairs (k > kk) to examine. Large economies are sampled: neighbours plus
// pairs against the smallest and largest sizes.
std::vector<std::pair<int, int>> size_pairs(int n)
{
  std::vector<std::pair<int, int>> pairs;
  if (n <= 64)
  {
    for (int k = 2; k <= n; ++k)
    {
      for (int kk = 1; kk < k; ++kk)
      {
        pairs.emplace_back(k, kk);
      }
    }
    return pairs;
  }
  for (int k = 2; k <= n; ++k)
  {
    pairs.emplace_back(k, k - 1);
    if (k - 1 != 1)
    {
      pairs.emplace_back(k, 1);
    }
    if (k != n && k - 1 != 1)
    {
      pairs.emplace_back(n, k - 1);
    }
  }
  return pairs;
}

int sign_of(double x, double tol)
{
  if (x > tol)
  {
    return 1;
  }
  if (x < -tol)
  {
    return -1;
  }
  return 0;
}

}  // namespace

CheckReport Economy::check_single_crossing(int grid_resolution) const
{
  CheckReport report;
  report.name       = "single-crossing";
  report.resolution = grid_resolution;
  if (grid_resolution < 2)
  {
    throw std::invalid_argument("grid resolution must be at least 2");
  }
  std::vector<double> const grid = linspace(0.0, upper(), static_cast<std::size_t>(grid_resolution));
  std::vector<std::vector<double>> table(static_cast<std::size_t>(n_) + 1);
  for (int k = 1; k <= n_; ++k)
  {
    table[static_cast<std::size_t>(k)].resize(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g)
    {
      table[static_cast<std::size_t>(k)][g] = value(grid[g], k);
    }
  }
  for (auto [k, kk] : size_pairs(n_))
  {
    auto const &a     = table[static_cast<std::size_t>(k)];
    auto const &b     = table[static_cast<std::size_t>(kk)];
    double      scale = 1.0;
    for (std::size_t g = 0; g < grid.size(); ++g)
    {
      scale = std::max(scale, std::abs(a[g]) + std::abs(b[g]));
    }
    double const tol    = 1e-12 * scale;
    double       run_hi = a[0] - b[0];
    double       run_lo = run_hi;
    for (std::size_t g = 1; g < grid.size(); ++g)
    {
      double const d    = a[g] - b[g];
      int const    s    = sign_of(d, tol);
      bool         fail = false;
      double       gap  = 0.0;
      if (s > 0)
      {
        gap  = d - run_hi;
        fail = !(gap > 0.0);
      }
      else if (s < 0)
      {
        gap  = run_lo - d;
        fail = !(gap > 0.0);
      }
      else
      {
        gap  = -std::max(std::abs(run_hi), std::abs(run_lo));
        fail = gap < -tol;
      }
      if (fail)
      {
        report.worst = std::max(report.worst, -gap);
        if (report.pass)
        {
          report.pass = false;
          std::ostringstream os;
          os << "sizes (" << k << ", " << kk << ") at type " << grid[g]
             << ": value difference " << d << " against lower types in [" << run_lo << ", "
             << run_hi << "]";
          report.witness = os.str();
        }
      }
      run_hi = std::max(run_hi, d);
      run_lo = std::min(run_lo, d);
    }
  }
  return report;
}

CheckReport Economy::check_direction(int grid_resolution) const
{
  CheckReport report;
  report.name       = "network-effect-direction";
  report.resolution = grid_resolution;
  std::vector<double> const grid = linspace(0.0, upper(), static_cast<std::size_t>(grid_resolution));
  for (auto [k, kk] : size_pairs(n_))
  {
    int expected = 2;
    for (std::size_t g = 1; g < grid.size(); ++g)
    {
      double const va = value(grid[g], k);
      double const vb = value(grid[g], kk);
      int const    s  = sign_of(va - vb, 1e-12 * std::max(1.0, std::abs(va) + std::abs(vb)));
      if (expected == 2)
      {
        expected = s;
      }
      else if (s != expected)
      {
        report.pass  = false;
        report.worst = std::max(report.worst, std::abs(va - vb));
        std::ostringstream os;
        os << "value ranking of sizes " << k << " and " << kk << " flips at type " << grid[g];
        report.witness = os.str();
        return report;
      }
    }
  }
  return report;
}

int Economy::effect_sign(int k, int kk) const
{
  double const d = value(upper(), k) - value(upper(), kk);
  return sign_of(d, 1e-12 * std::max(1.0, std::abs(value(upper(), k))));
}

std::vector<double> phi_zero(int n)
{
  return std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0);
}

std::vector<double> phi_linear(int n, double slope)
{
  std::vector<double> phi(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k)
  {
    phi[static_cast<std::size_t>(k)] = slope * k;
  }
  return phi;
}

std::vector<double> phi_log(int n, double scale)
{
  std::vector<double> phi(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k)
  {
    phi[static_cast<std::size_t>(k)] = scale * std::log1p(static_cast<double>(k));
  }
  return phi;
}

Economy pi_economy(double pi, double cost, int n)
{
  return Economy(n, cost, TypeDistribution::uniform(1.0), ValuationModel::pi_family(pi),
                 phi_zero(n));
}

}  // namespace clubgood
