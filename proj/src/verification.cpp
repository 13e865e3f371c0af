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

#include "clubgood/verification.hpp"

#include "clubgood/allocation.hpp"
#include "clubgood/errors.hpp"
#include "clubgood/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace clubgood {

std::string VerificationReport::to_text() const
{
  std::ostringstream os;
  os << name << ": " << (pass ? "PASS" : "FAIL") << " worst=" << format_double(worst)
     << " tolerance=" << format_double(tolerance) << " checked=" << checked;
  if (!witness.empty())
  {
    os << " witness=[" << witness << "]";
  }
  return os.str();
}

namespace {

std::vector<double> draw_opponents(Economy const &economy, std::uint64_t seed, std::size_t draw)
{
  std::vector<double> p(static_cast<std::size_t>(economy.buyers()));
  for (std::size_t j = 0; j < p.size(); ++j)
  {
    p[j] = economy.distribution().quantile(counter_uniform(seed, draw, j));
  }
  return p;
}

struct Outcome
{
  bool   consume = false;
  int    size    = 0;
  double payment = 0.0;
};

Outcome outcome_on(Economy const &economy, OwnTypePath const &path, double report)
{
  PathSegment const &s = path.at(report);
  return {s.consume, s.set_size, s.consume ? path_payment(economy, path, report) : 0.0};
}

double utility(Economy const &economy, Outcome const &o, double theta)
{
  return o.consume ? economy.value(theta, o.size) - o.payment : 0.0;
}

struct Worst
{
  double      value = -std::numeric_limits<double>::infinity();
  std::string witness;
};

void check_grid(Economy const &economy, std::vector<double> const &grid)
{
  if (grid.empty())
  {
    throw std::invalid_argument("grid must be nonempty");
  }
  for (double t : grid)
  {
    if (!(t >= 0.0 && t <= economy.upper()))
    {
      throw std::invalid_argument("grid point outside the support");
    }
  }
}

}  // namespace

VerificationReport check_dsic(Economy const &economy, std::vector<double> const &own_grid,
                              std::vector<double> const &report_grid, std::size_t opponent_draws,
                              std::uint64_t seed, int threads)
{
  check_grid(economy, own_grid);
  check_grid(economy, report_grid);
  if (opponent_draws == 0)
  {
    throw std::invalid_argument("at least one opponent draw is required");
  }
  std::vector<Worst> per_draw(opponent_draws);
  int const          n = economy.buyers();
  parallel_for(opponent_draws, threads, [&](std::size_t d) {
    std::vector<double> profile = draw_opponents(economy, seed, d);
    Worst              &w       = per_draw[d];
    for (int i = 0; i < n; ++i)
    {
      OwnTypePath const    path = own_type_path(economy, i, profile, economy.upper());
      std::vector<Outcome> reports(report_grid.size());
      for (std::size_t r = 0; r < report_grid.size(); ++r)
      {
        reports[r] = outcome_on(economy, path, report_grid[r]);
      }
      for (double theta : own_grid)
      {
        double const truth = utility(economy, outcome_on(economy, path, theta), theta);
        for (std::size_t r = 0; r < report_grid.size(); ++r)
        {
          double const gain = utility(economy, reports[r], theta) - truth;
          if (gain > w.value)
          {
            w.value = gain;
            std::ostringstream os;
            os << "draw=" << d << " buyer=" << i << " type=" << format_double(theta)
               << " report=" << format_double(report_grid[r]);
            w.witness = os.str();
          }
        }
      }
    }
  });
  VerificationReport report;
  report.name      = "dsic";
  report.tolerance = 1e-8;
  report.worst     = -std::numeric_limits<double>::infinity();
  for (auto const &w : per_draw)
  {
    if (w.value > report.worst)
    {
      report.worst   = w.value;
      report.witness = w.witness;
    }
  }
  report.checked = opponent_draws * own_grid.size() * report_grid.size() * static_cast<std::size_t>(n);
  report.pass    = report.worst <= report.tolerance;
  return report;
}

VerificationReport check_ir(Economy const &economy, std::vector<double> const &own_grid,
                            std::size_t opponent_draws, std::uint64_t seed, int threads)
{
  check_grid(economy, own_grid);
  if (opponent_draws == 0)
  {
    throw std::invalid_argument("at least one opponent draw is required");
  }
  std::vector<Worst> per_draw(opponent_draws);
  int const          n = economy.buyers();
  parallel_for(opponent_draws, threads, [&](std::size_t d) {
    std::vector<double> profile = draw_opponents(economy, seed, d);
    Worst              &w       = per_draw[d];
    for (int i = 0; i < n; ++i)
    {
      OwnTypePath const path = own_type_path(economy, i, profile, economy.upper());
      for (double theta : own_grid)
      {
        double const loss = -utility(economy, outcome_on(economy, path, theta), theta);
        if (loss > w.value)
        {
          w.value = loss;
          std::ostringstream os;
          os << "draw=" << d << " buyer=" << i << " type=" << format_double(theta);
          w.witness = os.str();
        }
      }
    }
  });
  VerificationReport report;
  report.name      = "ir";
  report.tolerance = 1e-10;
  double worst_loss = -std::numeric_limits<double>::infinity();
  for (auto const &w : per_draw)
  {
    if (w.value > worst_loss)
    {
      worst_loss     = w.value;
      report.witness = w.witness;
    }
  }
  // Reported as the lowest utility found.
  report.worst   = -worst_loss;
  report.checked = opponent_draws * own_grid.size() * static_cast<std::size_t>(n);
  report.pass    = report.worst >= -report.tolerance;
  return report;
}

CutoffPartition extract_cutoff_partition(Economy const &economy, int buyer,
                                         std::vector<double> const &profile)
{
  OwnTypePath const path = own_type_path(economy, buyer, profile, economy.upper());
  CutoffPartition   out;
  out.buyer        = buyer;
  out.opponents    = profile;
  out.entry_cutoff = path.entry_cutoff();
  out.segments     = path.segments;
  std::set<int> sizes;
  for (auto const &s : path.segments)
  {
    if (s.consume)
    {
      sizes.insert(s.set_size);
    }
  }
  if (sizes.size() > static_cast<std::size_t>(economy.buyers()))
  {
    throw NumericalError("more consumer-set sizes along one path than buyers");
  }
  PathSegment const *prev = nullptr;
  for (auto const &s : path.segments)
  {
    if (!s.consume)
    {
      continue;
    }
    if (prev != nullptr && prev->set_size != s.set_size)
    {
      double const x    = s.lo;
      double const gain = economy.value(x, s.set_size) - economy.value(x, prev->set_size);
      if (gain < -1e-12 * std::max(1.0, std::abs(economy.value(x, s.set_size))))
      {
        out.ordered = false;
      }
    }
    prev = &s;
  }
  return out;
}

char const *region_label(std::uint8_t mask)
{
  switch (mask)
  {
  case 0:
    return "empty";
  case 1:
    return "{1}";
  case 2:
    return "{2}";
  default:
    return "{1,2}";
  }
}

RegionGrid region_grid(Economy const &economy, int resolution, int threads)
{
  if (economy.buyers() != 2)
  {
    throw PreconditionError("region grids need exactly two buyers");
  }
  if (resolution < 1)
  {
    throw std::invalid_argument("resolution must be positive");
  }
  RegionGrid grid;
  grid.resolution = resolution;
  grid.upper      = economy.upper();
  std::size_t const r = static_cast<std::size_t>(resolution);
  grid.labels.assign(r * r, 0);
  parallel_for(r, threads, [&](std::size_t i) {
    AllocationSolver  solver(economy);
    std::vector<bool> consume;
    double            profile[2];
    profile[0] = grid.center(static_cast<int>(i));
    for (std::size_t j = 0; j < r; ++j)
    {
      profile[1] = grid.center(static_cast<int>(j));
      solver.solve(profile, consume);
      grid.labels[i * r + j] = static_cast<std::uint8_t>((consume[0] ? 1 : 0) | (consume[1] ? 2 : 0));
    }
  });
  return grid;
}

std::string RegionGrid::to_csv() const
{
  std::string out = "theta1,theta2,label\n";
  out.reserve(labels.size() * 40);
  for (int i = 0; i < resolution; ++i)
  {
    std::string const a = format_double(center(i));
    for (int j = 0; j < resolution; ++j)
    {
      out += a;
      out += ',';
      out += format_double(center(j));
      out += ',';
      out += region_label(label(i, j));
      out += '\n';
    }
  }
  return out;
}

namespace {

double root_on_unit(std::function<double(double)> const &f, char const *what)
{
  double const lo = f(0.0);
  double const hi = f(1.0);
  if ((lo > 0.0) == (hi > 0.0) && lo != 0.0 && hi != 0.0)
  {
    throw PreconditionError(std::string("no threshold for ") + what + " on [0, 1]");
  }
  return bisect_root(f, 0.0, 1.0, 1e-15);
}

Economy benchmark_economy(double pi, double cost)
{
  if (!(pi >= 0.0 && pi <= 1.0))
  {
    throw PreconditionError("pi must lie in [0, 1]");
  }
  return pi_economy(pi, cost);
}

}  // namespace

BenchmarkCutoffs solve_benchmark_cutoffs(double pi, double cost)
{
  if (!(pi > 0.0 && pi < 1.0) || pi == 0.5)
  {
    throw PreconditionError("benchmark cutoffs need pi in (0, 1) with a network effect");
  }
  Economy const e = benchmark_economy(pi, cost);
  auto psi = [&](double t, int k) { return e.virtual_value(t, k); };
  // solo threshold: the lowest type that covers cost alone
  double const solo = root_on_unit([&](double t) { return psi(t, 1) - cost; }, "solo entry");
  // joint entry against the solo threshold
  double const joint = root_on_unit([&](double t) { return psi(t, 2) + psi(solo, 2) - cost; }, "joint entry");
  // partner type at which the top type is indifferent between sharing and consuming alone
  double const kink =
      root_on_unit([&](double t) { return psi(t, 2) + psi(1.0, 2) - psi(1.0, 1); }, "shared/solo kink");
  BenchmarkCutoffs out;
  out.positive = pi < 0.5;
  if (out.positive)
  {
    out.x = kink;
    out.y = joint;
    out.z = solo;
  }
  else
  {
    out.x = joint;
    out.y = solo;
    out.z = kink;
  }
  if (!(out.x > 0.0 && out.x < out.y && out.y < out.z && out.z < 1.0))
  {
    throw PreconditionError("pi and cost lie outside the four-region regime");
  }
  return out;
}

double rival_reserve(double pi, double cost)
{
  if (!(pi > 0.0))
  {
    throw PreconditionError("a reserve needs positive solo value");
  }
  Economy const e = benchmark_economy(pi, cost);
  return root_on_unit([&](double t) { return e.virtual_value(t, 1) - cost; }, "reserve");
}

double shared_entry(double pi, double cost)
{
  if (!(pi < 1.0))
  {
    throw PreconditionError("shared entry needs positive joint value");
  }
  Economy const e   = benchmark_economy(pi, cost);
  double const  top = e.virtual_value(1.0, 2);
  return root_on_unit([&](double t) { return e.virtual_value(t, 2) + top - cost; }, "shared entry");
}

Economy EconomyFamily::make(int n) const
{
  return Economy(n, cost, distribution, valuation, phi ? phi(n) : phi_zero(n));
}

namespace {

void check_limit_preconditions(EconomyFamily const &family, int n, double price)
{
  Economy const e = family.make(n);
  std::vector<double> const &phi = e.phi_table();
  for (int k = 1; k <= n; ++k)
  {
    double const step = phi[static_cast<std::size_t>(k)] - phi[static_cast<std::size_t>(k - 1)];
    if (step < -1e-12)
    {
      throw PreconditionError("profit effect must be increasing in the set size");
    }
    if (k >= 2)
    {
      double const before = phi[static_cast<std::size_t>(k - 1)] - phi[static_cast<std::size_t>(k - 2)];
      if (step > before + 1e-12)
      {
        throw PreconditionError("profit effect must be concave in the set size");
      }
    }
  }
  std::vector<double> const grid = linspace(0.0, e.upper(), 101);
  for (double theta : grid)
  {
    // value effects: increasing and concave in k for every type
    for (int k = 2; k <= n; ++k)
    {
      double const step = e.value(theta, k) - e.value(theta, k - 1);
      if (step < -1e-12)
      {
        throw PreconditionError("value must be increasing in the set size");
      }
      if (k >= 3 && step > e.value(theta, k - 1) - e.value(theta, k - 2) + 1e-12)
      {
        throw PreconditionError("value must be concave in the set size");
      }
    }
    if (theta < price)
    {
      continue;
    }
    // virtual values of the types that are served in the limit
    for (int k = 2; k <= n; ++k)
    {
      double const step = e.virtual_value(theta, k) - e.virtual_value(theta, k - 1);
      if (step < -1e-12)
      {
        throw PreconditionError("virtual value must be increasing in the set size");
      }
      if (k >= 3 &&
          step > e.virtual_value(theta, k - 1) - e.virtual_value(theta, k - 2) + 1e-12)
      {
        throw PreconditionError("virtual value must be concave in the set size");
      }
    }
  }
}

}  // namespace

LimitReport posted_price_limit(EconomyFamily const &family, std::vector<int> const &n_sequence,
                               int replications, std::uint64_t seed, int threads)
{
  if (n_sequence.empty() || replications < 1)
  {
    throw std::invalid_argument("posted-price limit needs buyers and replications");
  }
  if (!family.valuation.has_limit())
  {
    throw PreconditionError("valuation family has no large-market limit");
  }
  TypeDistribution const &dist  = family.distribution;
  auto                    limit = [&](double t) {
    double const f    = dist.pdf(t);
    double const tail = 1.0 - dist.cdf(t);
    return family.valuation.limit_value(t) - tail / f * family.valuation.limit_derivative(t);
  };
  LimitReport report;
  report.price           = bisect_root(limit, 0.0, dist.upper(), 1e-14);
  report.target_fraction = 1.0 - dist.cdf(report.price);
  int const largest      = *std::max_element(n_sequence.begin(), n_sequence.end());
  check_limit_preconditions(family, largest, report.price);

  for (int n : n_sequence)
  {
    Economy const       e = family.make(n);
    std::vector<double> thresholds(static_cast<std::size_t>(replications));
    std::vector<double> fractions(static_cast<std::size_t>(replications));
    parallel_for(static_cast<std::size_t>(replications), threads, [&](std::size_t rep) {
      std::uint64_t const stream = static_cast<std::uint64_t>(n) * 1000003ULL + rep;
      std::vector<double> profile(static_cast<std::size_t>(n));
      for (std::size_t j = 0; j < profile.size(); ++j)
      {
        profile[j] = dist.quantile(counter_uniform(seed, stream, j));
      }
      AllocationSolver  solver(e);
      std::vector<bool> consume;
      int const         k        = solver.solve(profile, consume);
      double            lowest_in = dist.upper();
      double            highest_out = 0.0;
      bool              any_out  = false;
      for (std::size_t j = 0; j < profile.size(); ++j)
      {
        if (consume[j])
        {
          lowest_in = std::min(lowest_in, profile[j]);
        }
        else
        {
          highest_out = std::max(highest_out, profile[j]);
          any_out     = true;
        }
      }
      double threshold = lowest_in;
      if (k > 0 && any_out)
      {
        threshold = 0.5 * (lowest_in + highest_out);
      }
      thresholds[rep] = threshold;
      fractions[rep]  = static_cast<double>(k) / n;
    });
    auto stats = [&](std::vector<double> const &xs) {
      double mean = 0.0;
      for (double x : xs)
      {
        mean += x;
      }
      mean /= static_cast<double>(xs.size());
      double var = 0.0;
      for (double x : xs)
      {
        var += (x - mean) * (x - mean);
      }
      double const se = xs.size() > 1 ? std::sqrt(var / static_cast<double>(xs.size() - 1) /
                                                  static_cast<double>(xs.size()))
                                      : 0.0;
      return std::pair<double, double>{mean, se};
    };
    LimitRow row;
    row.buyers                                  = n;
    std::tie(row.threshold_mean, row.threshold_se) = stats(thresholds);
    std::tie(row.fraction_mean, row.fraction_se)   = stats(fractions);
    report.rows.push_back(row);
  }
  return report;
}

std::string LimitReport::to_text() const
{
  std::ostringstream os;
  os << "posted price: " << format_double(price) << '\n';
  os << "limit allocated fraction: " << format_double(target_fraction) << '\n';
  for (auto const &r : rows)
  {
    os << "N=" << r.buyers << " threshold=" << format_double(r.threshold_mean) << " (se "
       << format_double(r.threshold_se) << ") fraction=" << format_double(r.fraction_mean)
       << " (se " << format_double(r.fraction_se) << ")\n";
  }
  return os.str();
}

std::string LimitReport::to_csv() const
{
  std::ostringstream os;
  os << "buyers,threshold_mean,threshold_se,fraction_mean,fraction_se,price,target_fraction\n";
  for (auto const &r : rows)
  {
    os << r.buyers << ',' << format_double(r.threshold_mean) << ',' << format_double(r.threshold_se)
       << ',' << format_double(r.fraction_mean) << ',' << format_double(r.fraction_se) << ','
       << format_double(price) << ',' << format_double(target_fraction) << '\n';
  }
  return os.str();
}

}  // namespace clubgood
