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

#include "clubgood/acceptance.hpp"

#include "clubgood/allocation.hpp"
#include "clubgood/errors.hpp"
#include "clubgood/indirect.hpp"
#include "clubgood/numerics.hpp"
#include "clubgood/payments.hpp"
#include "clubgood/verification.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <memory>
#include <sstream>

namespace clubgood {

namespace {

double elapsed(std::chrono::steady_clock::time_point start)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v)
{
  return format_double(v);
}

}  // namespace

Economy random_regular_economy(std::uint64_t seed, std::uint64_t index, int min_buyers,
                               int max_buyers)
{
  if (min_buyers < 1 || max_buyers < min_buyers)
  {
    throw ConfigError("invalid buyer range for random economies");
  }
  for (std::uint64_t attempt = 0; attempt < 64; ++attempt)
  {
    std::uint64_t stream = index * 64 + attempt;
    auto          u      = [&](std::uint64_t j) { return counter_uniform(seed, stream, j); };
    int           span   = max_buyers - min_buyers + 1;
    int n = min_buyers + std::min(span - 1, static_cast<int>(u(0) * static_cast<double>(span)));
    double upper = 0.5 + 1.5 * u(2);

    // Increasing densities keep the hazard rate increasing.
    TypeDistribution dist = TypeDistribution::uniform(upper);
    if (u(1) >= 0.5)
    {
      double d1 = 0.2 + u(3), d2 = d1 * (1.0 + u(4)), d3 = d2 * (1.0 + u(5));
      double total = d1 + d2 + d3;
      dist         = TypeDistribution::piecewise_linear({{0.0, 0.0},
                                                 {upper / 3.0, d1 / total},
                                                 {2.0 * upper / 3.0, (d1 + d2) / total},
                                                 {upper, 1.0}});
    }

    ValuationModel val = ValuationModel::no_network_effects();
    double         pick = u(6);
    if (pick < 0.25)
    {
      val = ValuationModel::pi_family(u(7));
    }
    else if (pick < 0.5)
    {
      double intercept = 0.5 + u(7);
      double slope     = (u(8) - 0.5) * 2.0 * intercept / (n + 1.0);
      val              = ValuationModel::linear_in_k(intercept, slope);
    }
    else if (pick < 0.75)
    {
      double level = 1.0 + u(7);
      val          = ValuationModel::saturating(level, (u(8) - 0.5) * level);
    }

    std::vector<double> phi(static_cast<std::size_t>(n) + 1, 0.0);
    for (int k = 1; k <= n; ++k)
    {
      phi[static_cast<std::size_t>(k)] =
          phi[static_cast<std::size_t>(k - 1)] + (u(10 + static_cast<std::uint64_t>(k)) - 0.4) * 0.3;
    }
    double cost = (0.05 + 0.9 * u(9)) * 0.5 * upper * n;
    try
    {
      return Economy(n, cost, dist, val, phi, 201);
    }
    catch (PreconditionError const &)
    {
    }
  }
  throw PreconditionError("no regular economy found for index " + std::to_string(index));
}

std::string OracleCheckReport::to_text() const
{
  std::ostringstream os;
  os << "oracle-check " << (pass ? "PASS" : "FAIL") << " economies=" << economies
     << " profiles=" << profiles << " profit_failures=" << profit_failures
     << " set_failures=" << set_failures << " sets_compared=" << sets_compared
     << " worst_profit_gap=" << fmt(worst_profit_gap) << "\n";
  if (!witness.empty())
  {
    os << "witness: " << witness << "\n";
  }
  return os.str();
}

OracleCheckReport oracle_check(std::uint64_t seed, std::size_t economies, std::size_t profiles,
                               int min_buyers, int max_buyers, int threads)
{
  if (max_buyers > 20)
  {
    throw ConfigError("the brute-force oracle handles at most 20 buyers");
  }
  struct Partial
  {
    std::size_t profit_failures = 0, set_failures = 0, sets_compared = 0;
    double      worst           = 0.0;
    std::string witness;
  };
  std::vector<Partial> parts(economies);
  parallel_for(economies, threads, [&](std::size_t e) {
    Economy  econ = random_regular_economy(seed, e, min_buyers, max_buyers);
    Partial &p    = parts[e];
    auto     n    = static_cast<std::size_t>(econ.buyers());
    std::vector<double> profile(n);
    for (std::size_t s = 0; s < profiles; ++s)
    {
      for (std::size_t i = 0; i < n; ++i)
      {
        profile[i] = econ.distribution().quantile(counter_uniform(seed, 1000000 + e, s * n + i));
      }
      Allocation       fast  = solve_allocation(econ, profile);
      OracleAllocation slow  = brute_force_allocation(econ, profile);
      double           gap   = std::abs(fast.profit - slow.allocation.profit);
      double           scale = std::max(1.0, std::abs(slow.allocation.profit));
      p.worst                = std::max(p.worst, gap / scale);
      bool bad_profit        = gap > 1e-9 * scale;
      bool bad_set           = false;
      if (slow.runner_up_margin > 1e-7)
      {
        ++p.sets_compared;
        bad_set = fast.consume != slow.allocation.consume;
      }
      p.profit_failures += bad_profit ? 1 : 0;
      p.set_failures += bad_set ? 1 : 0;
      if ((bad_profit || bad_set) && p.witness.empty())
      {
        std::ostringstream os;
        os << "economy " << e << " profile";
        for (double t : profile)
        {
          os << ' ' << fmt(t);
        }
        os << " fast " << fmt(fast.profit) << " oracle " << fmt(slow.allocation.profit);
        p.witness = os.str();
      }
    }
  });
  OracleCheckReport rep;
  rep.economies = economies;
  rep.profiles  = economies * profiles;
  for (Partial const &p : parts)
  {
    rep.profit_failures += p.profit_failures;
    rep.set_failures += p.set_failures;
    rep.sets_compared += p.sets_compared;
    rep.worst_profit_gap = std::max(rep.worst_profit_gap, p.worst);
    if (rep.witness.empty())
    {
      rep.witness = p.witness;
    }
  }
  rep.pass = rep.profit_failures == 0 && rep.set_failures == 0;
  return rep;
}

namespace {

struct Panel
{
  char                  tag;
  std::array<double, 3> phi;
  double                intercept, slope;  // v = (intercept + slope k) theta
  double                solo_threshold, joint_sum;
};

// Labels of the two-buyer uniform economy with linear value weights, from the
// affine virtual surpluses of the four consumer sets. Ties favour larger sets.
std::uint8_t affine_label(Panel const &p, double cost, double t1, double t2)
{
  auto   w  = [&](int k) { return p.intercept + p.slope * k; };
  double c1 = cost - p.phi[1] + p.phi[0], c2 = cost - p.phi[2] + p.phi[0];
  std::array<double, 4> s{0.0, w(1) * (2 * t1 - 1) - c1, w(1) * (2 * t2 - 1) - c1,
                          w(2) * (2 * t1 - 1) + w(2) * (2 * t2 - 1) - c2};
  std::uint8_t best = 0;
  for (std::uint8_t m : {std::uint8_t{3}, std::uint8_t{1}, std::uint8_t{2}})
  {
    if (s[m] > s[best] || (s[m] == s[best] && best == 0))
    {
      best = m;
    }
  }
  // Exact ties between a singleton and the pair go to the pair.
  if (best != 3 && s[3] >= s[best] && s[3] >= 0.0)
  {
    best = 3;
  }
  return best;
}

CriterionResult criterion_oracle(AcceptanceOptions const &o)
{
  auto              start = std::chrono::steady_clock::now();
  OracleCheckReport rep   = oracle_check(o.seed, 500, 200, 2, 8, o.threads);
  CriterionResult   r;
  r.id      = 1;
  r.name    = "oracle-equivalence";
  r.seconds = elapsed(start);
  r.pass    = rep.pass && r.seconds < 120.0;
  r.detail  = "500 economies x 200 profiles, profit failures " + std::to_string(rep.profit_failures) +
             ", set failures " + std::to_string(rep.set_failures) + " of " +
             std::to_string(rep.sets_compared) + " compared, worst gap " + fmt(rep.worst_profit_gap);
  return r;
}

CriterionResult criterion_regions(AcceptanceOptions const &o)
{
  auto                     start = std::chrono::steady_clock::now();
  double const             cost  = 0.5;
  std::vector<Panel> const panels{
      {'a', {0.0, 0.0, 0.0}, 1.0, 0.0, 0.75, 1.25},
      {'b', {0.0, 0.1, 0.1}, 1.0, 0.0, 0.7, 1.2},
      {'c', {0.0, 0.1, 0.2}, 1.0, 0.0, 0.7, 23.0 / 20.0},
      {'d', {0.0, 0.1, 0.2}, 2.0 / 3.0, 1.0 / 3.0, 0.7, 89.0 / 80.0},
  };
  CriterionResult r;
  r.id   = 2;
  r.name = "region-grids";
  r.pass = true;
  std::ostringstream detail;
  for (Panel const &p : panels)
  {
    auto    pstart = std::chrono::steady_clock::now();
    Economy econ(2, cost, TypeDistribution::uniform(1.0),
                 p.slope == 0.0 ? ValuationModel::no_network_effects()
                                : ValuationModel::linear_in_k(p.intercept, p.slope),
                 {p.phi.begin(), p.phi.end()});
    RegionGrid  grid = region_grid(econ, 2001, o.threads);
    int const   res  = grid.resolution;
    std::vector<std::uint8_t> want(static_cast<std::size_t>(res) * static_cast<std::size_t>(res));
    for (int i = 0; i < res; ++i)
    {
      for (int j = 0; j < res; ++j)
      {
        want[static_cast<std::size_t>(i * res + j)] = affine_label(p, cost, grid.center(i), grid.center(j));
      }
    }
    std::size_t mismatches = 0, compared = 0;
    for (int i = 0; i < res; ++i)
    {
      for (int j = 0; j < res; ++j)
      {
        std::uint8_t w    = want[static_cast<std::size_t>(i * res + j)];
        bool         band = false;
        for (int di = -1; di <= 1; ++di)
        {
          for (int dj = -1; dj <= 1; ++dj)
          {
            int ii = i + di, jj = j + dj;
            if (ii >= 0 && jj >= 0 && ii < res && jj < res &&
                want[static_cast<std::size_t>(ii * res + jj)] != w)
            {
              band = true;
            }
          }
        }
        if (!band)
        {
          ++compared;
          mismatches += grid.label(i, j) != w ? 1 : 0;
        }
      }
    }
    // The affine surpluses reproduce the stated solo threshold and joint line.
    double w1 = p.intercept + p.slope, w2 = p.intercept + 2 * p.slope;
    double solo  = 0.5 * (1.0 + (cost - p.phi[1]) / w1);
    double joint = 1.0 + 0.5 * (cost - p.phi[2]) / w2;
    bool   lines = std::abs(solo - p.solo_threshold) < 1e-12 && std::abs(joint - p.joint_sum) < 1e-12;
    double secs  = elapsed(pstart);
    bool   ok    = mismatches == 0 && lines && secs < 60.0;
    r.pass       = r.pass && ok;
    detail << "(" << p.tag << ") mismatches " << mismatches << "/" << compared << " solo " << fmt(solo)
           << " joint " << fmt(joint) << "; ";
  }
  r.seconds = elapsed(start);
  r.detail  = detail.str();
  return r;
}

CriterionResult criterion_cutoffs(AcceptanceOptions const &)
{
  auto            start = std::chrono::steady_clock::now();
  CriterionResult r;
  r.id   = 3;
  r.name = "benchmark-cutoffs";
  std::ostringstream detail;
  double             worst = 0.0;
  auto               note  = [&](char const *label, double got, double want) {
    worst = std::max(worst, std::abs(got - want));
    detail << label << " " << fmt(got) << "; ";
  };
  note("reserve(1)", rival_reserve(1.0, 0.25), 5.0 / 8.0);
  note("reserve(2/3)", rival_reserve(2.0 / 3.0, 0.25), 11.0 / 16.0);
  BenchmarkCutoffs neg = solve_benchmark_cutoffs(5.0 / 8.0, 0.25);
  note("x(5/8)", neg.x, 19.0 / 30.0);
  note("y(5/8)", neg.y, 0.7);
  note("z(5/8)", neg.z, 5.0 / 6.0);
  BenchmarkCutoffs pos = solve_benchmark_cutoffs(3.0 / 8.0, 0.25);
  note("x(3/8)", pos.x, 0.3);
  note("y(3/8)", pos.y, 11.0 / 30.0);
  note("z(3/8)", pos.z, 5.0 / 6.0);
  note("entry(0)", shared_entry(0.0, 0.25), 1.0 / 8.0);
  Economy econ      = pi_economy(0.0, 0.25);
  double  line_error = 0.0;
  for (double t2 : {0.2, 0.4, 0.6, 0.8, 1.0})
  {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 80; ++it)
    {
      double mid        = 0.5 * (lo + hi);
      double profile[2] = {mid, t2};
      (provision_possible(econ, profile) ? hi : lo) = mid;
    }
    line_error = std::max(line_error, std::abs(hi - (9.0 / 8.0 - t2)));
  }
  worst = std::max(worst, line_error);
  detail << "provision line t1+t2=9/8 error " << fmt(line_error) << " at 5 points";
  r.pass    = worst <= 1e-8;
  r.seconds = elapsed(start);
  r.detail  = "worst error " + fmt(worst) + "; " + detail.str();
  return r;
}

std::vector<std::pair<std::string, Economy>> sweep_economies()
{
  std::vector<std::pair<std::string, Economy>> out;
  auto dist = TypeDistribution::uniform(1.0);
  out.emplace_back("2a", Economy(2, 0.5, dist, ValuationModel::no_network_effects(), {0.0, 0.0, 0.0}));
  out.emplace_back("2b", Economy(2, 0.5, dist, ValuationModel::no_network_effects(), {0.0, 0.1, 0.1}));
  out.emplace_back("2c", Economy(2, 0.5, dist, ValuationModel::no_network_effects(), {0.0, 0.1, 0.2}));
  out.emplace_back("2d", Economy(2, 0.5, dist, ValuationModel::linear_in_k(2.0 / 3.0, 1.0 / 3.0),
                                 {0.0, 0.1, 0.2}));
  for (auto [label, pi] : std::vector<std::pair<char const *, double>>{
           {"3(pi=1)", 1.0}, {"3(pi=2/3)", 2.0 / 3.0}, {"3(pi=5/8)", 5.0 / 8.0},
           {"3(pi=3/8)", 3.0 / 8.0}, {"3(pi=0)", 0.0}})
  {
    out.emplace_back(label, pi_economy(pi, 0.25));
  }
  return out;
}

CriterionResult criterion_incentives(AcceptanceOptions const &o)
{
  auto            start = std::chrono::steady_clock::now();
  CriterionResult r;
  r.id   = 4;
  r.name = "incentive-sweeps";
  r.pass = true;
  double      worst_gain = -1e300, worst_util = 1e300;
  std::string where_gain, where_util;
  std::uint64_t salt = 0;
  for (auto const &[label, econ] : sweep_economies())
  {
    auto grid = linspace(0.0, econ.upper(), 101);
    auto dsic = check_dsic(econ, grid, grid, 500, o.seed + salt, o.threads);
    auto ir   = check_ir(econ, grid, 500, o.seed + salt, o.threads);
    ++salt;
    r.pass = r.pass && dsic.worst <= 1e-8 && ir.worst >= -1e-10;
    if (dsic.worst > worst_gain)
    {
      worst_gain = dsic.worst;
      where_gain = label;
    }
    if (ir.worst < worst_util)
    {
      worst_util = ir.worst;
      where_util = label;
    }
  }
  r.seconds = elapsed(start);
  r.pass    = r.pass && r.seconds < 300.0;
  r.detail  = "9 economies, worst lying gain " + fmt(worst_gain) + " (" + where_gain +
             "), worst utility " + fmt(worst_util) + " (" + where_util + ")";
  return r;
}

std::vector<double> quadrature_payments(Economy const &econ, std::vector<double> const &grid, int threads,
                                        OpponentQuadrature const &quad)
{
  std::vector<double> m(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t g) { m[g] = quad.at(grid[g]).m; });
  (void)econ;
  return m;
}

CriterionResult criterion_monotone(AcceptanceOptions const &o)
{
  auto            start = std::chrono::steady_clock::now();
  CriterionResult r;
  r.id   = 5;
  r.name = "interim-monotonicity";
  double worst = 0.0;
  auto   grid  = linspace(0.0, 1.0, 401);
  for (double pi : {0.0, 3.0 / 8.0, 5.0 / 8.0, 1.0})
  {
    Economy            econ = pi_economy(pi, 0.25);
    OpponentQuadrature quad(econ, 0);
    auto               m = quadrature_payments(econ, grid, o.threads, quad);
    for (std::size_t g = 1; g < m.size(); ++g)
    {
      worst = std::max(worst, m[g - 1] - m[g]);
    }
  }
  r.pass    = worst <= 1e-9;
  r.seconds = elapsed(start);
  r.detail  = "pi in {0,3/8,5/8,1}, 401 points, largest adjacent decrease " + fmt(worst);
  return r;
}

CriterionResult criterion_envelope(AcceptanceOptions const &o)
{
  auto            start = std::chrono::steady_clock::now();
  CriterionResult r;
  r.id   = 6;
  r.name = "envelope-consistency";
  auto               grid = linspace(0.0, 1.0, 401);
  double             worst = 0.0, worst_analytic = 0.0;
  std::ostringstream detail;
  for (double pi : {3.0 / 8.0, 5.0 / 8.0, 1.0})
  {
    Economy            econ = pi_economy(pi, 0.25);
    OpponentQuadrature quad(econ, 0);
    auto               direct   = quadrature_payments(econ, grid, o.threads, quad);
    auto               envelope = envelope_payments(quad, grid);
    double             sup      = 0.0;
    for (std::size_t g = 0; g < grid.size(); ++g)
    {
      sup = std::max(sup, std::abs(direct[g] - envelope[g]));
      if (pi == 1.0 && grid[g] > 5.0 / 8.0)
      {
        double want    = grid[g] * grid[g] / 2.0 + 25.0 / 128.0;
        worst_analytic = std::max(worst_analytic, std::abs(direct[g] - want));
      }
    }
    worst = std::max(worst, sup);
    detail << "pi=" << fmt(pi) << " sup " << fmt(sup) << "; ";
  }
  r.pass    = worst <= 1e-6 && worst_analytic <= 1e-8;
  r.seconds = elapsed(start);
  r.detail  = detail.str() + "pi=1 analytic error " + fmt(worst_analytic);
  return r;
}

CriterionResult criterion_indirect(AcceptanceOptions const &o)
{
  auto            start = std::chrono::steady_clock::now();
  CriterionResult r;
  r.id   = 7;
  r.name = "indirect-implementations";
  r.pass = true;
  TableOptions topts;
  topts.threads = o.threads;
  std::ostringstream detail;
  auto               types = linspace(0.0, 1.0, 101);
  auto               devs  = linspace(0.0, 1.0, 201);
  auto               check = [&](std::string const &label, IndirectGame const &game) {
    EquilibriumReport eq = verify_equilibrium(game, types, devs, 50000, o.seed, o.threads);
    EquilibriumReport oe = verify_outcome_equivalence(game, 201, o.threads);
    r.pass               = r.pass && eq.equilibrium_pass && oe.equivalence_pass;
    detail << label << ": gain " << fmt(eq.worst_gain) << " se " << fmt(eq.worst_stderr)
           << (eq.equilibrium_pass ? "" : " FAIL") << ", mismatches " << oe.mismatches << ", payment gap "
           << fmt(oe.max_payment_gap) << (oe.equivalence_pass ? "" : " FAIL") << "; ";
  };
  for (auto [label, pi] : std::vector<std::pair<char const *, double>>{
           {"allpay(3/8)", 3.0 / 8.0}, {"allpay(5/8)", 5.0 / 8.0}, {"allpay(1)", 1.0}})
  {
    AllPayGame game(pi_economy(pi, 0.25), topts);
    check(label, game);
  }
  {
    GiftGame game(3.0 / 8.0, 0.25, topts);
    check("gift(3/8)", game);
  }
  {
    ExclusivityGame game(5.0 / 8.0, 0.25, topts);
    check("exclusivity(5/8)", game);
  }
  r.seconds = elapsed(start);
  r.detail  = detail.str();
  return r;
}

CriterionResult criterion_limit(AcceptanceOptions const &o)
{
  auto            start = std::chrono::steady_clock::now();
  CriterionResult r;
  r.id   = 8;
  r.name = "posted-price-limit";
  EconomyFamily family;
  family.valuation = ValuationModel::saturating(2.0, 1.0);
  family.phi       = [](int n) { return phi_log(n, 1.0); };
  family.cost      = 1.0;
  LimitReport rep  = posted_price_limit(family, {50, 200, 1000}, 50, o.seed, o.threads);
  LimitRow const &last = rep.rows.back();
  double thr_err  = std::abs(last.threshold_mean - rep.price);
  double frac_err = std::abs(last.fraction_mean - rep.target_fraction);
  r.seconds       = elapsed(start);
  r.pass          = thr_err <= 0.02 && frac_err <= 0.05 && r.seconds < 120.0;
  std::ostringstream detail;
  detail << "p " << fmt(rep.price) << ", N=1000 threshold " << fmt(last.threshold_mean) << " (error "
         << fmt(thr_err) << "), fraction " << fmt(last.fraction_mean) << " vs " << fmt(rep.target_fraction)
         << " over 50 replications";
  r.detail = detail.str();
  return r;
}

// Virtual value recomputed from values and a central difference.
double recomputed_psi(Economy const &econ, double theta, int k)
{
  double h  = 1e-6;
  double lo = std::max(0.0, theta - h), hi = std::min(econ.upper(), theta + h);
  double dv = (econ.value(hi, k) - econ.value(lo, k)) / (hi - lo);
  auto const &d = econ.distribution();
  double      f = d.pdf(theta);
  return econ.value(theta, k) - (1.0 - d.cdf(theta)) / f * dv;
}

CriterionResult criterion_triviality(AcceptanceOptions const &)
{
  auto            start = std::chrono::steady_clock::now();
  CriterionResult r;
  r.id   = 9;
  r.name = "triviality-classification";
  r.pass = true;
  auto dist = TypeDistribution::uniform(1.0);
  std::vector<std::tuple<std::string, Economy, Triviality>> cases;
  cases.emplace_back("c=10", Economy(2, 10.0, dist, ValuationModel::no_network_effects(), phi_zero(2)),
                     Triviality::NeverProvide);
  cases.emplace_back("c=0,phi=5k",
                     Economy(2, 0.0, dist, ValuationModel::no_network_effects(), phi_linear(2, 5.0)),
                     Triviality::AlwaysProvideFree);
  cases.emplace_back("pi=5/8,c=1/4", pi_economy(5.0 / 8.0, 0.25), Triviality::NonTrivial);
  std::ostringstream detail;
  for (auto const &[label, econ, want] : cases)
  {
    TrivialityVerdict v  = classify_trivial(econ);
    int               n  = econ.buyers();
    bool              ok = v.verdict == want;
    bool never = true, always = true;
    for (std::size_t i = 0; i < v.never_provide.size(); ++i)
    {
      Witness const &w   = v.never_provide[i];
      int            k   = static_cast<int>(i) + 1;
      double         lhs = k * recomputed_psi(econ, econ.upper(), k);
      double         rhs = econ.cost() - (econ.phi(k) - econ.phi(0));
      ok = ok && std::abs(lhs - w.lhs) < 1e-5 && std::abs(rhs - w.rhs) < 1e-12 && w.holds == (lhs < rhs);
      never = never && w.holds;
    }
    double psi0 = recomputed_psi(econ, 0.0, n);
    for (std::size_t i = 0; i < v.always_provide.size(); ++i)
    {
      Witness const &w = v.always_provide[i];
      double         lhs, rhs;
      if (i == 0)
      {
        lhs = n * psi0;
        rhs = econ.cost() - (econ.phi(n) - econ.phi(0));
      }
      else
      {
        int k = static_cast<int>(i);
        lhs   = (n - k) * psi0;
        rhs   = econ.phi(k) - econ.phi(n) + k * (recomputed_psi(econ, 0.0, k) - psi0);
      }
      ok     = ok && std::abs(lhs - w.lhs) < 1e-5 && std::abs(rhs - w.rhs) < 1e-5 && w.holds == (lhs >= rhs);
      always = always && w.holds;
    }
    Triviality implied = never ? Triviality::NeverProvide
                               : (always ? Triviality::AlwaysProvideFree : Triviality::NonTrivial);
    ok     = ok && implied == v.verdict;
    r.pass = r.pass && ok;
    detail << label << " -> " << to_string(v.verdict) << (ok ? "" : " (inconsistent)") << "; ";
  }
  r.seconds = elapsed(start);
  r.detail  = detail.str();
  return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(AcceptanceOptions const &options,
                                            std::function<void(CriterionResult const &)> const &on_result)
{
  using Fn = CriterionResult (*)(AcceptanceOptions const &);
  std::array<Fn, 9> const all{criterion_oracle,   criterion_regions,  criterion_cutoffs,
                              criterion_incentives, criterion_monotone, criterion_envelope,
                              criterion_indirect, criterion_limit,    criterion_triviality};
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 9; ++id)
  {
    if (!options.only.empty() &&
        std::find(options.only.begin(), options.only.end(), id) == options.only.end())
    {
      continue;
    }
    CriterionResult r;
    try
    {
      r = all[static_cast<std::size_t>(id - 1)](options);
    }
    catch (std::exception const &e)
    {
      r.id     = id;
      r.name   = "criterion-" + std::to_string(id);
      r.pass   = false;
      r.detail = std::string("error: ") + e.what();
    }
    if (on_result)
    {
      on_result(r);
    }
    out.push_back(r);
  }
  return out;
}

std::string format_criterion(CriterionResult const &r, bool with_time)
{
  std::ostringstream os;
  os << (r.pass ? "PASS" : "FAIL") << " criterion " << r.id << " " << r.name << " ";
  if (with_time)
  {
    os << "[" << fmt(std::round(r.seconds * 10.0) / 10.0) << " s] ";
  }
  os << r.detail;
  return os.str();
}

}  // namespace clubgood
