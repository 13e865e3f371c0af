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

#include "clubgood/payments.hpp"

#include "clubgood/errors.hpp"
#include "clubgood/numerics.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace clubgood {

namespace {

struct PathState
{
  bool consume = false;
  int  size    = 0;

  bool operator==(PathState const &o) const { return consume == o.consume && size == o.size; }
  bool operator!=(PathState const &o) const { return !(*this == o); }
};

constexpr int kMaxBisection = 60;

}  // namespace

PathSegment const &OwnTypePath::at(double theta) const
{
  auto it = std::upper_bound(segments.begin(), segments.end(), theta,
                             [](double t, PathSegment const &s) { return t < s.lo; });
  if (it == segments.begin())
  {
    return segments.front();
  }
  return *(it - 1);
}

double OwnTypePath::entry_cutoff() const
{
  for (auto const &s : segments)
  {
    if (s.consume)
    {
      return s.lo;
    }
  }
  return std::numeric_limits<double>::infinity();
}

bool OwnTypePath::same_states(OwnTypePath const &other) const
{
  if (segments.size() != other.segments.size())
  {
    return false;
  }
  for (std::size_t i = 0; i < segments.size(); ++i)
  {
    if (segments[i].consume != other.segments[i].consume ||
        segments[i].set_size != other.segments[i].set_size)
    {
      return false;
    }
  }
  return true;
}

OwnTypePath own_type_path(Economy const &economy, int buyer, std::span<double const> profile,
                          double limit, double tolerance)
{
  if (buyer < 0 || buyer >= economy.buyers())
  {
    throw std::out_of_range("buyer index out of range");
  }
  if (profile.size() != static_cast<std::size_t>(economy.buyers()))
  {
    throw std::invalid_argument("profile length must equal the number of buyers");
  }
  if (!(limit >= 0.0 && limit <= economy.upper()))
  {
    throw std::invalid_argument("path limit outside the support");
  }
  std::vector<double> work(profile.begin(), profile.end());
  AllocationSolver    solver(economy);
  std::vector<bool>   consume;
  std::size_t const   self  = static_cast<std::size_t>(buyer);
  auto                state = [&](double x) {
    work[self]   = x;
    int const k  = solver.solve(work, consume);
    return PathState{consume[self], k};
  };

  OwnTypePath path;
  path.buyer = buyer;
  path.limit = limit;
  if (limit == 0.0)
  {
    PathState const s = state(0.0);
    path.segments.push_back({0.0, 0.0, s.consume, s.size});
    return path;
  }

  double const width = tolerance * std::max(1.0, economy.upper());
  std::vector<std::pair<double, PathState>> breaks;

  // Splits [a, b] until every change of state sits in a bracket of `width`.
  auto refine = [&](auto &&self_ref, double a, PathState sa, double b, PathState sb, int depth) -> void {
    if (b - a <= width)
    {
      breaks.emplace_back(0.5 * (a + b), sb);
      return;
    }
    if (depth >= kMaxBisection)
    {
      throw NumericalError("jump localization did not converge within 60 bisection steps");
    }
    double const    m  = 0.5 * (a + b);
    PathState const sm = state(m);
    if (sm != sa)
    {
      self_ref(self_ref, a, sa, m, sm, depth + 1);
    }
    if (sm != sb)
    {
      self_ref(self_ref, m, sm, b, sb, depth + 1);
    }
  };

  constexpr int scan = 16;
  PathState     first = state(0.0);
  PathState     prev  = first;
  double        prev_x = 0.0;
  for (int j = 1; j <= scan; ++j)
  {
    double const    x = j == scan ? limit : limit * j / scan;
    PathState const s = state(x);
    if (s != prev)
    {
      refine(refine, prev_x, prev, x, s, 0);
    }
    prev   = s;
    prev_x = x;
  }

  double    lo = 0.0;
  PathState cur = first;
  for (auto const &[x, s] : breaks)
  {
    path.segments.push_back({lo, x, cur.consume, cur.size});
    lo  = x;
    cur = s;
  }
  path.segments.push_back({lo, limit, cur.consume, cur.size});
  return path;
}

double path_payment(Economy const &economy, OwnTypePath const &path, double theta)
{
  PathSegment const &here = path.at(theta);
  if (!here.consume)
  {
    return 0.0;
  }
  double m = economy.value(theta, here.set_size);
  for (auto const &s : path.segments)
  {
    if (s.lo >= theta)
    {
      break;
    }
    if (!s.consume)
    {
      continue;
    }
    int const k = s.set_size;
    m -= gauss32([&](double x) { return economy.dvalue(x, k); }, s.lo, std::min(s.hi, theta));
  }
  return m;
}

TransferVector expost_transfers(Economy const &economy, std::span<double const> profile)
{
  Allocation const alloc = solve_allocation(economy, profile);
  TransferVector   out;
  out.payments.assign(profile.size(), 0.0);
  for (std::size_t i = 0; i < profile.size(); ++i)
  {
    if (!alloc.consume[i])
    {
      continue;
    }
    double const      theta = profile[i];
    OwnTypePath const path  = own_type_path(economy, static_cast<int>(i), profile, theta, 1e-13);
    double            m     = economy.value(theta, alloc.set_size);
    for (auto const &s : path.segments)
    {
      if (!s.consume || s.lo >= theta)
      {
        continue;
      }
      int const k = s.set_size;
      m -= gauss32([&](double x) { return economy.dvalue(x, k); }, s.lo, std::min(s.hi, theta));
    }
    out.payments[i] = m;
  }
  return out;
}

double InterimPoint::total_q() const
{
  double s = 0.0;
  for (double q : q_by_k)
  {
    s += q;
  }
  return s;
}

OpponentQuadrature::OpponentQuadrature(Economy const &economy, int buyer)
  : economy_(economy)
  , buyer_(buyer)
{
  if (economy.buyers() != 2)
  {
    throw PreconditionError("quadrature over opponents needs exactly two buyers");
  }
  if (buyer < 0 || buyer > 1)
  {
    throw std::out_of_range("buyer index out of range");
  }
  double const upper = economy.upper();
  auto         path_for = [&](double t) {
    double profile[2];
    profile[buyer_]     = 0.0;
    profile[1 - buyer_] = t;
    return own_type_path(economy_, buyer_, profile, upper);
  };
  double const width = 1e-13 * std::max(1.0, upper);
  auto refine = [&](auto &&self_ref, double a, OwnTypePath const &pa, double b, OwnTypePath const &pb,
                    int depth) -> void {
    if (b - a <= width || depth >= kMaxBisection)
    {
      structural_breaks_.push_back(0.5 * (a + b));
      return;
    }
    double const      m  = 0.5 * (a + b);
    OwnTypePath const pm = path_for(m);
    if (!pm.same_states(pa))
    {
      self_ref(self_ref, a, pa, m, pm, depth + 1);
    }
    if (!pm.same_states(pb))
    {
      self_ref(self_ref, m, pm, b, pb, depth + 1);
    }
  };
  constexpr int scan = 256;
  OwnTypePath   prev = path_for(0.0);
  double        prev_t = 0.0;
  for (int j = 1; j <= scan; ++j)
  {
    double const t   = j == scan ? upper : upper * j / scan;
    OwnTypePath  cur = path_for(t);
    if (!cur.same_states(prev))
    {
      refine(refine, prev_t, prev, t, cur, 0);
    }
    prev   = std::move(cur);
    prev_t = t;
  }
  for (auto const &k : economy.distribution().knots())
  {
    if (k.theta > 0.0 && k.theta < upper)
    {
      structural_breaks_.push_back(k.theta);
    }
  }
  std::sort(structural_breaks_.begin(), structural_breaks_.end());
}

std::pair<unsigned, int> OpponentQuadrature::state(double theta, double t) const
{
  double profile[2];
  profile[buyer_]     = theta;
  profile[1 - buyer_] = t;
  AllocationSolver  solver(economy_);
  std::vector<bool> consume;
  int const         k    = solver.solve(profile, consume);
  unsigned          mask = (consume[0] ? 1U : 0U) | (consume[1] ? 2U : 0U);
  return {mask, k};
}

std::vector<double> OpponentQuadrature::panels(double theta) const
{
  double const        upper = economy_.upper();
  double const        width = 1e-13 * std::max(1.0, upper);
  std::vector<double> out   = structural_breaks_;
  out.push_back(0.0);
  out.push_back(upper);

  double profile[2];
  profile[buyer_] = theta;
  AllocationSolver  solver(economy_);
  std::vector<bool> consume;
  auto st = [&](double t) {
    profile[1 - buyer_] = t;
    int const k         = solver.solve(profile, consume);
    return std::pair<unsigned, int>{(consume[0] ? 1U : 0U) | (consume[1] ? 2U : 0U), k};
  };
  auto refine = [&](auto &&self_ref, double a, std::pair<unsigned, int> sa, double b,
                    std::pair<unsigned, int> sb, int depth) -> void {
    if (b - a <= width || depth >= kMaxBisection)
    {
      out.push_back(0.5 * (a + b));
      return;
    }
    double const m  = 0.5 * (a + b);
    auto const   sm = st(m);
    if (sm != sa)
    {
      self_ref(self_ref, a, sa, m, sm, depth + 1);
    }
    if (sm != sb)
    {
      self_ref(self_ref, m, sm, b, sb, depth + 1);
    }
  };
  constexpr int scan = 32;
  auto          prev = st(0.0);
  double        prev_t = 0.0;
  for (int j = 1; j <= scan; ++j)
  {
    double const t   = j == scan ? upper : upper * j / scan;
    auto const   cur = st(t);
    if (cur != prev)
    {
      refine(refine, prev_t, prev, t, cur, 0);
    }
    prev   = cur;
    prev_t = t;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> OpponentQuadrature::allocation_at(double theta) const
{
  std::vector<double> q(2, 0.0);
  std::vector<double> const br = panels(theta);
  auto const &dist = economy_.distribution();
  for (std::size_t p = 1; p < br.size(); ++p)
  {
    double const a = br[p - 1];
    double const b = br[p];
    if (!(b > a))
    {
      continue;
    }
    auto const [mask, k] = state(theta, 0.5 * (a + b));
    if ((mask >> static_cast<unsigned>(buyer_)) & 1U)
    {
      q[static_cast<std::size_t>(k - 1)] += dist.cdf(b) - dist.cdf(a);
    }
  }
  return q;
}

InterimPoint OpponentQuadrature::at(double theta) const
{
  InterimPoint out;
  out.q_by_k.assign(2, 0.0);
  std::vector<double> const br   = panels(theta);
  auto const               &dist = economy_.distribution();
  for (std::size_t p = 1; p < br.size(); ++p)
  {
    double const a = br[p - 1];
    double const b = br[p];
    if (!(b > a))
    {
      continue;
    }
    auto const [mask, k] = state(theta, 0.5 * (a + b));
    if (!((mask >> static_cast<unsigned>(buyer_)) & 1U))
    {
      continue;
    }
    out.q_by_k[static_cast<std::size_t>(k - 1)] += dist.cdf(b) - dist.cdf(a);
    auto integrand = [&](double t) {
      double profile[2];
      profile[buyer_]     = theta;
      profile[1 - buyer_] = t;
      OwnTypePath const path = own_type_path(economy_, buyer_, profile, theta, 1e-12);
      return path_payment(economy_, path, theta) * dist.pdf(t);
    };
    // Breakpoints carry bisection noise near 1e-12, so the split test cannot go below it.
    out.m += adaptive_gauss32(integrand, a, b, 1e-11 * (b - a), 6);
  }
  return out;
}

std::vector<double> envelope_payments(OpponentQuadrature const &quadrature,
                                      std::vector<double> const &grid)
{
  Economy const &economy = quadrature.economy();
  auto           rent    = [&](double s) {
    std::vector<double> const q   = quadrature.allocation_at(s);
    double                    sum = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k)
    {
      if (q[k] > 0.0)
      {
        sum += q[k] * economy.dvalue(s, static_cast<int>(k) + 1);
      }
    }
    return sum;
  };
  std::vector<double> out(grid.size());
  double              cumulative = 0.0;
  double              prev       = 0.0;
  for (std::size_t g = 0; g < grid.size(); ++g)
  {
    cumulative += adaptive_gauss32(rent, prev, grid[g], 1e-13, 40);
    prev = grid[g];
    std::vector<double> const q = quadrature.allocation_at(grid[g]);
    double                    m = -cumulative;
    for (std::size_t k = 0; k < q.size(); ++k)
    {
      m += q[k] * economy.value(grid[g], static_cast<int>(k) + 1);
    }
    out[g] = m;
  }
  return out;
}

InterimSchedule interim_schedule(Economy const &economy, int buyer, std::vector<double> const &grid,
                                 InterimOptions const &options)
{
  if (grid.empty())
  {
    throw std::invalid_argument("interim schedule needs a nonempty grid");
  }
  for (std::size_t g = 0; g < grid.size(); ++g)
  {
    if (!(grid[g] >= 0.0 && grid[g] <= economy.upper()) || (g > 0 && !(grid[g] > grid[g - 1])))
    {
      throw std::invalid_argument("interim grid must be ascending inside the support");
    }
  }
  if (buyer < 0 || buyer >= economy.buyers())
  {
    throw std::out_of_range("buyer index out of range");
  }
  std::size_t const n = static_cast<std::size_t>(economy.buyers());
  InterimSchedule   out;
  out.buyer  = buyer;
  out.theta  = grid;
  out.method = options.method;
  out.q_by_k.assign(n, std::vector<double>(grid.size(), 0.0));
  out.m.assign(grid.size(), 0.0);

  if (options.method == InterimMethod::Quadrature)
  {
    OpponentQuadrature const quad(economy, buyer);
    parallel_for(grid.size(), options.threads, [&](std::size_t g) {
      InterimPoint const p = quad.at(grid[g]);
      for (std::size_t k = 0; k < n; ++k)
      {
        out.q_by_k[k][g] = p.q_by_k[k];
      }
      out.m[g] = p.m;
    });
    return out;
  }

  if (options.draws == 0)
  {
    throw std::invalid_argument("Monte Carlo needs at least one draw");
  }
  if (economy.buyers() < 2)
  {
    throw PreconditionError("Monte Carlo over opponents needs at least two buyers");
  }
  out.seed  = options.seed;
  out.draws = options.draws;

  // Fixed-size blocks summed in order keep the result independent of threads.
  constexpr std::size_t block  = 1000;
  std::size_t const     blocks = (options.draws + block - 1) / block;
  std::size_t const     cells  = grid.size();
  struct Partial
  {
    std::vector<double> q;  // n * cells
    std::vector<double> m;
    std::vector<double> m2;
  };
  std::vector<Partial> partial(blocks);
  double const         limit = grid.back();
  parallel_for(blocks, options.threads, [&](std::size_t b) {
    Partial &acc = partial[b];
    acc.q.assign(n * cells, 0.0);
    acc.m.assign(cells, 0.0);
    acc.m2.assign(cells, 0.0);
    std::vector<double> profile(n);
    std::size_t const   end = std::min(options.draws, (b + 1) * block);
    for (std::size_t d = b * block; d < end; ++d)
    {
      std::size_t slot = 0;
      for (std::size_t j = 0; j < n; ++j)
      {
        if (static_cast<int>(j) == buyer)
        {
          profile[j] = 0.0;
          continue;
        }
        profile[j] = economy.distribution().quantile(counter_uniform(options.seed, d, slot++));
      }
      OwnTypePath const path = own_type_path(economy, buyer, profile, limit);
      for (std::size_t g = 0; g < cells; ++g)
      {
        PathSegment const &s = path.at(grid[g]);
        if (!s.consume)
        {
          continue;
        }
        acc.q[static_cast<std::size_t>(s.set_size - 1) * cells + g] += 1.0;
        double const m = path_payment(economy, path, grid[g]);
        acc.m[g] += m;
        acc.m2[g] += m * m;
      }
    }
  });
  std::vector<double> m2(cells, 0.0);
  for (auto const &acc : partial)
  {
    for (std::size_t k = 0; k < n; ++k)
    {
      for (std::size_t g = 0; g < cells; ++g)
      {
        out.q_by_k[k][g] += acc.q[k * cells + g];
      }
    }
    for (std::size_t g = 0; g < cells; ++g)
    {
      out.m[g] += acc.m[g];
      m2[g] += acc.m2[g];
    }
  }
  double const draws = static_cast<double>(options.draws);
  out.m_stderr.assign(cells, 0.0);
  for (std::size_t g = 0; g < cells; ++g)
  {
    for (std::size_t k = 0; k < n; ++k)
    {
      out.q_by_k[k][g] /= draws;
    }
    double const mean = out.m[g] / draws;
    double const var  = std::max(0.0, m2[g] / draws - mean * mean);
    out.m[g]          = mean;
    out.m_stderr[g]   = options.draws > 1 ? std::sqrt(var / (draws - 1.0)) : 0.0;
  }
  return out;
}

std::string InterimSchedule::to_csv() const
{
  std::ostringstream os;
  os << "theta";
  for (std::size_t k = 0; k < q_by_k.size(); ++k)
  {
    os << ",Q_" << (k + 1);
  }
  os << ",M,stderr_M\n";
  for (std::size_t g = 0; g < theta.size(); ++g)
  {
    os << format_double(theta[g]);
    for (auto const &q : q_by_k)
    {
      os << ',' << format_double(q[g]);
    }
    os << ',' << format_double(m[g]) << ',';
    if (!m_stderr.empty())
    {
      os << format_double(m_stderr[g]);
    }
    os << '\n';
  }
  return os.str();
}

namespace {

// Opponent profiles used to probe a buyer's allocation map. Two buyers: a grid
// over the single opponent. More buyers: the diagonal plus seeded random draws.
std::vector<std::vector<double>> opponent_sample(Economy const &economy, int buyer, int resolution)
{
  std::size_t const                n = static_cast<std::size_t>(economy.buyers());
  std::vector<std::vector<double>> out;
  for (double t : linspace(0.0, economy.upper(), static_cast<std::size_t>(resolution)))
  {
    out.emplace_back(n, t);
  }
  if (n > 2)
  {
    for (int d = 0; d < resolution; ++d)
    {
      std::vector<double> p(n);
      for (std::size_t j = 0; j < n; ++j)
      {
        p[j] = economy.distribution().quantile(counter_uniform(0x5eedULL, static_cast<std::uint64_t>(d), j));
      }
      out.push_back(std::move(p));
    }
  }
  for (auto &p : out)
  {
    p[static_cast<std::size_t>(buyer)] = 0.0;
  }
  return out;
}

}  // namespace

ServedBounds served_bounds(Economy const &economy, int search_resolution)
{
  if (search_resolution < 3)
  {
    throw std::invalid_argument("served bounds need a search resolution of at least 3");
  }
  if (classify_trivial(economy).verdict != Triviality::NonTrivial)
  {
    throw PreconditionError("served bounds are undefined for a trivial economy");
  }
  double const upper = economy.upper();
  std::size_t const n = static_cast<std::size_t>(economy.buyers());
  ServedBounds out;
  out.resolution = search_resolution;

  auto entry_for = [&](std::vector<double> profile) {
    return own_type_path(economy, 0, profile, upper).entry_cutoff();
  };
  auto diagonal = [&](double t) {
    std::vector<double> p(n, t);
    p[0] = 0.0;
    return p;
  };

  std::vector<std::vector<double>> const sample = opponent_sample(economy, 0, search_resolution);
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_index = 0;
  for (std::size_t s = 0; s < sample.size(); ++s)
  {
    double const e = entry_for(sample[s]);
    if (e < best)
    {
      best       = e;
      best_index = s;
    }
  }
  if (!std::isfinite(best))
  {
    throw PreconditionError("no sampled opponent profile lets the buyer consume");
  }
  // Local refinement along the diagonal family around the best grid point.
  if (best_index < static_cast<std::size_t>(search_resolution))
  {
    double const step = upper / (search_resolution - 1);
    double const lo   = std::max(0.0, sample[best_index][n > 1 ? 1 : 0] - step);
    double const hi   = std::min(upper, sample[best_index][n > 1 ? 1 : 0] + step);
    auto         f    = [&](double t) {
      double const e = entry_for(diagonal(t));
      return std::isfinite(e) ? e : 2.0 * upper;
    };
    auto const r = boost::math::tools::brent_find_minima(f, lo, hi, 50);
    best         = std::min(best, r.second);
  }
  out.y_lower = best;

  // Smallest type whose sampled allocation map equals the top type's.
  auto map_of = [&](double theta) {
    std::vector<std::pair<bool, int>> m;
    AllocationSolver                  solver(economy);
    std::vector<bool>                 consume;
    for (auto p : sample)
    {
      p[0]        = theta;
      int const k = solver.solve(p, consume);
      m.emplace_back(consume[0], k);
    }
    return m;
  };
  auto const top = map_of(upper);
  double     lo  = out.y_lower;
  double     hi  = upper;
  if (map_of(lo) == top)
  {
    out.y_upper = lo;
    return out;
  }
  for (int step = 0; step < 200 && hi - lo > 1e-12 * std::max(1.0, upper); ++step)
  {
    double const mid = 0.5 * (lo + hi);
    if (map_of(mid) == top)
    {
      hi = mid;
    }
    else
    {
      lo = mid;
    }
  }
  out.y_upper = hi;
  return out;
}

TrivialityVerdict classify_trivial(Economy const &economy)
{
  TrivialityVerdict out;
  int const         n     = economy.buyers();
  double const      upper = economy.upper();
  bool              never = true;
  for (int k = 1; k <= n; ++k)
  {
    Witness w;
    w.label = "k*psi(top,k) < C(k), k=" + std::to_string(k);
    w.lhs   = k * economy.virtual_value(upper, k);
    w.rhs   = economy.adjusted_cost(k);
    w.holds = w.lhs < w.rhs;
    never   = never && w.holds;
    out.never_provide.push_back(w);
  }
  bool         always   = true;
  double const psi_zero = economy.virtual_value(0.0, n);
  {
    Witness w;
    w.label = "N*psi(0,N) >= C(N)";
    w.lhs   = n * psi_zero;
    w.rhs   = economy.adjusted_cost(n);
    w.holds = w.lhs >= w.rhs;
    always  = always && w.holds;
    out.always_provide.push_back(w);
  }
  for (int k = 1; k < n; ++k)
  {
    std::vector<double> const zeros(static_cast<std::size_t>(k), 0.0);
    Witness                   w;
    w.label = "(N-k)*psi(0,N) >= gamma(k,N), k=" + std::to_string(k);
    w.lhs   = (n - k) * psi_zero;
    w.rhs   = economy.gamma(k, n - k, zeros);
    w.holds = w.lhs >= w.rhs;
    always  = always && w.holds;
    out.always_provide.push_back(w);
  }
  out.verdict = never ? Triviality::NeverProvide
                      : (always ? Triviality::AlwaysProvideFree : Triviality::NonTrivial);
  return out;
}

char const *to_string(Triviality verdict)
{
  switch (verdict)
  {
  case Triviality::NeverProvide:
    return "NeverProvide";
  case Triviality::AlwaysProvideFree:
    return "AlwaysProvideFree";
  case Triviality::NonTrivial:
    return "NonTrivial";
  }
  return "unknown";
}

std::string TrivialityVerdict::to_text() const
{
  std::ostringstream os;
  os << "verdict: " << to_string(verdict) << '\n';
  auto dump = [&](char const *title, std::vector<Witness> const &ws) {
    os << title << '\n';
    for (auto const &w : ws)
    {
      os << "  " << w.label << ": " << format_double(w.lhs) << " vs " << format_double(w.rhs)
         << (w.holds ? " holds" : " fails") << '\n';
    }
  };
  dump("never-provide conditions:", never_provide);
  dump("always-provide conditions:", always_provide);
  return os.str();
}

}  // namespace clubgood
