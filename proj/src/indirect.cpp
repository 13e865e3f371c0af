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

#include "clubgood/indirect.hpp"

#include "clubgood/allocation.hpp"
#include "clubgood/errors.hpp"
#include "clubgood/numerics.hpp"
#include "clubgood/verification.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace clubgood {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Offset from a cutoff at which one-sided limits are taken.
constexpr double kSide = 1e-10;

std::vector<InterimPoint> tabulate(OpponentQuadrature const &quad, std::vector<double> const &xs,
                                   int threads)
{
  std::vector<InterimPoint> out(xs.size());
  parallel_for(xs.size(), threads, [&](std::size_t i) { out[i] = quad.at(xs[i]); });
  return out;
}

void refine_interval(std::function<double(double)> const &f, double x0, double y0, double x1, double y1,
                     int depth, std::vector<double> &kx, std::vector<double> &ky)
{
  double xm = 0.5 * (x0 + x1);
  double ym = f(xm);
  if (depth == 0 || std::abs(ym - 0.5 * (y0 + y1)) <= 1e-10 * std::max(1.0, std::abs(ym)))
  {
    return;
  }
  refine_interval(f, x0, y0, xm, ym, depth - 1, kx, ky);
  kx.push_back(xm);
  ky.push_back(ym);
  refine_interval(f, xm, ym, x1, y1, depth - 1, kx, ky);
}

// Adds knots around kinks, found as outlying second differences, until the
// midpoint interpolation error is below tolerance.
void refine_kinks(std::function<double(double)> const &f, std::vector<double> &xs,
                  std::vector<double> &ys)
{
  std::size_t n = xs.size();
  if (n < 3)
  {
    return;
  }
  std::vector<double> d2(n, 0.0);
  std::vector<double> mags;
  for (std::size_t i = 1; i + 1 < n; ++i)
  {
    if (xs[i + 1] > xs[i] && xs[i] > xs[i - 1])
    {
      d2[i] = std::abs(ys[i + 1] - 2.0 * ys[i] + ys[i - 1]);
      mags.push_back(d2[i]);
    }
  }
  if (mags.empty())
  {
    return;
  }
  std::nth_element(mags.begin(), mags.begin() + static_cast<long>(mags.size() / 2), mags.end());
  double            limit = 50.0 * mags[mags.size() / 2] + 1e-12;
  std::vector<bool> flag(n, false);
  for (std::size_t i = 1; i + 1 < n; ++i)
  {
    if (d2[i] > limit)
    {
      flag[i - 1] = flag[i] = true;
    }
  }
  std::vector<double> kx{xs[0]}, ky{ys[0]};
  for (std::size_t i = 0; i + 1 < n; ++i)
  {
    if (flag[i] && xs[i + 1] > xs[i])
    {
      refine_interval(f, xs[i], ys[i], xs[i + 1], ys[i + 1], 24, kx, ky);
    }
    kx.push_back(xs[i + 1]);
    ky.push_back(ys[i + 1]);
  }
  xs = std::move(kx);
  ys = std::move(ky);
}

void check_action(Action const &a)
{
  if (!std::isfinite(a.price) || !std::isfinite(a.extra) || a.price < 0.0)
  {
    throw std::invalid_argument("actions need a finite nonnegative price and a finite second component");
  }
}

bool in_range(MonotoneMap const &m, double y)
{
  return y >= m.lo_y() && y <= m.hi_y();
}

void require_pair(std::span<PreparedAction const> profile, std::span<GameOutcome> out)
{
  if (profile.size() != 2 || out.size() != 2)
  {
    throw std::invalid_argument("this game has exactly two players");
  }
}

}  // namespace

MonotoneMap::MonotoneMap(std::vector<double> x, std::vector<double> y)
  : x_(std::move(x))
  , y_(std::move(y))
{
  if (x_.size() < 2 || x_.size() != y_.size())
  {
    throw std::invalid_argument("a monotone map needs at least two knots of each coordinate");
  }
  for (std::size_t i = 1; i < x_.size(); ++i)
  {
    if (!(x_[i] >= x_[i - 1]))
    {
      throw std::invalid_argument("monotone map abscissae must be nondecreasing");
    }
    if (y_[i] < y_[i - 1] - 1e-9 * std::max(1.0, std::abs(y_[i - 1])))
    {
      throw NumericalError("tabulated map decreases at " + format_double(x_[i]));
    }
    // Remove rounding-level decreases.
    y_[i] = std::max(y_[i], y_[i - 1]);
  }
}

double MonotoneMap::operator()(double x) const
{
  if (x <= x_.front())
  {
    return y_.front();
  }
  if (x >= x_.back())
  {
    return y_.back();
  }
  std::size_t i = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin()) - 1;
  double      w = (x - x_[i]) / (x_[i + 1] - x_[i]);
  return y_[i] + w * (y_[i + 1] - y_[i]);
}

double MonotoneMap::inverse(double y, bool *in_gap) const
{
  if (in_gap)
  {
    *in_gap = false;
  }
  if (y <= y_.front())
  {
    return x_.front();
  }
  if (y >= y_.back())
  {
    y = y_.back();
  }
  std::size_t i = static_cast<std::size_t>(std::lower_bound(y_.begin(), y_.end(), y) - y_.begin());
  if (y_[i] == y)
  {
    return x_[i];
  }
  if (x_[i] == x_[i - 1])
  {
    if (in_gap)
    {
      *in_gap = true;
    }
    return x_[i];
  }
  double w = (y - y_[i - 1]) / (y_[i] - y_[i - 1]);
  return x_[i - 1] + w * (x_[i] - x_[i - 1]);
}

bool MonotoneMap::strictly_increasing() const
{
  for (std::size_t i = 1; i < y_.size(); ++i)
  {
    if (!(y_[i] > y_[i - 1]))
    {
      return false;
    }
  }
  return true;
}

std::vector<GameOutcome> IndirectGame::play(std::span<Action const> actions) const
{
  std::vector<PreparedAction> prepared;
  prepared.reserve(actions.size());
  for (Action const &a : actions)
  {
    prepared.push_back(prepare(a));
  }
  std::vector<GameOutcome> out(actions.size());
  resolve(prepared, out);
  return out;
}

// ---------------------------------------------------------------- all-pay

AllPayGame::AllPayGame(Economy economy, TableOptions const &options)
  : economy_(std::move(economy))
{
  if (options.knots < 2)
  {
    throw ConfigError("payment tables need at least two knots");
  }
  bounds_      = served_bounds(economy_);
  double upper = economy_.upper();
  if (!(bounds_.y_lower > 0.0))
  {
    throw PreconditionError("the all-pay game needs a positive lowest served type");
  }
  // The lowest served type may sit on a jump; tabulate from its right side.
  std::vector<double> xs = linspace(bounds_.y_lower + 1e-9 * upper, upper,
                                    static_cast<std::size_t>(options.knots));
  std::vector<double> ms(xs.size());
  if (economy_.buyers() == 2)
  {
    quad_    = std::make_unique<OpponentQuadrature>(economy_, 0);
    auto pts = tabulate(*quad_, xs, options.threads);
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
      ms[i] = pts[i].m;
    }
  }
  else
  {
    InterimOptions io;
    io.method  = InterimMethod::MonteCarlo;
    io.seed    = options.seed;
    io.draws   = options.draws;
    io.threads = options.threads;
    ms         = interim_schedule(economy_, 0, xs, io).m;
  }

  std::vector<double> kx{xs.front()};
  std::vector<double> ky{ms.front()};
  if (quad_)
  {
    std::vector<double> steps;
    for (std::size_t i = 1; i < ms.size(); ++i)
    {
      if (ms[i] > ms[i - 1])
      {
        steps.push_back(ms[i] - ms[i - 1]);
      }
    }
    double median = 0.0;
    if (!steps.empty())
    {
      std::nth_element(steps.begin(), steps.begin() + static_cast<long>(steps.size() / 2), steps.end());
      median = steps[steps.size() / 2];
    }
    for (std::size_t i = 1; i < xs.size(); ++i)
    {
      double step = ms[i] - ms[i - 1];
      if (step > 25.0 * median && step > 1e-7)
      {
        double mid  = 0.5 * (ms[i] + ms[i - 1]);
        double jump = bisect_root([&](double t) { return quad_->at(t).m - mid; }, xs[i - 1], xs[i],
                                  1e-13);
        double lo   = std::max(xs[i - 1], jump - kSide * upper);
        double hi   = std::min(xs[i], jump + kSide * upper);
        kx.push_back(jump);
        ky.push_back(quad_->at(lo).m);
        kx.push_back(jump);
        ky.push_back(quad_->at(hi).m);
      }
      kx.push_back(xs[i]);
      ky.push_back(ms[i]);
    }
  }
  else
  {
    kx = xs;
    ky = ms;
  }
  if (quad_)
  {
    refine_kinks([&](double t) { return quad_->at(t).m; }, kx, ky);
  }
  table_     = MonotoneMap(std::move(kx), std::move(ky));
  min_price_ = table_.lo_y();
  max_price_ = table_.hi_y();
  if (!(min_price_ > 0.0))
  {
    throw PreconditionError("the lowest served type has zero interim payment");
  }
}

Action AllPayGame::strategy(double theta) const
{
  if (theta < bounds_.y_lower)
  {
    return {};
  }
  return {table_(theta), 0.0};
}

PreparedAction AllPayGame::prepare(Action const &action) const
{
  check_action(action);
  PreparedAction p;
  p.action = action;
  if (action.price == 0.0)
  {
    return p;
  }
  if (action.price < min_price_ || action.price > max_price_)
  {
    p.tier = -1;
    return p;
  }
  bool   gap = false;
  double x   = table_.inverse(action.price, &gap);
  // Prices skipped by a jump buy the allocation from below the jump.
  p.type = gap ? x - 1e-9 * economy_.upper() : x;
  p.tier = 1;
  return p;
}

void AllPayGame::resolve(std::span<PreparedAction const> profile, std::span<GameOutcome> out) const
{
  if (static_cast<int>(profile.size()) != economy_.buyers() || out.size() != profile.size())
  {
    throw std::invalid_argument("profile size must equal the number of buyers");
  }
  std::vector<double> types(profile.size());
  for (std::size_t i = 0; i < profile.size(); ++i)
  {
    types[i] = profile[i].tier > 0 ? profile[i].type : 0.0;
  }
  std::vector<bool> consume;
  AllocationSolver  solver(economy_);
  int               k = solver.solve(types, consume);
  for (std::size_t i = 0; i < profile.size(); ++i)
  {
    bool c          = consume[i] && profile[i].tier > 0;
    out[i].consume  = c;
    out[i].set_size = c ? k : 0;
    out[i].payment  = profile[i].action.price;
  }
}

std::vector<Action> AllPayGame::off_path_actions() const
{
  std::vector<Action> acts;
  acts.push_back({0.5 * min_price_, 0.0});
  acts.push_back({max_price_ + 0.05, 0.0});
  acts.push_back({1.5 * max_price_ + 0.1, 0.0});
  auto const &x = table_.xs();
  auto const &y = table_.ys();
  for (std::size_t i = 1; i < x.size(); ++i)
  {
    if (x[i] == x[i - 1])
    {
      acts.push_back({0.5 * (y[i] + y[i - 1]), 0.0});
      acts.push_back({y[i - 1] + 0.9 * (y[i] - y[i - 1]), 0.0});
    }
  }
  return acts;
}

// ---------------------------------------------------------------- gift game

GiftGame::GiftGame(double pi, double cost, TableOptions const &options)
  : economy_(pi_economy(pi, cost))
{
  BenchmarkCutoffs cut = solve_benchmark_cutoffs(pi, cost);
  if (!cut.positive)
  {
    throw PreconditionError("the gift game needs positive network effects");
  }
  if (options.knots < 2)
  {
    throw ConfigError("strategy tables need at least two knots");
  }
  x_    = cut.x;
  y_    = cut.y;
  z_    = cut.z;
  quad_ = std::make_unique<OpponentQuadrature>(economy_, 0);
  auto k = static_cast<std::size_t>(options.knots);

  low_price_  = quad_->at(y_).m;
  high_price_ = quad_->at(z_ - kSide).m;

  // Knots start slightly inside the lowest tier, where the sharing probability vanishes.
  std::vector<double> x1  = linspace(x_ + 1e-4 * (y_ - x_), y_, k);
  std::vector<double> x2  = linspace(y_, z_ - kSide, k);
  std::vector<double> x3  = linspace(z_ + kSide, economy_.upper(), k);
  auto                p1  = tabulate(*quad_, x1, options.threads);
  auto                p2  = tabulate(*quad_, x2, options.threads);
  auto                p3  = tabulate(*quad_, x3, options.threads);
  std::vector<double> y1(k), y2(k), y3(k);
  for (std::size_t i = 0; i < k; ++i)
  {
    y1[i] = p1[i].m / p1[i].total_q() - low_price_;
    y2[i] = p2[i].m;
    y3[i] = p3[i].m - high_price_;
  }
  y2.front() = low_price_;
  y2.back()  = high_price_;
  refine_kinks(
      [&](double t) {
        InterimPoint p = quad_->at(t);
        return p.m / p.total_q() - low_price_;
      },
      x1, y1);
  refine_kinks([&](double t) { return quad_->at(t).m; }, x2, y2);
  refine_kinks([&](double t) { return quad_->at(t).m - high_price_; }, x3, y3);
  subsidy_low_  = MonotoneMap(x1, y1);
  price_mid_    = MonotoneMap(x2, y2);
  subsidy_high_ = MonotoneMap(x3, y3);
}

Action GiftGame::strategy(double theta) const
{
  if (theta <= x_)
  {
    return {};
  }
  if (theta <= y_)
  {
    return {low_price_, subsidy_low_(theta)};
  }
  if (theta <= z_)
  {
    return {price_mid_(theta), 0.0};
  }
  return {high_price_, subsidy_high_(theta)};
}

double GiftGame::subsidy_threshold(double theta) const
{
  auto g = [&](double t) {
    return economy_.virtual_value(theta, 2) + economy_.virtual_value(t, 2) -
           economy_.virtual_value(t, 1);
  };
  double lo = z_, hi = economy_.upper();
  if (g(lo) >= 0.0)
  {
    return -kInf;
  }
  if (g(hi) < 0.0)
  {
    return kInf;
  }
  return subsidy_high_(bisect_root(g, lo, hi));
}

double GiftGame::price_threshold(double theta) const
{
  double c = economy_.adjusted_cost(2);
  auto   h = [&](double t) { return economy_.virtual_value(theta, 2) + economy_.virtual_value(t, 2) - c; };
  double lo = y_, hi = z_;
  if (h(lo) >= 0.0)
  {
    return -kInf;
  }
  if (h(hi) < 0.0)
  {
    return kInf;
  }
  return price_mid_(bisect_root(h, lo, hi));
}

PreparedAction GiftGame::prepare(Action const &action) const
{
  check_action(action);
  PreparedAction p;
  p.action = action;
  double price = action.price, s = action.extra;
  if (price == 0.0 && s == 0.0)
  {
    return p;
  }
  if (price == low_price_ && in_range(subsidy_low_, s))
  {
    p.tier            = 1;
    p.type            = subsidy_low_.inverse(s);
    p.threshold_tier3 = subsidy_threshold(p.type);
    return p;
  }
  if (s == 0.0 && price > low_price_ && price <= high_price_)
  {
    p.tier            = 2;
    p.type            = price_mid_.inverse(price);
    p.threshold_price = price_threshold(p.type);
    return p;
  }
  if (price == high_price_ && in_range(subsidy_high_, s))
  {
    p.tier = 3;
    p.type = subsidy_high_.inverse(s);
    return p;
  }
  p.tier = -1;
  return p;
}

void GiftGame::resolve(std::span<PreparedAction const> profile, std::span<GameOutcome> out) const
{
  require_pair(profile, out);
  PreparedAction const &a = profile[0];
  PreparedAction const &b = profile[1];
  bool                  ca = a.tier == 3, cb = b.tier == 3;
  if (a.tier == 1 && b.tier == 3)
  {
    ca = b.action.extra >= a.threshold_tier3;
  }
  if (b.tier == 1 && a.tier == 3)
  {
    cb = a.action.extra >= b.threshold_tier3;
  }
  if (a.tier == 2 && b.tier == 2)
  {
    bool joint = b.action.price >= a.threshold_price && a.action.price >= b.threshold_price;
    ca = cb = joint;
  }
  if (a.tier == 2 && b.tier == 3)
  {
    ca = true;
  }
  if (b.tier == 2 && a.tier == 3)
  {
    cb = true;
  }
  int k = static_cast<int>(ca) + static_cast<int>(cb);
  for (int i = 0; i < 2; ++i)
  {
    PreparedAction const &p = profile[static_cast<std::size_t>(i)];
    bool                  c = i == 0 ? ca : cb;
    GameOutcome          &o = out[static_cast<std::size_t>(i)];
    o.consume               = c;
    o.set_size              = c ? k : 0;
    switch (p.tier)
    {
    case 0:
      o.payment = 0.0;
      break;
    case 1:
      o.payment = c ? p.action.price + p.action.extra : 0.0;
      break;
    case 3:
      o.payment = p.action.price + p.action.extra;
      break;
    default:
      o.payment = p.action.price;
      break;
    }
  }
}

std::vector<Action> GiftGame::off_path_actions() const
{
  double s1lo = subsidy_low_.lo_y(), s1hi = subsidy_low_.hi_y();
  double s3hi = subsidy_high_.hi_y();
  return {
      {low_price_, s1lo - 0.5 * std::abs(s1lo) - 0.01},
      {low_price_, s1hi + 0.05},
      {0.5 * low_price_, 0.0},
      {0.5 * (low_price_ + high_price_), 0.02},
      {high_price_, s3hi + 0.05},
      {high_price_ + 0.05, 0.0},
      {high_price_, -0.05},
      {0.0, 0.05},
  };
}

std::vector<NamedMap> GiftGame::maps() const
{
  return {{"subsidy_low", subsidy_low_}, {"price_mid", price_mid_}, {"subsidy_high", subsidy_high_}};
}

// ---------------------------------------------------------------- exclusivity game

ExclusivityGame::ExclusivityGame(double pi, double cost, TableOptions const &options)
  : economy_(pi_economy(pi, cost))
{
  BenchmarkCutoffs cut = solve_benchmark_cutoffs(pi, cost);
  if (cut.positive)
  {
    throw PreconditionError("the exclusivity game needs negative network effects");
  }
  if (options.knots < 2)
  {
    throw ConfigError("strategy tables need at least two knots");
  }
  x_    = cut.x;
  y_    = cut.y;
  z_    = cut.z;
  quad_ = std::make_unique<OpponentQuadrature>(economy_, 0);
  auto k = static_cast<std::size_t>(options.knots);

  // The interim payment jumps at the solo cutoff; the middle fee is its left limit.
  fee_mid_  = quad_->at(y_ - kSide).m;
  fee_high_ = quad_->at(z_).m;

  std::vector<double> x1 = linspace(x_ + 1e-4 * (y_ - x_), y_ - kSide, k);
  std::vector<double> x2 = linspace(y_ + kSide, z_, k);
  std::vector<double> x3 = linspace(z_ + kSide, economy_.upper(), k);
  auto                p1 = tabulate(*quad_, x1, options.threads);
  auto                p2 = tabulate(*quad_, x2, options.threads);
  auto                p3 = tabulate(*quad_, x3, options.threads);
  std::vector<double> y1(k), y2(k), y3(k);
  for (std::size_t i = 0; i < k; ++i)
  {
    y1[i] = p1[i].m / p1[i].total_q();
    y2[i] = (p2[i].m - fee_mid_) / p2[i].q_by_k[0];
    y3[i] = (p3[i].m - fee_high_) / p3[i].q_by_k[0];
  }
  refine_kinks(
      [&](double t) {
        InterimPoint p = quad_->at(t);
        return p.m / p.total_q();
      },
      x1, y1);
  refine_kinks(
      [&](double t) {
        InterimPoint p = quad_->at(t);
        return (p.m - fee_mid_) / p.q_by_k[0];
      },
      x2, y2);
  refine_kinks(
      [&](double t) {
        InterimPoint p = quad_->at(t);
        return (p.m - fee_high_) / p.q_by_k[0];
      },
      x3, y3);
  price_low_ = MonotoneMap(x1, y1);
  bid_mid_   = MonotoneMap(x2, y2);
  bid_high_  = MonotoneMap(x3, y3);
}

Action ExclusivityGame::strategy(double theta) const
{
  if (theta <= x_)
  {
    return {};
  }
  if (theta <= y_)
  {
    return {price_low_(theta), 0.0};
  }
  if (theta <= z_)
  {
    return {fee_mid_, bid_mid_(theta)};
  }
  return {fee_high_, bid_high_(theta)};
}

double ExclusivityGame::bid_threshold(int tier, double theta) const
{
  auto g = [&](double t) {
    return economy_.virtual_value(theta, 2) + economy_.virtual_value(t, 2) -
           economy_.virtual_value(t, 1);
  };
  double             lo  = tier == 2 ? y_ : z_;
  double             hi  = tier == 2 ? z_ : economy_.upper();
  MonotoneMap const &map = tier == 2 ? bid_mid_ : bid_high_;
  if (g(lo) < 0.0)
  {
    return -kInf;
  }
  if (g(hi) >= 0.0)
  {
    return kInf;
  }
  return map(bisect_root(g, lo, hi));
}

double ExclusivityGame::price_threshold(double theta) const
{
  double c = economy_.adjusted_cost(2);
  auto   h = [&](double t) { return economy_.virtual_value(theta, 2) + economy_.virtual_value(t, 2) - c; };
  double lo = x_, hi = y_;
  if (h(lo) >= 0.0)
  {
    return -kInf;
  }
  if (h(hi) < 0.0)
  {
    return kInf;
  }
  return price_low_(bisect_root(h, lo, hi));
}

PreparedAction ExclusivityGame::prepare(Action const &action) const
{
  check_action(action);
  PreparedAction p;
  p.action = action;
  double price = action.price, b = action.extra;
  if (price == 0.0 && b == 0.0)
  {
    return p;
  }
  // Fee tiers are matched before the price tier when an action fits both.
  if (price == fee_mid_ && in_range(bid_mid_, b))
  {
    p.tier = 2;
    p.type = bid_mid_.inverse(b);
  }
  else if (price == fee_high_ && in_range(bid_high_, b))
  {
    p.tier = 3;
    p.type = bid_high_.inverse(b);
  }
  else if (b == 0.0 && in_range(price_low_, price))
  {
    p.tier            = 1;
    p.type            = price_low_.inverse(price);
    p.threshold_price = price_threshold(p.type);
  }
  else
  {
    p.tier = -1;
    return p;
  }
  p.threshold_tier2 = bid_threshold(2, p.type);
  p.threshold_tier3 = bid_threshold(3, p.type);
  return p;
}

void ExclusivityGame::resolve(std::span<PreparedAction const> profile, std::span<GameOutcome> out) const
{
  require_pair(profile, out);
  PreparedAction const &a = profile[0];
  PreparedAction const &b = profile[1];
  auto bidder = [](PreparedAction const &p) { return p.tier == 2 || p.tier == 3; };
  auto beats  = [](PreparedAction const &p, PreparedAction const &partner) {
    double thr = p.tier == 2 ? partner.threshold_tier2 : partner.threshold_tier3;
    return p.action.extra > thr;
  };
  bool ca = false, cb = false, alone_a = false, alone_b = false;
  if (a.tier == 1 && b.tier == 1)
  {
    ca = cb = b.action.price >= a.threshold_price && a.action.price >= b.threshold_price;
  }
  else if (bidder(a) && bidder(b))
  {
    bool wa = beats(a, b), wb = beats(b, a);
    if (wa && wb)
    {
      // Both clear the partner's threshold: the higher type is served alone.
      wa = a.type >= b.type;
      wb = !wa;
    }
    alone_a = wa;
    alone_b = wb;
    ca      = !wb;
    cb      = !wa;
  }
  else if (bidder(a))
  {
    alone_a = b.tier != 1 || beats(a, b);
    ca      = true;
    cb      = !alone_a;
  }
  else if (bidder(b))
  {
    alone_b = a.tier != 1 || beats(b, a);
    cb      = true;
    ca      = !alone_b;
  }
  int k = static_cast<int>(ca) + static_cast<int>(cb);
  for (int i = 0; i < 2; ++i)
  {
    PreparedAction const &p     = profile[static_cast<std::size_t>(i)];
    bool                  c     = i == 0 ? ca : cb;
    bool                  alone = i == 0 ? alone_a : alone_b;
    GameOutcome          &o     = out[static_cast<std::size_t>(i)];
    o.consume                   = c;
    o.set_size                  = c ? k : 0;
    switch (p.tier)
    {
    case 0:
      o.payment = 0.0;
      break;
    case 1:
      o.payment = c ? p.action.price : 0.0;
      break;
    case 2:
    case 3:
      o.payment = p.action.price + (alone ? p.action.extra : 0.0);
      break;
    default:
      o.payment = p.action.price;
      break;
    }
  }
}

std::vector<Action> ExclusivityGame::off_path_actions() const
{
  return {
      {fee_mid_, bid_mid_.hi_y() + 0.05},
      {fee_mid_, 0.5 * bid_mid_.lo_y()},
      {fee_high_, bid_high_.hi_y() + 0.05},
      {fee_high_, 0.0},
      {0.5 * (price_low_.lo_y() + price_low_.hi_y()), 0.1},
      {0.5 * price_low_.lo_y(), 0.0},
      {price_low_.hi_y() + 0.05, 0.0},
      {0.5 * (fee_mid_ + fee_high_), 0.1},
  };
}

std::vector<NamedMap> ExclusivityGame::maps() const
{
  return {{"price_low", price_low_}, {"bid_mid", bid_mid_}, {"bid_high", bid_high_}};
}

// ---------------------------------------------------------------- verification

EquilibriumReport verify_equilibrium(IndirectGame const &game, std::vector<double> const &type_grid,
                                     std::vector<double> const &deviation_grid, std::size_t draws,
                                     std::uint64_t seed, int threads)
{
  Economy const &econ = game.economy();
  int            n    = econ.buyers();
  if (draws == 0 || type_grid.empty())
  {
    throw ConfigError("equilibrium checks need draws and types");
  }
  auto opponents = static_cast<std::size_t>(n - 1);

  // Opponent actions, stratified when there is a single opponent.
  std::vector<PreparedAction> opp(draws * opponents);
  parallel_for(draws, threads, [&](std::size_t d) {
    for (std::size_t j = 0; j < opponents; ++j)
    {
      double u = counter_uniform(seed, 1 + j, d);
      if (opponents == 1)
      {
        u = (static_cast<double>(d) + u) / static_cast<double>(draws);
      }
      opp[d * opponents + j] = game.prepare(game.strategy(econ.distribution().quantile(u)));
    }
  });

  std::size_t nk = static_cast<std::size_t>(n) + 1;
  std::vector<std::vector<double>> values(type_grid.size(), std::vector<double>(nk, 0.0));
  for (std::size_t g = 0; g < type_grid.size(); ++g)
  {
    for (int k = 1; k <= n; ++k)
    {
      values[g][static_cast<std::size_t>(k)] = econ.value(type_grid[g], k);
    }
  }

  auto outcomes_for = [&](PreparedAction const &own, std::vector<GameOutcome> &res) {
    res.resize(draws);
    std::vector<PreparedAction> profile(static_cast<std::size_t>(n));
    std::vector<GameOutcome>    out(static_cast<std::size_t>(n));
    profile[0] = own;
    for (std::size_t d = 0; d < draws; ++d)
    {
      for (std::size_t j = 0; j < opponents; ++j)
      {
        profile[j + 1] = opp[d * opponents + j];
      }
      game.resolve(profile, out);
      res[d] = out[0];
    }
  };

  std::vector<std::vector<double>> eq_u(type_grid.size());
  parallel_for(type_grid.size(), threads, [&](std::size_t g) {
    std::vector<GameOutcome> res;
    outcomes_for(game.prepare(game.strategy(type_grid[g])), res);
    eq_u[g].resize(draws);
    for (std::size_t d = 0; d < draws; ++d)
    {
      eq_u[g][d] = (res[d].consume ? values[g][static_cast<std::size_t>(res[d].set_size)] : 0.0) -
                   res[d].payment;
    }
  });

  std::vector<Action> devs;
  for (double t : deviation_grid)
  {
    devs.push_back(game.strategy(t));
  }
  for (Action const &a : game.off_path_actions())
  {
    devs.push_back(a);
  }

  struct Cell
  {
    double gain = 0.0, se = 0.0;
  };
  std::vector<std::vector<Cell>> cells(devs.size(), std::vector<Cell>(type_grid.size()));
  parallel_for(devs.size(), threads, [&](std::size_t a) {
    std::vector<GameOutcome> res;
    outcomes_for(game.prepare(devs[a]), res);
    for (std::size_t g = 0; g < type_grid.size(); ++g)
    {
      double sum = 0.0, sq = 0.0;
      for (std::size_t d = 0; d < draws; ++d)
      {
        double u = (res[d].consume ? values[g][static_cast<std::size_t>(res[d].set_size)] : 0.0) -
                   res[d].payment;
        double diff = u - eq_u[g][d];
        sum += diff;
        sq += diff * diff;
      }
      double dn   = static_cast<double>(draws);
      double mean = sum / dn;
      double var  = draws > 1 ? std::max(0.0, (sq - dn * mean * mean) / (dn - 1.0)) : 0.0;
      cells[a][g] = {mean, std::sqrt(var / dn)};
    }
  });

  EquilibriumReport rep;
  rep.game       = game.id();
  rep.draws      = draws;
  rep.deviations = devs.size();
  double worst_seen = -kInf;
  for (std::size_t g = 0; g < type_grid.size(); ++g)
  {
    TypeDeviation td;
    td.type = type_grid[g];
    double s = 0.0;
    for (double u : eq_u[g])
    {
      s += u;
    }
    td.eq_payoff      = s / static_cast<double>(draws);
    double top_gain = -kInf;
    for (std::size_t a = 0; a < devs.size(); ++a)
    {
      Cell const &c      = cells[a][g];
      if (c.gain - 2.0 * c.se - 1e-6 > 0.0)
      {
        td.pass = false;
      }
      if (c.gain > top_gain)
      {
        top_gain    = c.gain;
        td.best_action = devs[a];
        td.best_gain   = c.gain;
        td.best_stderr = c.se;
      }
    }
    if (top_gain > worst_seen)
    {
      worst_seen     = top_gain;
      rep.worst_gain   = td.best_gain;
      rep.worst_stderr = td.best_stderr;
      rep.worst_type   = td.type;
      rep.worst_action = td.best_action;
    }
    rep.equilibrium_pass = rep.equilibrium_pass && td.pass;
    rep.per_type.push_back(td);
  }
  return rep;
}

EquilibriumReport verify_outcome_equivalence(IndirectGame const &game, int lattice_resolution,
                                             int threads)
{
  Economy const            &econ = game.economy();
  OpponentQuadrature const *quad = game.quadrature();
  if (econ.buyers() != 2 || quad == nullptr)
  {
    throw PreconditionError("outcome equivalence is checked for two-buyer games");
  }
  if (lattice_resolution < 2)
  {
    throw ConfigError("lattice resolution must be at least 2");
  }
  auto   r     = static_cast<std::size_t>(lattice_resolution);
  double upper = econ.upper();
  std::vector<double> centers(r);
  for (std::size_t i = 0; i < r; ++i)
  {
    centers[i] = (static_cast<double>(i) + 0.5) * upper / static_cast<double>(r);
  }
  std::vector<Action> acts(r);
  for (std::size_t i = 0; i < r; ++i)
  {
    acts[i] = game.strategy(centers[i]);
  }

  std::vector<std::uint8_t> direct(r * r), played(r * r);
  parallel_for(r, threads, [&](std::size_t i) {
    std::vector<bool> consume;
    AllocationSolver  solver(econ);
    for (std::size_t j = 0; j < r; ++j)
    {
      double prof[2] = {centers[i], centers[j]};
      solver.solve(prof, consume);
      direct[i * r + j] = static_cast<std::uint8_t>((consume[0] ? 1 : 0) | (consume[1] ? 2 : 0));
      Action pair[2]    = {acts[i], acts[j]};
      auto   out        = game.play(pair);
      played[i * r + j] = static_cast<std::uint8_t>((out[0].consume ? 1 : 0) | (out[1].consume ? 2 : 0));
    }
  });

  EquilibriumReport rep;
  rep.game    = game.id();
  rep.lattice = lattice_resolution;
  for (std::size_t i = 0; i < r; ++i)
  {
    for (std::size_t j = 0; j < r; ++j)
    {
      bool band = false;
      for (int di = -1; di <= 1 && !band; ++di)
      {
        for (int dj = -1; dj <= 1 && !band; ++dj)
        {
          long ii = static_cast<long>(i) + di, jj = static_cast<long>(j) + dj;
          if (ii < 0 || jj < 0 || ii >= static_cast<long>(r) || jj >= static_cast<long>(r))
          {
            continue;
          }
          band = direct[static_cast<std::size_t>(ii) * r + static_cast<std::size_t>(jj)] != direct[i * r + j];
        }
      }
      bool miss = direct[i * r + j] != played[i * r + j];
      if (band)
      {
        ++rep.band_cells;
        rep.band_mismatches += miss ? 1 : 0;
      }
      else
      {
        rep.mismatches += miss ? 1 : 0;
      }
    }
  }

  double delta = 1e-9 * upper;
  auto   gap_at = [&](double theta) {
    double              m      = quad->at(theta).m;
    std::vector<double> breaks = quad->panels(theta);
    PreparedAction      own    = game.prepare(game.strategy(theta));
    auto                pay    = [&](double t) {
      PreparedAction pr[2] = {own, game.prepare(game.strategy(t))};
      GameOutcome    out[2];
      game.resolve(pr, out);
      return out[0].payment * econ.distribution().pdf(t);
    };
    double total = 0.0;
    for (std::size_t b = 1; b < breaks.size(); ++b)
    {
      if (breaks[b] > breaks[b - 1])
      {
        total += gauss32(pay, breaks[b - 1], breaks[b]);
      }
    }
    return std::abs(total - m);
  };
  std::vector<double> gaps(r);
  parallel_for(r, threads, [&](std::size_t i) {
    double gap = gap_at(centers[i]);
    if (gap > 1e-5)
    {
      // A point on a cutoff compares both one-sided limits instead.
      gap = std::max(gap_at(centers[i] - delta), gap_at(std::min(upper, centers[i] + delta)));
    }
    gaps[i] = gap;
  });
  rep.max_payment_gap  = *std::max_element(gaps.begin(), gaps.end());
  rep.equivalence_pass = rep.mismatches == 0 && rep.max_payment_gap <= 1e-5;
  return rep;
}

std::string EquilibriumReport::to_text() const
{
  std::ostringstream os;
  os << "game " << game << "\n";
  if (draws > 0)
  {
    os << "equilibrium " << (equilibrium_pass ? "PASS" : "FAIL") << " draws=" << draws
       << " deviations=" << deviations << " types=" << per_type.size()
       << " worst_gain=" << format_double(worst_gain) << " stderr=" << format_double(worst_stderr)
       << " type=" << format_double(worst_type) << " action=(" << format_double(worst_action.price)
       << "," << format_double(worst_action.extra) << ")\n";
  }
  if (lattice > 0)
  {
    os << "equivalence " << (equivalence_pass ? "PASS" : "FAIL") << " lattice=" << lattice
       << " mismatches=" << mismatches << " band_cells=" << band_cells
       << " band_mismatches=" << band_mismatches
       << " max_payment_gap=" << format_double(max_payment_gap) << "\n";
  }
  return os.str();
}

std::string EquilibriumReport::to_csv() const
{
  std::ostringstream os;
  os << "theta,eq_payoff,best_price,best_extra,best_gain,best_stderr,pass\n";
  for (TypeDeviation const &t : per_type)
  {
    os << format_double(t.type) << ',' << format_double(t.eq_payoff) << ','
       << format_double(t.best_action.price) << ',' << format_double(t.best_action.extra) << ','
       << format_double(t.best_gain) << ',' << format_double(t.best_stderr) << ','
       << (t.pass ? 1 : 0) << "\n";
  }
  return os.str();
}

std::string strategy_csv(IndirectGame const &game, std::vector<double> const &grid)
{
  std::ostringstream os;
  os << "theta,price,extra,tier\n";
  for (double t : grid)
  {
    Action a = game.strategy(t);
    os << format_double(t) << ',' << format_double(a.price) << ',' << format_double(a.extra) << ','
       << game.prepare(a).tier << "\n";
  }
  return os.str();
}

}  // namespace clubgood
