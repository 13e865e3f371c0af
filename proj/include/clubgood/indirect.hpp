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

#include "clubgood/economy.hpp"
#include "clubgood/payments.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace clubgood {

// Piecewise-linear nondecreasing table. Repeated abscissae encode jumps.
class MonotoneMap
{
public:
  MonotoneMap() = default;
  MonotoneMap(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  // Smallest abscissa reaching y. in_gap reports values skipped by a jump,
  // which decode to the jump location from below.
  double inverse(double y, bool *in_gap = nullptr) const;

  double lo_x() const { return x_.front(); }
  double hi_x() const { return x_.back(); }
  double lo_y() const { return y_.front(); }
  double hi_y() const { return y_.back(); }
  bool   empty() const { return x_.empty(); }
  bool   strictly_increasing() const;
  std::vector<double> const &xs() const { return x_; }
  std::vector<double> const &ys() const { return y_; }

private:
  std::vector<double> x_;
  std::vector<double> y_;
};

// Price plus a second component whose meaning depends on the game: a subsidy
// in the gift game, a bid in the exclusivity game, unused in the all-pay game.
struct Action
{
  double price = 0.0;
  double extra = 0.0;
};

struct GameOutcome
{
  bool   consume  = false;
  int    set_size = 0;
  double payment  = 0.0;
};

// An action after tier classification and threshold lookups.
struct PreparedAction
{
  Action action;
  int    tier = 0;  // 0 abstain, -1 off the equilibrium action set, 1..3 equilibrium tiers
  double type = 0.0;
  double threshold_price = 0.0;
  double threshold_tier2 = 0.0;
  double threshold_tier3 = 0.0;
};

class IndirectGame
{
public:
  IndirectGame()                                = default;
  IndirectGame(IndirectGame const &)            = delete;
  IndirectGame &operator=(IndirectGame const &) = delete;
  virtual ~IndirectGame()                       = default;

  virtual std::string         id() const                                    = 0;
  virtual Economy const      &economy() const                               = 0;
  virtual Action              strategy(double theta) const                  = 0;
  virtual PreparedAction      prepare(Action const &action) const           = 0;
  virtual void                resolve(std::span<PreparedAction const> profile,
                                      std::span<GameOutcome> out) const     = 0;
  virtual std::vector<Action> off_path_actions() const                      = 0;
  // Interim quadrature engine for the two-buyer games.
  virtual OpponentQuadrature const *quadrature() const { return nullptr; }

  std::vector<GameOutcome> play(std::span<Action const> actions) const;
};

struct TableOptions
{
  int           knots   = 2001;
  std::size_t   draws   = 20000;  // Monte Carlo tables for more than two buyers
  std::uint64_t seed    = 0;
  int           threads = 1;
};

// Each buyer pays the chosen price; the allocation is the direct allocation of
// the types whose interim payments equal the prices.
class AllPayGame : public IndirectGame
{
public:
  AllPayGame(Economy economy, TableOptions const &options);

  std::string         id() const override { return "allpay"; }
  Economy const      &economy() const override { return economy_; }
  Action              strategy(double theta) const override;
  PreparedAction      prepare(Action const &action) const override;
  void                resolve(std::span<PreparedAction const> profile,
                              std::span<GameOutcome> out) const override;
  std::vector<Action> off_path_actions() const override;
  OpponentQuadrature const *quadrature() const override { return quad_.get(); }

  MonotoneMap const  &payment_table() const { return table_; }
  ServedBounds const &bounds() const { return bounds_; }
  double              min_price() const { return min_price_; }
  double              max_price() const { return max_price_; }

private:
  Economy                             economy_;
  std::unique_ptr<OpponentQuadrature> quad_;
  ServedBounds                        bounds_;
  MonotoneMap                         table_;
  double                              min_price_ = 0.0;
  double                              max_price_ = 0.0;
};

struct NamedMap
{
  std::string name;
  MonotoneMap map;
};

// Two-buyer game for positive network effects: a base price plus a subsidy,
// in three tiers separated by the benchmark cutoffs.
class GiftGame : public IndirectGame
{
public:
  GiftGame(double pi, double cost, TableOptions const &options);

  std::string         id() const override { return "gift"; }
  Economy const      &economy() const override { return economy_; }
  Action              strategy(double theta) const override;
  PreparedAction      prepare(Action const &action) const override;
  void                resolve(std::span<PreparedAction const> profile,
                              std::span<GameOutcome> out) const override;
  std::vector<Action> off_path_actions() const override;
  OpponentQuadrature const *quadrature() const override { return quad_.get(); }

  double low_price() const { return low_price_; }
  double high_price() const { return high_price_; }
  double x() const { return x_; }
  double y() const { return y_; }
  double z() const { return z_; }
  std::vector<NamedMap> maps() const;
  // Lowest tier-3 partner subsidy that makes type theta share.
  double subsidy_threshold(double theta) const;
  // Lowest tier-2 partner price that makes sharing with type theta profitable.
  double price_threshold(double theta) const;

private:
  Economy                             economy_;
  std::unique_ptr<OpponentQuadrature> quad_;
  double                              x_ = 0.0, y_ = 0.0, z_ = 0.0;
  double                              low_price_ = 0.0, high_price_ = 0.0;
  MonotoneMap                         subsidy_low_, price_mid_, subsidy_high_;
};

// Two-buyer game for negative network effects: tier fees plus exclusivity bids.
class ExclusivityGame : public IndirectGame
{
public:
  ExclusivityGame(double pi, double cost, TableOptions const &options);

  std::string         id() const override { return "exclusivity"; }
  Economy const      &economy() const override { return economy_; }
  Action              strategy(double theta) const override;
  PreparedAction      prepare(Action const &action) const override;
  void                resolve(std::span<PreparedAction const> profile,
                              std::span<GameOutcome> out) const override;
  std::vector<Action> off_path_actions() const override;
  OpponentQuadrature const *quadrature() const override { return quad_.get(); }

  double fee_mid() const { return fee_mid_; }
  double fee_high() const { return fee_high_; }
  double x() const { return x_; }
  double y() const { return y_; }
  double z() const { return z_; }
  std::vector<NamedMap> maps() const;

  // Bid above which a partner in the given tier is served alone against type theta.
  double bid_threshold(int tier, double theta) const;
  // Lowest tier-1 partner price that makes sharing with type theta profitable.
  double price_threshold(double theta) const;

private:

  Economy                             economy_;
  std::unique_ptr<OpponentQuadrature> quad_;
  double                              x_ = 0.0, y_ = 0.0, z_ = 0.0;
  double                              fee_mid_ = 0.0, fee_high_ = 0.0;
  MonotoneMap                         price_low_, bid_mid_, bid_high_;
};

struct TypeDeviation
{
  double type        = 0.0;
  double eq_payoff   = 0.0;
  Action best_action;
  double best_gain   = 0.0;
  double best_stderr = 0.0;
  bool   pass        = true;
};

struct EquilibriumReport
{
  std::string                game;
  std::size_t                draws      = 0;
  std::size_t                deviations = 0;
  std::vector<TypeDeviation> per_type;
  double                     worst_gain   = 0.0;
  double                     worst_stderr = 0.0;
  double                     worst_type   = 0.0;
  Action                     worst_action;
  bool                       equilibrium_pass = true;

  int         lattice          = 0;
  std::size_t mismatches       = 0;
  std::size_t band_cells       = 0;
  std::size_t band_mismatches  = 0;
  double      max_payment_gap  = 0.0;
  bool        equivalence_pass = true;

  std::string to_text() const;
  std::string to_csv() const;
};

EquilibriumReport verify_equilibrium(IndirectGame const &game, std::vector<double> const &type_grid,
                                     std::vector<double> const &deviation_grid, std::size_t draws,
                                     std::uint64_t seed, int threads = 1);

EquilibriumReport verify_outcome_equivalence(IndirectGame const &game, int lattice_resolution,
                                             int threads = 1);

std::string strategy_csv(IndirectGame const &game, std::vector<double> const &grid);

}  // namespace clubgood
