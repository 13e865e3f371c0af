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

#include "clubgood/allocation.hpp"
#include "clubgood/economy.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace clubgood {

// Outcome for one buyer as a function of their own type, others held fixed.
// Breakpoints are localized by bisection; segment states are (consume, set size).
struct PathSegment
{
  double lo       = 0.0;
  double hi       = 0.0;
  bool   consume  = false;
  int    set_size = 0;
};

struct OwnTypePath
{
  int                      buyer = 0;
  double                   limit = 0.0;
  std::vector<PathSegment> segments;

  PathSegment const &at(double theta) const;
  double             entry_cutoff() const;  // +inf if the buyer never consumes
  bool               same_states(OwnTypePath const &other) const;
};

OwnTypePath own_type_path(Economy const &economy, int buyer, std::span<double const> profile,
                          double limit, double tolerance = 1e-10);

// Transfer of the buyer at own type theta <= path.limit: value at the realized
// set size minus the integrated marginal value along the path.
double path_payment(Economy const &economy, OwnTypePath const &path, double theta);

struct TransferVector
{
  std::vector<double> payments;
};

TransferVector expost_transfers(Economy const &economy, std::span<double const> profile);

enum class InterimMethod
{
  Quadrature,
  MonteCarlo
};

struct InterimOptions
{
  InterimMethod method  = InterimMethod::Quadrature;
  std::uint64_t seed    = 0;
  std::size_t   draws   = 100000;
  int           threads = 1;
};

struct InterimSchedule
{
  int                              buyer = 0;
  std::vector<double>              theta;
  std::vector<std::vector<double>> q_by_k;  // q_by_k[k-1][g]
  std::vector<double>              m;
  std::vector<double>              m_stderr;  // empty for quadrature
  InterimMethod                    method = InterimMethod::Quadrature;
  std::uint64_t                    seed   = 0;
  std::size_t                      draws  = 0;

  std::string to_csv() const;
};

InterimSchedule interim_schedule(Economy const &economy, int buyer, std::vector<double> const &grid,
                                 InterimOptions const &options);

struct InterimPoint
{
  std::vector<double> q_by_k;  // index k-1
  double              m = 0.0;

  double total_q() const;
};

// Exact one-dimensional integration over the single opponent of a two-buyer
// economy. Panels are split at every change of the realized allocation and of
// the opponent-indexed path structure.
class OpponentQuadrature
{
public:
  OpponentQuadrature(Economy const &economy, int buyer);

  InterimPoint at(double theta) const;
  // Interim allocation only (no payment integral).
  std::vector<double> allocation_at(double theta) const;
  // Sorted panel breaks on [0, upper] for own type theta.
  std::vector<double> panels(double theta) const;
  // Allocation state (consume mask and size) at own type theta against opponent t.
  std::pair<unsigned, int> state(double theta, double t) const;

  Economy const &economy() const { return economy_; }
  int            buyer() const { return buyer_; }

private:
  Economy const      &economy_;
  int                 buyer_;
  std::vector<double> structural_breaks_;
};

// Interim payment from the envelope formula: sum_k Q^k v - int_0^theta sum_k Q^k dv.
std::vector<double> envelope_payments(OpponentQuadrature const &quadrature,
                                      std::vector<double> const &grid);

struct ServedBounds
{
  double y_lower    = 0.0;
  double y_upper    = 0.0;
  int    resolution = 0;
};

ServedBounds served_bounds(Economy const &economy, int search_resolution = 401);

enum class Triviality
{
  NeverProvide,
  AlwaysProvideFree,
  NonTrivial
};

struct Witness
{
  std::string label;
  double      lhs   = 0.0;
  double      rhs   = 0.0;
  bool        holds = false;
};

struct TrivialityVerdict
{
  Triviality           verdict = Triviality::NonTrivial;
  std::vector<Witness> never_provide;
  std::vector<Witness> always_provide;

  std::string to_text() const;
};

TrivialityVerdict classify_trivial(Economy const &economy);

char const *to_string(Triviality verdict);

}  // namespace clubgood
