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

#include <cstdint>
#include <span>
#include <vector>

namespace clubgood {

// Buyers sorted by type, highest first; equal types keep ascending index order.
struct RankedProfile
{
  std::vector<int>    original_indices;
  std::vector<double> sorted_thetas;

  static RankedProfile rank(std::span<double const> profile);
};

// The top-k buyers of a ranked profile.
struct CandidateSet
{
  int size = 0;
};

struct Allocation
{
  std::vector<bool> consume;
  int               set_size = 0;
  bool              provided = false;
  double            profit   = 0.0;
};

struct OracleAllocation
{
  Allocation allocation;
  // Objective gap between the selected subset and the best other subset.
  double runner_up_margin = 0.0;
};

// Virtual surplus of the top-k set: sum of the top k virtual values at size k.
double candidate_surplus(Economy const &economy, RankedProfile const &ranked, int k);

// Weak preference of candidate a over b; exact ties favour a.
bool prefer(Economy const &economy, RankedProfile const &ranked, CandidateSet a, CandidateSet b);

Allocation solve_allocation(Economy const &economy, std::span<double const> profile);

// Exhaustive search over all 2^N subsets; N <= 20.
OracleAllocation brute_force_allocation(Economy const &economy, std::span<double const> profile);

bool provision_possible(Economy const &economy, std::span<double const> profile);

// Objective value of an arbitrary consumer set.
double subset_profit(Economy const &economy, std::span<double const> profile,
                     std::vector<bool> const &consume);

// Reusable buffers for repeated solves with a fixed economy.
class AllocationSolver
{
public:
  explicit AllocationSolver(Economy const &economy);

  // Returns the consumer-set size (0 when nothing is provided) and fills consume.
  int solve(std::span<double const> profile, std::vector<bool> &consume);

  Economy const &economy() const { return economy_; }

private:
  Economy const      &economy_;
  std::vector<int>    order_;
  std::vector<double> sorted_;
  std::vector<double> surplus_;
};

}  // namespace clubgood
