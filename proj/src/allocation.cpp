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

#include "clubgood/allocation.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace clubgood {

namespace {

void check_profile(Economy const &economy, std::span<double const> profile)
{
  if (profile.size() != static_cast<std::size_t>(economy.buyers()))
  {
    throw std::invalid_argument("profile length must equal the number of buyers");
  }
  for (double t : profile)
  {
    if (!(t >= 0.0 && t <= economy.upper()))
    {
      throw std::invalid_argument("profile entry outside the type support");
    }
  }
}

void rank_into(std::span<double const> profile, std::vector<int> &order, std::vector<double> &sorted)
{
  order.resize(profile.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return profile[static_cast<std::size_t>(a)] > profile[static_cast<std::size_t>(b)]; });
  sorted.resize(profile.size());
  for (std::size_t i = 0; i < order.size(); ++i)
  {
    sorted[i] = profile[static_cast<std::size_t>(order[i])];
  }
}

double surplus_of(Economy const &economy, std::span<double const> sorted, int k)
{
  double sum = 0.0;
  for (int i = 0; i < k; ++i)
  {
    sum += economy.virtual_value(sorted[static_cast<std::size_t>(i)], k);
  }
  return sum;
}

}  // namespace

RankedProfile RankedProfile::rank(std::span<double const> profile)
{
  RankedProfile r;
  rank_into(profile, r.original_indices, r.sorted_thetas);
  return r;
}

double candidate_surplus(Economy const &economy, RankedProfile const &ranked, int k)
{
  if (k < 0 || k > static_cast<int>(ranked.sorted_thetas.size()))
  {
    throw std::out_of_range("candidate size outside 0..n");
  }
  return surplus_of(economy, ranked.sorted_thetas, k);
}

bool prefer(Economy const &economy, RankedProfile const &ranked, CandidateSet a, CandidateSet b)
{
  double const lhs = candidate_surplus(economy, ranked, a.size) - candidate_surplus(economy, ranked, b.size);
  return lhs >= economy.phi(b.size) - economy.phi(a.size);
}

AllocationSolver::AllocationSolver(Economy const &economy)
  : economy_(economy)
{}

int AllocationSolver::solve(std::span<double const> profile, std::vector<bool> &consume)
{
  int const n = economy_.buyers();
  rank_into(profile, order_, sorted_);
  surplus_.assign(static_cast<std::size_t>(n) + 1, 0.0);
  for (int k = 1; k <= n; ++k)
  {
    surplus_[static_cast<std::size_t>(k)] = surplus_of(economy_, sorted_, k);
  }
  int kept = 0;
  for (int k = 1; k <= n; ++k)
  {
    double const gain = surplus_[static_cast<std::size_t>(k)] - surplus_[static_cast<std::size_t>(kept)];
    if (gain >= economy_.phi(kept) - economy_.phi(k))
    {
      kept = k;
    }
  }
  bool const provided =
      kept > 0 && surplus_[static_cast<std::size_t>(kept)] >= economy_.adjusted_cost(kept);
  int const size = provided ? kept : 0;
  consume.assign(static_cast<std::size_t>(n), false);
  for (int i = 0; i < size; ++i)
  {
    consume[static_cast<std::size_t>(order_[static_cast<std::size_t>(i)])] = true;
  }
  return size;
}

double subset_profit(Economy const &economy, std::span<double const> profile,
                     std::vector<bool> const &consume)
{
  int k = 0;
  for (bool c : consume)
  {
    k += c ? 1 : 0;
  }
  double sum = economy.phi(k) - (k > 0 ? economy.cost() : 0.0);
  for (std::size_t i = 0; i < consume.size(); ++i)
  {
    if (consume[i])
    {
      sum += economy.virtual_value(profile[i], k);
    }
  }
  return sum;
}

Allocation solve_allocation(Economy const &economy, std::span<double const> profile)
{
  check_profile(economy, profile);
  AllocationSolver solver(economy);
  Allocation       out;
  out.set_size = solver.solve(profile, out.consume);
  out.provided = out.set_size > 0;
  out.profit   = subset_profit(economy, profile, out.consume);
  return out;
}

OracleAllocation brute_force_allocation(Economy const &economy, std::span<double const> profile)
{
  check_profile(economy, profile);
  int const n = economy.buyers();
  if (n > 20)
  {
    throw std::invalid_argument("brute-force enumeration is limited to 20 buyers");
  }
  std::size_t const   un = static_cast<std::size_t>(n);
  std::vector<double> psi(un * (un + 1), 0.0);
  for (int i = 0; i < n; ++i)
  {
    for (int k = 1; k <= n; ++k)
    {
      psi[static_cast<std::size_t>(i) * (un + 1) + static_cast<std::size_t>(k)] =
          economy.virtual_value(profile[static_cast<std::size_t>(i)], k);
    }
  }
  RankedProfile const ranked = RankedProfile::rank(profile);
  std::vector<std::uint32_t> top(un + 1, 0);
  for (int k = 1; k <= n; ++k)
  {
    top[static_cast<std::size_t>(k)] =
        top[static_cast<std::size_t>(k - 1)] | (1U << static_cast<unsigned>(ranked.original_indices[static_cast<std::size_t>(k - 1)]));
  }
  auto structured = [&](std::uint32_t mask, int size) { return top[static_cast<std::size_t>(size)] == mask; };
  // Lexicographic order of ascending member lists; a proper prefix sorts first.
  auto lex_less = [&](std::uint32_t a, std::uint32_t b) {
    for (int i = 0; i < n; ++i)
    {
      bool const ia = (a >> static_cast<unsigned>(i)) & 1U;
      bool const ib = (b >> static_cast<unsigned>(i)) & 1U;
      if (ia != ib)
      {
        // The list containing the smaller index first is smaller, unless the
        // other list has already ended.
        std::uint32_t const rest = ia ? b : a;
        bool const other_has_more = (rest >> static_cast<unsigned>(i)) != 0;
        return ia ? other_has_more : !other_has_more;
      }
    }
    return false;
  };
  auto better_tie = [&](std::uint32_t cand, int cand_size, std::uint32_t best, int best_size) {
    if (cand_size != best_size)
    {
      return cand_size > best_size;
    }
    bool const sc = structured(cand, cand_size);
    bool const sb = structured(best, best_size);
    if (sc != sb)
    {
      return sc;
    }
    return lex_less(cand, best);
  };

  std::uint32_t best_mask = 0;
  int           best_size = 0;
  double        best_obj  = economy.phi(0);
  double        second    = -std::numeric_limits<double>::infinity();
  std::uint32_t const limit = 1U << static_cast<unsigned>(n);
  for (std::uint32_t mask = 1; mask < limit; ++mask)
  {
    int const size = __builtin_popcount(mask);
    double    obj  = economy.phi(size) - economy.cost();
    for (int i = 0; i < n; ++i)
    {
      if ((mask >> static_cast<unsigned>(i)) & 1U)
      {
        obj += psi[static_cast<std::size_t>(i) * (un + 1) + static_cast<std::size_t>(size)];
      }
    }
    if (obj > best_obj || (obj == best_obj && better_tie(mask, size, best_mask, best_size)))
    {
      second    = best_obj;
      best_obj  = obj;
      best_mask = mask;
      best_size = size;
    }
    else
    {
      second = std::max(second, obj);
    }
  }
  OracleAllocation out;
  out.allocation.consume.assign(un, false);
  for (int i = 0; i < n; ++i)
  {
    out.allocation.consume[static_cast<std::size_t>(i)] = ((best_mask >> static_cast<unsigned>(i)) & 1U) != 0;
  }
  out.allocation.set_size = best_size;
  out.allocation.provided = best_size > 0;
  out.allocation.profit   = best_obj;
  out.runner_up_margin    = best_obj - second;
  return out;
}

bool provision_possible(Economy const &economy, std::span<double const> profile)
{
  check_profile(economy, profile);
  RankedProfile const ranked = RankedProfile::rank(profile);
  for (int k = 1; k <= economy.buyers(); ++k)
  {
    if (candidate_surplus(economy, ranked, k) >= economy.adjusted_cost(k))
    {
      return true;
    }
  }
  return false;
}

}  // namespace clubgood
