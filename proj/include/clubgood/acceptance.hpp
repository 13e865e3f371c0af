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
#include <functional>
#include <string>
#include <vector>

namespace clubgood {

// Random regular economy for property checks. Draws are retried on precondition
// failures, so the result always passes validation.
Economy random_regular_economy(std::uint64_t seed, std::uint64_t index, int min_buyers,
                               int max_buyers);

struct OracleCheckReport
{
  std::size_t economies        = 0;
  std::size_t profiles         = 0;
  std::size_t profit_failures  = 0;
  std::size_t set_failures     = 0;
  std::size_t sets_compared    = 0;
  double      worst_profit_gap = 0.0;
  std::string witness;
  bool        pass = true;

  std::string to_text() const;
};

OracleCheckReport oracle_check(std::uint64_t seed, std::size_t economies, std::size_t profiles,
                               int min_buyers, int max_buyers, int threads = 1);

struct CriterionResult
{
  int         id = 0;
  std::string name;
  bool        pass = false;
  std::string detail;
  double      seconds = 0.0;
};

struct AcceptanceOptions
{
  std::uint64_t    seed    = 20260101;
  int              threads = 1;
  std::vector<int> only;  // empty runs every criterion
};

std::vector<CriterionResult> run_acceptance(AcceptanceOptions const &options,
                                            std::function<void(CriterionResult const &)> const &on_result = {});

std::string format_criterion(CriterionResult const &result, bool with_time = true);

}  // namespace clubgood
