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

// Runs every acceptance criterion and prints one pass/fail line each.

#include "clubgood/acceptance.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

int main(int argc, char **argv)
{
  clubgood::AcceptanceOptions options;
  for (int i = 1; i < argc; ++i)
  {
    std::string const arg = argv[i];
    if (arg == "--threads" && i + 1 < argc)
    {
      options.threads = std::atoi(argv[++i]);
    }
    else if (arg == "--seed" && i + 1 < argc)
    {
      options.seed = std::strtoull(argv[++i], nullptr, 10);
    }
    else
    {
      options.only.push_back(std::atoi(arg.c_str()));
    }
  }
  bool all = true;
  clubgood::run_acceptance(options, [&](clubgood::CriterionResult const &r) {
    all = all && r.pass;
    std::cout << clubgood::format_criterion(r) << std::endl;
  });
  std::cout << (all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL") << std::endl;
  return all ? 0 : 1;
}
