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
#include <functional>
#include <string>
#include <vector>

namespace clubgood {

struct VerificationReport
{
  std::string name;
  bool        pass      = true;
  double      worst     = 0.0;
  double      tolerance = 0.0;
  std::size_t checked   = 0;
  std::string witness;

  std::string to_text() const;
};

// Ex-post deviation sweep: truthful reporting against every report on the grid.
VerificationReport check_dsic(Economy const &economy, std::vector<double> const &own_grid,
                              std::vector<double> const &report_grid, std::size_t opponent_draws,
                              std::uint64_t seed, int threads = 1);

VerificationReport check_ir(Economy const &economy, std::vector<double> const &own_grid,
                            std::size_t opponent_draws, std::uint64_t seed, int threads = 1);

struct CutoffPartition
{
  int                      buyer = 0;
  std::vector<double>      opponents;
  double                   entry_cutoff = 0.0;
  std::vector<PathSegment> segments;
  // Higher own types reach weakly preferred set sizes along the path.
  bool ordered = true;
};

CutoffPartition extract_cutoff_partition(Economy const &economy, int buyer,
                                         std::vector<double> const &profile);

// Two-buyer region map; labels are bit masks (1 = buyer 1, 2 = buyer 2).
struct RegionGrid
{
  int                       resolution = 0;
  double                    upper      = 1.0;
  std::vector<std::uint8_t> labels;  // row-major, index i * resolution + j

  double       center(int i) const { return (i + 0.5) * upper / resolution; }
  std::uint8_t label(int i, int j) const
  {
    return labels[static_cast<std::size_t>(i) * static_cast<std::size_t>(resolution) +
                  static_cast<std::size_t>(j)];
  }
  std::string to_csv() const;
};

RegionGrid region_grid(Economy const &economy, int resolution, int threads = 1);

char const *region_label(std::uint8_t mask);

struct BenchmarkCutoffs
{
  double x        = 0.0;
  double y        = 0.0;
  double z        = 0.0;
  bool   positive = true;
};

// Three thresholds of the two-buyer uniform pi economy when all four regions
// are nonempty.
BenchmarkCutoffs solve_benchmark_cutoffs(double pi, double cost);

// Reserve of the solo-only regime: lowest type whose solo virtual value covers cost.
double rival_reserve(double pi, double cost);

// Lowest served type of the shared-only regime: joint entry against the top type.
double shared_entry(double pi, double cost);

struct EconomyFamily
{
  TypeDistribution                          distribution = TypeDistribution::uniform(1.0);
  ValuationModel                            valuation    = ValuationModel::no_network_effects();
  std::function<std::vector<double>(int)>   phi;
  double                                    cost = 0.0;

  Economy make(int n) const;
};

struct LimitRow
{
  int    buyers         = 0;
  double threshold_mean = 0.0;
  double threshold_se   = 0.0;
  double fraction_mean  = 0.0;
  double fraction_se    = 0.0;
};

struct LimitReport
{
  double                price           = 0.0;
  double                target_fraction = 0.0;
  std::vector<LimitRow> rows;

  std::string to_text() const;
  std::string to_csv() const;
};

LimitReport posted_price_limit(EconomyFamily const &family, std::vector<int> const &n_sequence,
                               int replications, std::uint64_t seed, int threads = 1);

}  // namespace clubgood
