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

// Closed-form references written independently of the library.

#include <algorithm>
#include <array>
#include <cstdint>
#include <vector>

namespace oracle {

// Uniform[0,1] with v = w_k * theta: psi = w_k * (2 theta - 1).
inline double psi_linear(double w, double theta)
{
  return w * (2.0 * theta - 1.0);
}

// Value weights of the pi family: pi alone, 1 - pi shared.
inline double pi_weight(double pi, int k)
{
  return k == 1 ? pi : 1.0 - pi;
}

// Two-buyer uniform economy with linear weights w1, w2 and adjusted costs c1, c2.
// Returns the consumer mask maximizing virtual surplus; ties favour larger sets.
inline std::uint8_t two_buyer_label(double w1, double w2, double c1, double c2, double t1, double t2)
{
  std::array<double, 4> s{0.0, psi_linear(w1, t1) - c1, psi_linear(w1, t2) - c1,
                          psi_linear(w2, t1) + psi_linear(w2, t2) - c2};
  std::uint8_t best = 3;
  for (std::uint8_t m : {std::uint8_t{1}, std::uint8_t{2}, std::uint8_t{0}})
  {
    if (s[m] > s[best])
    {
      best = m;
    }
  }
  return best;
}

// Gap between the best and second-best consumer sets of two_buyer_label.
inline double two_buyer_margin(double w1, double w2, double c1, double c2, double t1, double t2)
{
  std::array<double, 4> s{0.0, psi_linear(w1, t1) - c1, psi_linear(w1, t2) - c1,
                          psi_linear(w2, t1) + psi_linear(w2, t2) - c2};
  std::sort(s.begin(), s.end());
  return s[3] - s[2];
}

// Solo-only economy (pi = 1, c = 1/4): second price with reserve 5/8.
inline std::array<double, 2> rival_transfers(double t1, double t2)
{
  double const r = 5.0 / 8.0;
  std::array<double, 2> out{0.0, 0.0};
  if (std::max(t1, t2) < r)
  {
    return out;
  }
  if (t1 >= t2)
  {
    out[0] = std::max(r, t2);
  }
  else
  {
    out[1] = std::max(r, t1);
  }
  return out;
}

// Shared-only economy (pi = 0, c = 1/4): provision iff t1 + t2 >= 9/8, each pays
// the lowest own type that keeps provision.
inline std::array<double, 2> shared_transfers(double t1, double t2)
{
  if (t1 + t2 < 9.0 / 8.0)
  {
    return {0.0, 0.0};
  }
  return {9.0 / 8.0 - t2, 9.0 / 8.0 - t1};
}

// Interim payment of the solo-only economy: theta^2/2 + 25/128 above 5/8.
inline double rival_interim(double theta)
{
  return theta < 5.0 / 8.0 ? 0.0 : theta * theta / 2.0 + 25.0 / 128.0;
}

}  // namespace oracle
