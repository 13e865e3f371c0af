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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace clubgood {

// Counter-based uniform generator: the value depends only on (seed, stream,
// index), so any partition of work over threads sees the same numbers.
double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

std::uint64_t mix64(std::uint64_t x);

// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
// handled exactly once; callers write results into slot i.
void parallel_for(std::size_t count, int threads, std::function<void(std::size_t)> const &body);

// Shortest decimal string that parses back to the same double.
std::string format_double(double value);

// Composite 32-node Gauss-Legendre on [a, b].
double gauss32(std::function<double(double)> const &f, double a, double b);

// Gauss-Legendre on [a, b], splitting the panel until two levels agree to `tol`.
double adaptive_gauss32(std::function<double(double)> const &f, double a, double b, double tol,
                        int max_depth);

// Locates a sign change of f on [lo, hi] where f(lo) and f(hi) differ in
// sign (or one is zero). Returns the midpoint of the final bracket.
double bisect_root(std::function<double(double)> const &f, double lo, double hi,
                   double tol = 1e-14, int max_steps = 200);

std::vector<double> linspace(double lo, double hi, std::size_t points);

}  // namespace clubgood
