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

#include "clubgood/numerics.hpp"

#include "clubgood/errors.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>
#include <charconv>
#include <cmath>
#include <thread>

namespace clubgood {

std::uint64_t mix64(std::uint64_t x)
{
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30U)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27U)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31U);
}

double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
{
  std::uint64_t const key  = mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ULL));
  std::uint64_t const bits = mix64(key ^ mix64(index));
  // 53 random bits, offset by half a unit so the value is never 0 or 1
  return (static_cast<double>(bits >> 11U) + 0.5) * 0x1.0p-53;
}

void parallel_for(std::size_t count, int threads, std::function<void(std::size_t)> const &body)
{
  std::size_t workers = threads > 1 ? static_cast<std::size_t>(threads) : 1;
  workers             = std::min(workers, count);
  if (workers <= 1)
  {
    for (std::size_t i = 0; i < count; ++i)
    {
      body(i);
    }
    return;
  }
  std::vector<std::thread>        pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w)
  {
    pool.emplace_back([&, w]() {
      try
      {
        for (std::size_t i = w; i < count; i += workers)
        {
          body(i);
        }
      }
      catch (...)
      {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto &t : pool)
  {
    t.join();
  }
  for (auto const &e : errors)
  {
    if (e)
    {
      std::rethrow_exception(e);
    }
  }
}

std::string format_double(double value)
{
  if (value == 0.0)
  {
    return "0";
  }
  char buffer[64];
  auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

double gauss32(std::function<double(double)> const &f, double a, double b)
{
  if (b <= a)
  {
    return 0.0;
  }
  return boost::math::quadrature::gauss<double, 32>::integrate(f, a, b);
}

namespace {

double adaptive_step(std::function<double(double)> const &f, double a, double b, double whole,
                     double tol, int depth)
{
  double const mid   = 0.5 * (a + b);
  double const left  = gauss32(f, a, mid);
  double const right = gauss32(f, mid, b);
  double const split = left + right;
  if (depth <= 0 || std::abs(split - whole) <= tol)
  {
    return split;
  }
  return adaptive_step(f, a, mid, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, mid, b, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_gauss32(std::function<double(double)> const &f, double a, double b, double tol,
                        int max_depth)
{
  if (b <= a)
  {
    return 0.0;
  }
  return adaptive_step(f, a, b, gauss32(f, a, b), tol, max_depth);
}

double bisect_root(std::function<double(double)> const &f, double lo, double hi, double tol,
                   int max_steps)
{
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0)
  {
    return lo;
  }
  if (fhi == 0.0)
  {
    return hi;
  }
  if ((flo > 0.0) == (fhi > 0.0))
  {
    throw NumericalError("bisect_root: no sign change on the bracket");
  }
  auto done = [tol](double a, double b) { return std::abs(b - a) <= tol; };
  boost::uintmax_t steps = static_cast<boost::uintmax_t>(max_steps);
  auto bracket = boost::math::tools::bisect(f, lo, hi, done, steps);
  return 0.5 * (bracket.first + bracket.second);
}

std::vector<double> linspace(double lo, double hi, std::size_t points)
{
  std::vector<double> out(points);
  if (points == 1)
  {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < points; ++i)
  {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  out.back() = hi;
  return out;
}

}  // namespace clubgood
