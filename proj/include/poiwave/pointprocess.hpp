/*
Copyright 2026 The poiwave Authors
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
you may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "poiwave/errors.hpp"
#include "poiwave/piecewise.hpp"
#include "poiwave/rng.hpp"
#include "poiwave/signals.hpp"

namespace poiwave {

/// One realisation of a Poisson process with intensity n*f.
struct PointSample {
  std::vector<double> points;  // sorted ascending
  long n = 1;

  [[nodiscard]] std::size_t size() const noexcept { return points.size(); }
  [[nodiscard]] bool empty() const noexcept { return points.empty(); }

  /// Throws ConfigError unless the points are finite and sorted and n >= 1.
  void validate() const {
    if (n < 1) throw ConfigError("PointSample: n must be >= 1");
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (!std::isfinite(points[i])) throw ConfigError("PointSample: non-finite point");
      if (i > 0 && points[i] < points[i - 1]) throw ConfigError("PointSample: points not sorted");
    }
  }
};

namespace detail {

// ln(k!) from a table for small k and the Stirling series above it.
inline double log_factorial(double k) noexcept {
  static const std::array<double, 128> table = [] {
    std::array<double, 128> t{};
    t[0] = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] + std::log(static_cast<double>(i));
    return t;
  }();
  if (k < static_cast<double>(table.size())) return table[static_cast<std::size_t>(k)];
  const double x = k + 1.0;
  const double ix2 = 1.0 / (x * x);
  const double series = (1.0 / 12.0 - ix2 * (1.0 / 360.0 - ix2 * (1.0 / 1260.0 - ix2 / 1680.0))) / x;
  return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi) + series;
}

}  // namespace detail

/// One Poisson(mean) draw. Multiplication method below mean 10, otherwise
/// Hormann's transformed rejection with squeeze (PTRS).
inline std::uint64_t poisson_count(double mean, CounterRng& rng) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw ConfigError("poisson_count: mean must be finite and >= 0");
  if (mean == 0.0) return 0;
  if (mean < 10.0) {
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double prod = rng.uniform();
    while (prod > limit) {
      ++k;
      prod *= rng.uniform();
    }
    return k;
  }
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <= -mean + k * loglam - detail::log_factorial(k))
      return static_cast<std::uint64_t>(k);
  }
}

/// Poisson process with intensity n*f: K ~ Poisson(n*|f|_1), then K
/// independent inverse-cdf draws, sorted.
inline PointSample sample_points(const SignalSpec& signal, long n, CounterRng& rng) {
  if (n < 1) throw ConfigError("sample_points: n must be >= 1");
  const double mass = signal.l1_norm();
  const std::uint64_t count = poisson_count(static_cast<double>(n) * mass, rng);
  PointSample out;
  out.n = n;
  out.points.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) out.points.push_back(signal.quantile(rng.uniform() * mass));
  std::sort(out.points.begin(), out.points.end());
  return out;
}

/// sum over points T of g(T).
inline double integrate_against(const PiecewiseConstant& g, const PointSample& sample) noexcept {
  if (g.empty() || sample.empty()) return 0.0;
  const Interval s = g.support();
  auto it = std::lower_bound(sample.points.begin(), sample.points.end(), s.lo);
  double acc = 0.0;
  for (; it != sample.points.end() && *it < s.hi; ++it) acc += g(*it);
  return acc;
}

/// Union of two samples at the same signal: a sample at scale n1 + n2.
inline PointSample superpose(const PointSample& a, const PointSample& b) {
  PointSample out;
  out.n = a.n + b.n;
  out.points.resize(a.size() + b.size());
  std::merge(a.points.begin(), a.points.end(), b.points.begin(), b.points.end(), out.points.begin());
  return out;
}

/// [min point - pad, max point + pad]; empty samples give an empty interval at 0.
inline Interval observation_span(const PointSample& sample, double pad = 0.0) noexcept {
  if (sample.empty()) return {0.0, 0.0};
  return {sample.points.front() - pad, sample.points.back() + pad};
}

}  // namespace poiwave
