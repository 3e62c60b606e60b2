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

// Binned comparison estimators: Anscombe transform, universal hard threshold on
// an orthonormal Haar transform of the bins, algebraic inverse, and an optional
// cycle-spun (translation invariant) variant.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "poiwave/errors.hpp"
#include "poiwave/interval.hpp"
#include "poiwave/piecewise.hpp"
#include "poiwave/pointprocess.hpp"
#include "poiwave/signals.hpp"

namespace poiwave {

[[nodiscard]] inline bool is_power_of_two(std::size_t b) noexcept { return b != 0 && (b & (b - 1)) == 0; }

[[nodiscard]] inline int log2_exact(std::size_t b) noexcept {
  int m = 0;
  while ((std::size_t{1} << m) < b) ++m;
  return m;
}

/// max(2, 2^(floor(log2 n) - 2)): 256 bins for n = 1024.
[[nodiscard]] inline std::size_t default_bins(long n) {
  if (n < 1) throw ConfigError("n must be positive");
  int j = 0;
  while ((2L << j) <= n) ++j;
  return std::size_t{1} << std::max(1, j - 2);
}

struct BinnedCounts {
  Interval window{0.0, 1.0};
  std::size_t B = 2;
  std::vector<std::uint64_t> counts;
  long n = 1;
  std::uint64_t dropped = 0;  // points outside the window

  [[nodiscard]] double bin_width() const noexcept { return window.width() / static_cast<double>(B); }
};

/// Equal-width bins [lo + i w, lo + (i+1) w).
inline BinnedCounts bin_counts(const PointSample& sample, Interval window, std::size_t B) {
  if (!is_power_of_two(B) || B < 2) throw ConfigError("bin count must be a power of two >= 2");
  if (!window.is_finite() || !(window.hi > window.lo)) throw ConfigError("bin window must have positive finite width");
  BinnedCounts out;
  out.window = window;
  out.B = B;
  out.n = sample.n;
  out.counts.assign(B, 0);
  const double scale = static_cast<double>(B) / window.width();
  for (double x : sample.points) {
    if (!window.contains(x)) {
      ++out.dropped;
      continue;
    }
    auto i = static_cast<std::size_t>((x - window.lo) * scale);
    out.counts[std::min(i, B - 1)] += 1;
  }
  return out;
}

/// y_i = 2 sqrt(N_i + 3/8).
inline std::vector<double> anscombe(const BinnedCounts& c) {
  std::vector<double> y(c.counts.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = 2.0 * std::sqrt(static_cast<double>(c.counts[i]) + 0.375);
  return y;
}

/// In-place orthonormal Haar analysis over `levels` levels. Output layout:
/// [approximations | details coarsest .. finest].
inline void haar_forward(std::vector<double>& y, int levels) {
  if (!is_power_of_two(y.size())) throw ConfigError("Haar transform length must be a power of two");
  if (levels < 0 || levels > log2_exact(y.size())) throw ConfigError("Haar transform: bad level count");
  std::vector<double> tmp(y.size());
  std::size_t len = y.size();
  const double r = 1.0 / std::numbers::sqrt2;
  for (int l = 0; l < levels; ++l, len /= 2) {
    const std::size_t half = len / 2;
    for (std::size_t i = 0; i < half; ++i) {
      tmp[i] = (y[2 * i] + y[2 * i + 1]) * r;
      tmp[half + i] = (y[2 * i] - y[2 * i + 1]) * r;
    }
    std::copy(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(len), y.begin());
  }
}

inline void haar_inverse(std::vector<double>& y, int levels) {
  if (!is_power_of_two(y.size())) throw ConfigError("Haar transform length must be a power of two");
  if (levels < 0 || levels > log2_exact(y.size())) throw ConfigError("Haar transform: bad level count");
  std::vector<double> tmp(y.size());
  std::size_t len = y.size() >> levels;
  const double r = 1.0 / std::numbers::sqrt2;
  for (int l = 0; l < levels; ++l, len *= 2) {
    for (std::size_t i = 0; i < len; ++i) {
      tmp[2 * i] = (y[i] + y[len + i]) * r;
      tmp[2 * i + 1] = (y[i] - y[len + i]) * r;
    }
    std::copy(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(2 * len), y.begin());
  }
}

/// Hard threshold at sigma sqrt(2 ln B) on every detail coefficient down to
/// `coarse_level` (0 = transform all the way to a single mean).
inline std::vector<double> universal_haar_denoise(std::vector<double> y, double sigma, int coarse_level = 0) {
  if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
  const int depth = log2_exact(y.size());
  if (coarse_level < 0 || coarse_level > depth) throw ConfigError("coarse level out of range");
  const int levels = depth - coarse_level;
  haar_forward(y, levels);
  const double thr = sigma * std::sqrt(2.0 * std::log(static_cast<double>(y.size())));
  for (std::size_t i = y.size() >> levels; i < y.size(); ++i)
    if (!(std::abs(y[i]) > thr)) y[i] = 0.0;
  haar_inverse(y, levels);
  return y;
}

/// f^_i = max(0, (y^_i/2)^2 - 3/8) B / (n |window|), one value per bin.
inline std::vector<double> inverse_anscombe_to_intensity(const std::vector<double>& yhat, Interval window,
                                                         std::size_t B, long n) {
  if (yhat.size() != B) throw ConfigError("inverse Anscombe: size mismatch");
  const double scale = static_cast<double>(B) / (static_cast<double>(n) * window.width());
  std::vector<double> out(B);
  for (std::size_t i = 0; i < B; ++i) {
    const double h = 0.5 * yhat[i];
    out[i] = std::max(0.0, h * h - 0.375) * scale;
  }
  return out;
}

/// Mean over circular shifts s = 0, B/shifts, ... of unshift(denoise(shift(y, s))).
template <class Denoiser>
std::vector<double> cycle_spin(const std::vector<double>& y, Denoiser&& denoise, std::size_t shifts) {
  const std::size_t B = y.size();
  if (shifts == 0 || shifts > B || B % shifts != 0) throw ConfigError("cycle_spin: shifts must divide the length");
  const std::size_t step = B / shifts;
  std::vector<double> acc(B, 0.0), shifted(B);
  for (std::size_t s = 0; s < shifts; ++s) {
    const std::size_t off = s * step;
    for (std::size_t i = 0; i < B; ++i) shifted[i] = y[(i + off) % B];
    const std::vector<double> d = denoise(shifted);
    for (std::size_t i = 0; i < B; ++i) acc[(i + off) % B] += d[i];
  }
  for (double& v : acc) v /= static_cast<double>(shifts);
  return acc;
}

inline std::vector<double> cycle_spin(const BinnedCounts& counts, auto&& denoise, std::size_t shifts) {
  return cycle_spin(anscombe(counts), denoise, shifts);
}

/// Bin window: the support when compact, otherwise [first point, just past the last point].
[[nodiscard]] inline Interval baseline_window(const SignalSpec& signal, const PointSample& sample) {
  if (signal.has_compact_support()) return signal.support();
  if (sample.empty()) return {0.0, 1.0};
  const double hi = std::nextafter(sample.points.back(), std::numeric_limits<double>::infinity());
  return {sample.points.front(), hi};
}

struct AnscombeOptions {
  std::size_t bins = 0;      // 0 selects default_bins(n)
  std::size_t shifts = 1;    // 1 = plain, B = fully translation invariant
  int coarse_level = 0;
};

/// ANSCOMBE-UNI (shifts = 1) or ANSCOMBE-UNI-TI (shifts = B) intensity estimate.
inline PiecewiseConstant anscombe_estimate(const SignalSpec& signal, const PointSample& sample,
                                           const AnscombeOptions& opt) {
  const std::size_t B = opt.bins == 0 ? default_bins(sample.n) : opt.bins;
  const Interval window = baseline_window(signal, sample);
  const BinnedCounts counts = bin_counts(sample, window, B);
  const auto denoise = [&](const std::vector<double>& y) { return universal_haar_denoise(y, 1.0, opt.coarse_level); };
  const std::vector<double> yhat = cycle_spin(counts, denoise, std::min(opt.shifts, B));
  std::vector<double> values = inverse_anscombe_to_intensity(yhat, window, B, sample.n);
  std::vector<double> bp(B + 1);
  for (std::size_t i = 0; i <= B; ++i) bp[i] = window.lo + counts.bin_width() * static_cast<double>(i);
  bp[B] = window.hi;
  return PiecewiseConstant(std::move(bp), std::move(values));
}

}  // namespace poiwave
