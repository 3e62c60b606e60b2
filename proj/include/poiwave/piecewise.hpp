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
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "poiwave/errors.hpp"
#include "poiwave/interval.hpp"

namespace poiwave {

/// Compactly supported step function. Piece i is [breakpoints[i], breakpoints[i+1])
/// with value values[i]; the function is 0 outside [front, back).
class PiecewiseConstant {
 public:
  PiecewiseConstant() = default;

  PiecewiseConstant(std::vector<double> breakpoints, std::vector<double> values)
      : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
    if (breakpoints_.size() != values_.size() + 1 || values_.empty())
      throw ConfigError("PiecewiseConstant: need one more breakpoint than values");
    for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i) {
      if (!(breakpoints_[i] < breakpoints_[i + 1]) || !std::isfinite(breakpoints_[i + 1]) ||
          !std::isfinite(breakpoints_[i]))
        throw ConfigError("PiecewiseConstant: breakpoints must be finite and strictly increasing");
    }
  }

  /// Indicator of [lo, hi).
  static PiecewiseConstant indicator(double lo, double hi, double value = 1.0) {
    return PiecewiseConstant({lo, hi}, {value});
  }

  [[nodiscard]] double operator()(double x) const noexcept {
    if (values_.empty() || x < breakpoints_.front() || x >= breakpoints_.back()) return 0.0;
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    return values_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
  }

  [[nodiscard]] std::span<const double> breakpoints() const noexcept { return breakpoints_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::size_t pieces() const noexcept { return values_.size(); }
  [[nodiscard]] bool empty() const noexcept { return values_.empty(); }

  [[nodiscard]] Interval support() const noexcept {
    if (values_.empty()) return {0.0, 0.0};
    return {breakpoints_.front(), breakpoints_.back()};
  }

  [[nodiscard]] double sup_norm() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  /// sum_i values[i]^p * mass(b_i, b_{i+1}) for a measure given by its interval masses.
  template <class MassFn>
  [[nodiscard]] double integrate(MassFn&& mass, int power = 1) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      const double v = values_[i];
      if (v == 0.0) continue;
      const double w = power == 1 ? v : power == 2 ? v * v : std::pow(v, power);
      acc += w * mass(breakpoints_[i], breakpoints_[i + 1]);
    }
    return acc;
  }

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

}  // namespace poiwave
