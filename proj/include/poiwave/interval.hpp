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
#include <limits>

namespace poiwave {

/// Real interval [lo, hi]. Endpoints may be infinite. Whether the right end is
/// open is decided by the consumer (windows are treated as [lo, hi)).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  [[nodiscard]] constexpr double width() const noexcept { return hi - lo; }
  [[nodiscard]] bool is_finite() const noexcept { return std::isfinite(lo) && std::isfinite(hi); }
  [[nodiscard]] constexpr bool contains(double x) const noexcept { return x >= lo && x < hi; }
  [[nodiscard]] constexpr bool intersects(const Interval& o) const noexcept {
    return lo < o.hi && o.lo < hi;
  }

  friend constexpr bool operator==(const Interval&, const Interval&) = default;
};

[[nodiscard]] inline Interval hull(const Interval& a, const Interval& b) noexcept {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

[[nodiscard]] inline Interval intersection(const Interval& a, const Interval& b) noexcept {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace poiwave
