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

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "poiwave/errors.hpp"
#include "poiwave/interval.hpp"
#include "poiwave/pointprocess.hpp"
#include "poiwave/signals.hpp"
#include "poiwave/wavelets.hpp"

namespace poiwave {

/// Theoretical: variance term uses the inflated V~. Simulation: uses V^ directly.
enum class ThresholdVariant { Theoretical, Simulation };

inline ThresholdVariant parse_variant(std::string_view name) {
  const std::string key = detail::lower(name);
  if (key == "theoretical" || key == "theory") return ThresholdVariant::Theoretical;
  if (key == "simulation" || key == "sim") return ThresholdVariant::Simulation;
  throw ConfigError("unknown threshold variant '" + std::string(name) + "'");
}

inline const char* variant_name(ThresholdVariant v) noexcept {
  return v == ThresholdVariant::Theoretical ? "theoretical" : "simulation";
}

struct ThresholdParams {
  double gamma = 1.0;
  long n = 2;
  int j0 = 0;
  ThresholdVariant variant = ThresholdVariant::Simulation;
  Interval window{0.0, 1.0};

  void validate() const {
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ConfigError("gamma must be finite and >= 0");
    if (n < 2) throw ConfigError("n must be >= 2");
    if (j0 < -1) throw ConfigError("j0 must be >= -1");
    if (!window.is_finite() || !(window.hi > window.lo)) throw ConfigError("window must be finite and nonempty");
  }
};

/// floor(log2 n): the level with 2^j0 <= n < 2^(j0+1).
[[nodiscard]] inline int default_j0(long n) {
  if (n < 1) throw ConfigError("n must be positive");
  int j = 0;
  while ((2L << j) <= n) ++j;
  return j;
}

/// V~ = V^ + sqrt(2 gamma ln n V^ s^2 / n^2) + 3 gamma ln n s^2 / n^2, s = |phi_lambda|_inf.
[[nodiscard]] inline double v_tilde(double vhat, double gamma, long n, double supnorm) {
  if (n < 2) throw ConfigError("n must be >= 2");
  const double ln = std::log(static_cast<double>(n));
  const double s2n = supnorm * supnorm / (static_cast<double>(n) * static_cast<double>(n));
  return vhat + std::sqrt(2.0 * gamma * ln * vhat * s2n) + 3.0 * gamma * ln * s2n;
}

/// eta_{lambda,gamma} = sqrt(2 gamma V ln n) + gamma ln n s / (3n), with V = V~ or V^.
[[nodiscard]] inline double threshold(double vhat, const ThresholdParams& p, double supnorm) {
  if (p.n < 2) throw ConfigError("n must be >= 2");
  const double ln = std::log(static_cast<double>(p.n));
  const double v = p.variant == ThresholdVariant::Theoretical ? v_tilde(vhat, p.gamma, p.n, supnorm) : vhat;
  return std::sqrt(2.0 * p.gamma * v * ln) + p.gamma * ln * supnorm / (3.0 * static_cast<double>(p.n));
}

/// Keeps beta^ where |beta^| >= eta; drops every index with j > j0.
inline CoeffSet threshold_coeffs(const CoeffSet& emp, const CoeffSet& vhats, const ThresholdParams& p,
                                 const CoeffSet& supnorms) {
  CoeffSet kept;
  for (const auto& [l, b] : emp) {
    if (l.j > p.j0) continue;
    const double eta = threshold(coeff_or_zero(vhats, l), p, coeff_or_zero(supnorms, l));
    if (std::abs(b) >= eta) kept.emplace(l, b);
  }
  return kept;
}

/// Thresholded coefficients of one sample, on the indices of a precomputed layout.
inline CoeffSet estimate(const PointSample& sample, const BasisSpec& basis, const ThresholdParams& p,
                         const IndexLayout& layout) {
  p.validate();
  CoeffSet kept;
  if (sample.empty()) return kept;
  const EmpiricalCoefficients emp = empirical_coefficients(basis, layout, sample);
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const double b = emp.beta_hat[i];
    if (b == 0.0) continue;
    const LambdaIndex l = layout.at(i);
    if (l.j > p.j0) continue;
    if (std::abs(b) >= threshold(emp.v_hat[i], p, atom_sup_norm(basis, l))) kept.emplace(l, b);
  }
  return kept;
}

/// Full pipeline: active indices on p.window up to p.j0, beta^, V^, eta, keep rule.
inline CoeffSet estimate(const PointSample& sample, const BasisSpec& basis, const ThresholdParams& p) {
  p.validate();
  return estimate(sample, basis, p, IndexLayout(basis, p.window, p.j0));
}

/// The gamma* >= 0 solving a sqrt(gamma) + b gamma = |beta^| with a = sqrt(2 V^ ln n),
/// b = ln n s / (3n). Under the simulation threshold the coefficient is kept
/// exactly for gamma <= gamma*.
[[nodiscard]] inline double gamma_breakpoint(double beta_hat, double vhat, long n, double supnorm) {
  if (n < 2) throw ConfigError("n must be >= 2");
  if (!(supnorm > 0.0)) throw ConfigError("gamma_breakpoint: sup norm must be positive");
  const double c = std::abs(beta_hat);
  if (c == 0.0) return 0.0;
  const double ln = std::log(static_cast<double>(n));
  const double a = std::sqrt(2.0 * vhat * ln);
  const double b = ln * supnorm / (3.0 * static_cast<double>(n));
  // Rationalised root, stable when a^2 >> b c.
  const double r = 2.0 * c / (a + std::sqrt(a * a + 4.0 * b * c));
  return r * r;
}

/// Window on which coefficients are estimated: the support when it is finite,
/// otherwise the span of the observations widened by one coarse atom width.
[[nodiscard]] inline Interval estimation_window(const SignalSpec& signal, const PointSample& sample) {
  if (signal.has_compact_support()) return signal.support();
  if (sample.empty()) return signal.tail_window(1e-3);
  return observation_span(sample, 1.0);
}

}  // namespace poiwave
