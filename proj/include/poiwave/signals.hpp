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

// The nine analytic test intensities plus the two-Gaussian family f_d.
//
// Every signal exposes an exact pdf, an exact cdf (closed-form antiderivative),
// interval masses computed without catastrophic cancellation in the tails, and
// a quantile function used for inverse-cdf sampling.

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "poiwave/errors.hpp"
#include "poiwave/interval.hpp"

namespace poiwave {

enum class SignalName { Haar1, Haar2, Blocks, Comb, Gauss1, Gauss2, Beta05, Beta4, Bumps, GaussMixture };

namespace detail {

// Blocks / Bumps parameter rows.
inline constexpr std::array<double, 11> kPeakPos{0.1, 0.13, 0.15, 0.23, 0.25, 0.4, 0.44, 0.65, 0.76, 0.78, 0.81};
inline constexpr std::array<double, 11> kBlockJump{4, -5, 3, -4, 5, -4.2, 2.1, 4.3, -3.1, 2.1, -4.2};
inline constexpr std::array<double, 11> kBumpHeight{4, 5, 3, 4, 5, 4.2, 2.1, 4.3, 3.1, 5.1, 4.2};
inline constexpr std::array<double, 11> kBumpWidth{0.005, 0.005, 0.006, 0.01, 0.01, 0.03, 0.01, 0.01, 0.005, 0.008, 0.005};
inline constexpr double kBlocksNormalizer = 3.551;
inline constexpr double kBumpsNormalizer = 0.284;

// Comb blocks beyond this index carry mass below 2^-1100 and underflow.
inline constexpr int kCombMaxBlock = 1100;

struct GaussComponent {
  double weight;
  double mean;
  double sd;
};

inline double std_normal_cdf(double z) noexcept { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }
inline double std_normal_sf(double z) noexcept { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

// P(za <= Z < zb) for a standard normal, evaluated on the side that avoids cancellation.
inline double std_normal_mass(double za, double zb) noexcept {
  if (za >= 0.0) return std_normal_sf(za) - std_normal_sf(zb);
  if (zb <= 0.0) return std_normal_cdf(zb) - std_normal_cdf(za);
  return 1.0 - std_normal_sf(zb) - std_normal_cdf(za);
}

// Antiderivative of (1 + |x - p| / w)^-4, zero at x = p.
inline double bump_primitive(double x, double p, double w) noexcept {
  const double t = std::abs(x - p) / w;
  const double a = (w / 3.0) * (1.0 - 1.0 / ((1.0 + t) * (1.0 + t) * (1.0 + t)));
  return x >= p ? a : -a;
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace detail

/// Analytic intensity f. Immutable value type; copies are cheap enough to pass around.
class SignalSpec {
 public:
  static SignalSpec make(SignalName id) {
    SignalSpec s;
    s.id_ = id;
    switch (id) {
      case SignalName::Haar1:
        s.name_ = "Haar1";
        s.set_steps({0.0, 1.0}, {1.0});
        break;
      case SignalName::Haar2:
        s.name_ = "Haar2";
        s.set_steps({0.0, 0.125, 0.25, 1.0}, {1.5, 0.5, 1.0});
        break;
      case SignalName::Blocks: {
        s.name_ = "Blocks";
        std::vector<double> bp{0.0};
        std::vector<double> h;
        double level = 2.0;
        h.push_back(level / detail::kBlocksNormalizer);
        for (std::size_t j = 0; j < detail::kPeakPos.size(); ++j) {
          bp.push_back(detail::kPeakPos[j]);
          level += detail::kBlockJump[j];
          h.push_back(level / detail::kBlocksNormalizer);
        }
        bp.push_back(1.0);
        s.set_steps(std::move(bp), std::move(h));
        break;
      }
      case SignalName::Comb:
        s.name_ = "Comb";
        s.l1_ = 1.0;
        s.sup_ = 16.0;
        s.support_ = {1.0 / 32.0, kInf};
        break;
      case SignalName::Gauss1:
        s.name_ = "Gauss1";
        s.gauss_ = {{1.0, 0.5, 0.25}};
        s.finish_gauss();
        break;
      case SignalName::Gauss2:
        s.name_ = "Gauss2";
        // (1/sqrt(2pi)) exp(-(x-0.5)^2 / (2*0.25^2)) has mass 0.25; the second term 0.75.
        s.gauss_ = {{0.25, 0.5, 0.25}, {0.75, 5.0, 0.25}};
        s.finish_gauss();
        break;
      case SignalName::Beta05:
        s.name_ = "Beta0.5";
        s.l1_ = 1.0;
        s.sup_ = kInf;
        s.support_ = {0.0, 1.0};
        break;
      case SignalName::Beta4:
        s.name_ = "Beta4";
        s.l1_ = 1.0;
        s.sup_ = 3.0;
        s.support_ = {1.0, kInf};
        break;
      case SignalName::Bumps: {
        s.name_ = "Bumps";
        s.support_ = {0.0, 1.0};
        s.l1_ = s.bumps_cdf(1.0);
        double sup = 0.0;
        for (double p : detail::kPeakPos) sup = std::max(sup, s.bumps_pdf(p));
        sup = std::max({sup, s.bumps_pdf(0.0), s.bumps_pdf(1.0)});
        s.sup_ = sup;
        break;
      }
      case SignalName::GaussMixture:
        return gauss_mixture(10.0);
    }
    return s;
  }

  /// f_d(x) = (phi(x) + phi(x - d)) / 2 with phi the standard normal density.
  static SignalSpec gauss_mixture(double d) {
    if (!std::isfinite(d)) throw ConfigError("gauss mixture distance must be finite");
    SignalSpec s;
    s.id_ = SignalName::GaussMixture;
    s.d_ = d;
    s.name_ = "GaussMix(" + format_number(d) + ")";
    s.gauss_ = {{0.5, 0.0, 1.0}, {0.5, d, 1.0}};
    s.finish_gauss();
    return s;
  }

  /// Accepts the table names ("Beta0.5"), their enum spelling ("Beta05"), and
  /// "gaussmix" for f_d. Case-insensitive.
  static SignalSpec parse(std::string_view text, double d = 10.0) {
    const std::string key = detail::lower(text);
    for (SignalName id : builtin_names()) {
      const SignalSpec s = make(id);
      if (detail::lower(s.name()) == key) return s;
    }
    if (key == "beta05") return make(SignalName::Beta05);
    if (key == "gaussmix" || key == "gauss-mixture" || key == "fd") return gauss_mixture(d);
    throw ConfigError("unknown signal '" + std::string(text) + "'");
  }

  static constexpr std::array<SignalName, 9> builtin_names() {
    return {SignalName::Haar1,  SignalName::Haar2,  SignalName::Blocks, SignalName::Comb, SignalName::Gauss1,
            SignalName::Gauss2, SignalName::Beta05, SignalName::Beta4,  SignalName::Bumps};
  }

  [[nodiscard]] SignalName id() const noexcept { return id_; }
  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] double mixture_distance() const noexcept { return d_; }
  [[nodiscard]] double l1_norm() const noexcept { return l1_; }
  [[nodiscard]] double sup_norm() const noexcept { return sup_; }
  [[nodiscard]] Interval support() const noexcept { return support_; }
  [[nodiscard]] bool has_compact_support() const noexcept { return support_.is_finite(); }

  [[nodiscard]] double pdf(double x) const noexcept {
    switch (id_) {
      case SignalName::Haar1:
        return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0;
      case SignalName::Haar2:
        return 1.5 * closed(x, 0.0, 0.125) + 0.5 * closed(x, 0.125, 0.25) + closed(x, 0.25, 1.0);
      case SignalName::Blocks: {
        if (x < 0.0 || x > 1.0) return 0.0;
        double acc = 2.0;
        for (std::size_t j = 0; j < detail::kPeakPos.size(); ++j) {
          const double diff = x - detail::kPeakPos[j];
          const double sgn = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
          acc += 0.5 * detail::kBlockJump[j] * (1.0 + sgn);
        }
        return acc / detail::kBlocksNormalizer;
      }
      case SignalName::Comb: {
        if (!(x >= 1.0 / 32.0) || !std::isfinite(x)) return 0.0;
        const double y = 32.0 * x;
        const long k = comb_block(y);
        if (k < 1 || k > detail::kCombMaxBlock) return 0.0;
        const double kk = static_cast<double>(k);
        if (y > kk * kk + kk) return 0.0;
        return std::ldexp(32.0 / kk, -static_cast<int>(k));
      }
      case SignalName::Gauss1:
      case SignalName::Gauss2:
      case SignalName::GaussMixture:
        return gauss_pdf(x);
      case SignalName::Beta05:
        return (x > 0.0 && x <= 1.0) ? 0.5 / std::sqrt(x) : 0.0;
      case SignalName::Beta4:
        return x >= 1.0 ? 3.0 / (x * x * x * x) : 0.0;
      case SignalName::Bumps:
        return bumps_pdf(x);
    }
    return 0.0;
  }

  /// Mass of (-inf, x].
  [[nodiscard]] double cdf(double x) const noexcept {
    if (std::isnan(x)) return 0.0;
    switch (id_) {
      case SignalName::Haar1:
      case SignalName::Haar2:
      case SignalName::Blocks:
        return steps_cdf(x);
      case SignalName::Comb:
        return comb_cdf(x);
      case SignalName::Gauss1:
      case SignalName::Gauss2:
      case SignalName::GaussMixture: {
        double acc = 0.0;
        for (const auto& c : gauss_) acc += c.weight * detail::std_normal_cdf((x - c.mean) / c.sd);
        return acc;
      }
      case SignalName::Beta05:
        return x <= 0.0 ? 0.0 : (x >= 1.0 ? 1.0 : std::sqrt(x));
      case SignalName::Beta4:
        return x <= 1.0 ? 0.0 : 1.0 - 1.0 / (x * x * x);
      case SignalName::Bumps:
        return bumps_cdf(x);
    }
    return 0.0;
  }

  /// Mass of [a, b] (0 when b <= a).
  [[nodiscard]] double mass(double a, double b) const noexcept {
    if (!(b > a)) return 0.0;
    switch (id_) {
      case SignalName::Gauss1:
      case SignalName::Gauss2:
      case SignalName::GaussMixture: {
        double acc = 0.0;
        for (const auto& c : gauss_)
          acc += c.weight * detail::std_normal_mass((a - c.mean) / c.sd, (b - c.mean) / c.sd);
        return acc;
      }
      case SignalName::Beta4: {
        const double lo = std::max(a, 1.0);
        if (!(b > lo)) return 0.0;
        const double hi_term = std::isfinite(b) ? 1.0 / (b * b * b) : 0.0;
        return 1.0 / (lo * lo * lo) - hi_term;
      }
      case SignalName::Comb:
        return comb_tail(a) - comb_tail(b);
      default:
        return cdf(b) - cdf(a);
    }
  }

  /// Smallest x with cdf(x) = m, for m in (0, l1_norm). Exact inversion where the
  /// cdf is invertible in closed form, safeguarded Newton iteration otherwise.
  [[nodiscard]] double quantile(double m) const {
    if (!(m > 0.0)) return support_.lo;
    if (!(m < l1_)) return support_.hi;
    switch (id_) {
      case SignalName::Haar1:
      case SignalName::Haar2:
      case SignalName::Blocks:
        return steps_quantile(m);
      case SignalName::Comb:
        return comb_quantile(m);
      case SignalName::Beta05:
        return m * m;
      case SignalName::Beta4:
        return std::cbrt(1.0 / (1.0 - m));
      case SignalName::Bumps:
        return solve_cdf(m, 0.0, 1.0);
      case SignalName::Gauss1:
      case SignalName::Gauss2:
      case SignalName::GaussMixture: {
        double lo = gauss_.front().mean, hi = lo;
        for (const auto& c : gauss_) {
          lo = std::min(lo, c.mean - 40.0 * c.sd);
          hi = std::max(hi, c.mean + 40.0 * c.sd);
        }
        return solve_cdf(m, lo, hi);
      }
    }
    return 0.0;
  }

  [[nodiscard]] bool has_closed_form_quantile() const noexcept {
    switch (id_) {
      case SignalName::Gauss1:
      case SignalName::Gauss2:
      case SignalName::GaussMixture:
      case SignalName::Bumps:
        return false;
      default:
        return true;
    }
  }

  /// Interval holding all but at most eps of the mass.
  [[nodiscard]] Interval tail_window(double eps) const {
    if (!(eps > 0.0)) throw ConfigError("tail_window: eps must be positive");
    switch (id_) {
      case SignalName::Comb: {
        const int K = std::max(1, static_cast<int>(std::ceil(-std::log2(eps))));
        const double kk = K;
        return {1.0 / 32.0, (kk * kk + kk) / 32.0};
      }
      case SignalName::Beta4:
        return {1.0, std::max(1.0, std::cbrt(1.0 / eps))};
      case SignalName::Gauss1:
      case SignalName::Gauss2:
      case SignalName::GaussMixture: {
        // Two-sided normal tail below eps, never narrower than 8 standard deviations.
        double z = 8.0;
        while (2.0 * detail::std_normal_sf(z) > eps && z < 40.0) z += 0.25;
        Interval w{kInf, -kInf};
        for (const auto& c : gauss_) w = hull(w, Interval{c.mean - z * c.sd, c.mean + z * c.sd});
        return w;
      }
      default:
        return support_;
    }
  }

  /// Points where the pdf is discontinuous or not differentiable (Comb: first 64 blocks).
  [[nodiscard]] std::vector<double> kinks() const {
    std::vector<double> out;
    switch (id_) {
      case SignalName::Haar1:
      case SignalName::Haar2:
      case SignalName::Blocks:
        out = step_bp_;
        break;
      case SignalName::Comb:
        for (int k = 1; k <= 64; ++k) {
          out.push_back(static_cast<double>(k * k) / 32.0);
          out.push_back(static_cast<double>(k * k + k) / 32.0);
        }
        break;
      case SignalName::Beta05:
        out = {0.0, 1.0};
        break;
      case SignalName::Beta4:
        out = {1.0};
        break;
      case SignalName::Bumps:
        out = {0.0, 1.0};
        out.insert(out.end(), detail::kPeakPos.begin(), detail::kPeakPos.end());
        std::sort(out.begin(), out.end());
        break;
      default:
        break;
    }
    return out;
  }

 private:
  SignalSpec() = default;

  static double closed(double x, double a, double b) noexcept { return (x >= a && x <= b) ? 1.0 : 0.0; }

  static std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
  }

  void set_steps(std::vector<double> bp, std::vector<double> h) {
    step_bp_ = std::move(bp);
    step_h_ = std::move(h);
    step_cum_.assign(step_bp_.size(), 0.0);
    double sup = 0.0;
    for (std::size_t i = 0; i < step_h_.size(); ++i) {
      step_cum_[i + 1] = step_cum_[i] + step_h_[i] * (step_bp_[i + 1] - step_bp_[i]);
      sup = std::max(sup, step_h_[i]);
    }
    l1_ = step_cum_.back();
    sup_ = sup;
    support_ = {step_bp_.front(), step_bp_.back()};
  }

  [[nodiscard]] double steps_cdf(double x) const noexcept {
    if (x <= step_bp_.front()) return 0.0;
    if (x >= step_bp_.back()) return step_cum_.back();
    const auto it = std::upper_bound(step_bp_.begin(), step_bp_.end(), x);
    const auto i = static_cast<std::size_t>(it - step_bp_.begin()) - 1;
    return step_cum_[i] + step_h_[i] * (x - step_bp_[i]);
  }

  [[nodiscard]] double steps_quantile(double m) const noexcept {
    const auto it = std::upper_bound(step_cum_.begin(), step_cum_.end(), m);
    auto i = static_cast<std::size_t>(it - step_cum_.begin());
    i = std::min(i == 0 ? 0 : i - 1, step_h_.size() - 1);
    while (step_h_[i] <= 0.0 && i + 1 < step_h_.size()) ++i;
    const double x = step_bp_[i] + (m - step_cum_[i]) / step_h_[i];
    return std::clamp(x, step_bp_[i], step_bp_[i + 1]);
  }

  // Comb block index k with k^2 <= y < (k+1)^2.
  static long comb_block(double y) noexcept {
    if (y >= 1e12) return detail::kCombMaxBlock + 1;
    auto k = static_cast<long>(std::floor(std::sqrt(y)));
    while (k > 0 && static_cast<double>(k * k) > y) --k;
    while (static_cast<double>((k + 1) * (k + 1)) <= y) ++k;
    return k;
  }

  // Mass of [x, +inf).
  [[nodiscard]] double comb_tail(double x) const noexcept {
    if (!(x > 1.0 / 32.0)) return 1.0;
    if (!std::isfinite(x)) return 0.0;
    const double y = 32.0 * x;
    const long k = comb_block(y);
    if (k > detail::kCombMaxBlock) return 0.0;
    const double kk = static_cast<double>(k);
    const int ki = static_cast<int>(k);
    // Blocks strictly after k carry 2^-k in total; block k contributes its unfilled part.
    const double frac_left = std::max(0.0, (kk * kk + kk - y) / kk);
    return std::ldexp(1.0, -ki) + std::min(1.0, frac_left) * std::ldexp(1.0, -ki);
  }

  [[nodiscard]] double comb_cdf(double x) const noexcept { return 1.0 - comb_tail(x); }

  [[nodiscard]] double comb_quantile(double m) const noexcept {
    const double r = 1.0 - m;  // remaining tail mass, in (0, 1)
    // Block k holds tail masses in [2^-k, 2^-(k-1)).
    auto k = static_cast<long>(std::floor(-std::log2(r))) + 1;
    while (k > 1 && r >= std::ldexp(1.0, -static_cast<int>(k - 1))) --k;
    while (r < std::ldexp(1.0, -static_cast<int>(k))) ++k;
    const double kk = static_cast<double>(k);
    const double frac = 2.0 - std::ldexp(r, static_cast<int>(k));  // filled fraction of block k
    return (kk * kk + std::clamp(frac, 0.0, 1.0) * kk) / 32.0;
  }

  void finish_gauss() {
    l1_ = 0.0;
    double lo = kInf, hi = -kInf;
    for (const auto& c : gauss_) {
      l1_ += c.weight;
      lo = std::min(lo, c.mean);
      hi = std::max(hi, c.mean);
    }
    support_ = {-kInf, kInf};
    // Mixture maximum lies in [min mean, max mean]; scan then refine by golden section.
    double best_x = lo, best = gauss_pdf(lo);
    const int steps = hi > lo ? 2000 : 0;
    for (int i = 1; i <= steps; ++i) {
      const double x = lo + (hi - lo) * i / steps;
      const double v = gauss_pdf(x);
      if (v > best) best = v, best_x = x;
    }
    const double h = steps > 0 ? (hi - lo) / steps : 0.0;
    double a = best_x - h, b = best_x + h;
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::abs(best_x)); ++it) {
      const double c = b - phi * (b - a), d = a + phi * (b - a);
      if (gauss_pdf(c) > gauss_pdf(d)) b = d; else a = c;
    }
    sup_ = std::max(best, gauss_pdf(0.5 * (a + b)));
  }

  [[nodiscard]] double gauss_pdf(double x) const noexcept {
    double acc = 0.0;
    for (const auto& c : gauss_) {
      const double z = (x - c.mean) / c.sd;
      acc += c.weight * std::exp(-0.5 * z * z) / (c.sd * std::sqrt(2.0 * std::numbers::pi));
    }
    return acc;
  }

  [[nodiscard]] double bumps_pdf(double x) const noexcept {
    if (x < 0.0 || x > 1.0) return 0.0;
    double acc = 0.0;
    for (std::size_t j = 0; j < detail::kPeakPos.size(); ++j) {
      const double t = 1.0 + std::abs(x - detail::kPeakPos[j]) / detail::kBumpWidth[j];
      const double t2 = t * t;
      acc += detail::kBumpHeight[j] / (t2 * t2);
    }
    return acc / detail::kBumpsNormalizer;
  }

  [[nodiscard]] double bumps_cdf(double x) const noexcept {
    const double xc = std::clamp(x, 0.0, 1.0);
    double acc = 0.0;
    for (std::size_t j = 0; j < detail::kPeakPos.size(); ++j) {
      const double p = detail::kPeakPos[j], w = detail::kBumpWidth[j];
      acc += detail::kBumpHeight[j] * (detail::bump_primitive(xc, p, w) - detail::bump_primitive(0.0, p, w));
    }
    return acc / detail::kBumpsNormalizer;
  }

  [[nodiscard]] double solve_cdf(double m, double lo, double hi) const {
    double x = 0.5 * (lo + hi);
    double last_width = hi - lo;
    for (int it = 0; it < 400; ++it) {
      const double F = cdf(x) - m;
      if (F == 0.0) return x;
      if (F < 0.0) lo = x; else hi = x;
      if (hi - lo <= 1e-13 * std::max(1.0, std::abs(x))) return 0.5 * (lo + hi);
      const double d = pdf(x);
      double next = d > 0.0 ? x - F / d : lo - 1.0;
      // Bisect when Newton leaves the bracket or stops halving it.
      const bool slow = hi - lo > 0.5 * last_width;
      if (it % 2 == 1) last_width = hi - lo;
      if (!(next > lo && next < hi) || (slow && it % 2 == 1)) next = 0.5 * (lo + hi);
      if (std::abs(next - x) <= 1e-15 * std::max(1.0, std::abs(x))) return next;
      x = next;
    }
    throw NumericError("quantile: root finding did not converge");
  }

  SignalName id_ = SignalName::Haar1;
  std::string name_;
  double l1_ = 1.0;
  double sup_ = 1.0;
  double d_ = 0.0;
  Interval support_{0.0, 1.0};
  std::vector<double> step_bp_, step_h_, step_cum_;
  std::vector<detail::GaussComponent> gauss_;
};

/// Free-function spellings of the SignalSpec operations.
inline double eval_pdf(const SignalSpec& s, double x) noexcept { return s.pdf(x); }
inline double eval_cdf(const SignalSpec& s, double x) noexcept { return s.cdf(x); }

}  // namespace poiwave
