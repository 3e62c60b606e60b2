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

// Haar and CDF(1,5) biorthogonal spline bases.
//
// The analysis side (phi, psi) is piecewise constant, so coefficients against
// a point process or an analytic cdf are exact. The synthesis side of the
// spline basis is tabulated by the cascade algorithm on a dyadic grid and
// evaluated by linear interpolation.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "poiwave/errors.hpp"
#include "poiwave/interval.hpp"
#include "poiwave/piecewise.hpp"
#include "poiwave/pointprocess.hpp"
#include "poiwave/signals.hpp"

namespace poiwave {

/// lambda = (j, k). j = -1 is the scaling function phi(x - k); j >= 0 is psi_{j,k}.
struct LambdaIndex {
  int j = -1;
  long k = 0;
  friend constexpr auto operator<=>(const LambdaIndex&, const LambdaIndex&) = default;
};

using CoeffSet = std::map<LambdaIndex, double>;

[[nodiscard]] inline double coeff_or_zero(const CoeffSet& c, const LambdaIndex& l) noexcept {
  const auto it = c.find(l);
  return it == c.end() ? 0.0 : it->second;
}

enum class BasisKind { Haar, Spline15 };

/// Samples of a function at lo + i * 2^-depth, linearly interpolated, zero outside.
class DyadicTable {
 public:
  DyadicTable() = default;
  DyadicTable(double lo, int depth, std::vector<double> values)
      : lo_(lo), depth_(depth), scale_(std::ldexp(1.0, depth)), values_(std::move(values)) {}

  [[nodiscard]] double operator()(double x) const noexcept {
    const double p = (x - lo_) * scale_;
    if (!(p >= 0.0) || values_.size() < 2) return 0.0;
    const auto last = static_cast<double>(values_.size() - 1);
    if (p > last) return 0.0;
    const auto i = std::min(static_cast<std::size_t>(p), values_.size() - 2);
    const double t = p - static_cast<double>(i);
    return values_[i] + t * (values_[i + 1] - values_[i]);
  }

  [[nodiscard]] double lo() const noexcept { return lo_; }
  [[nodiscard]] double hi() const noexcept { return lo_ + static_cast<double>(values_.size() - 1) / scale_; }
  [[nodiscard]] int depth() const noexcept { return depth_; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }

 private:
  double lo_ = 0.0;
  int depth_ = 0;
  double scale_ = 1.0;
  std::vector<double> values_;
};

class BasisSpec {
 public:
  /// Cascade depth of the tabulated dual scaling function.
  static constexpr int kCascadeDepth = 12;

  static const BasisSpec& haar() {
    static const BasisSpec b = make_haar();
    return b;
  }

  static const BasisSpec& spline15() {
    static const BasisSpec b = make_spline15();
    return b;
  }

  static const BasisSpec& get(BasisKind kind) { return kind == BasisKind::Haar ? haar() : spline15(); }

  static const BasisSpec& parse(std::string_view name) {
    const std::string key = detail::lower(name);
    if (key == "haar") return haar();
    if (key == "spline15" || key == "spline" || key == "cdf15") return spline15();
    throw ConfigError("unknown basis '" + std::string(name) + "'");
  }

  /// Dual lowpass taps h~_{-4..5}, normalised to sum 2.
  static constexpr std::array<double, 10> spline_dual_taps() {
    return {3.0 / 128, -3.0 / 128, -22.0 / 128, 22.0 / 128, 1.0, 1.0, 22.0 / 128, -22.0 / 128, -3.0 / 128, 3.0 / 128};
  }
  static constexpr int kDualTapFirst = -4;

  [[nodiscard]] BasisKind kind() const noexcept { return kind_; }
  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] bool orthonormal() const noexcept { return kind_ == BasisKind::Haar; }

  [[nodiscard]] const PiecewiseConstant& phi() const noexcept { return phi_; }
  [[nodiscard]] const PiecewiseConstant& psi() const noexcept { return psi_; }
  [[nodiscard]] const PiecewiseConstant& analysis(bool wavelet) const noexcept { return wavelet ? psi_ : phi_; }

  [[nodiscard]] double synth_phi(double x) const noexcept {
    return kind_ == BasisKind::Haar ? phi_(x) : phi_tilde_(x);
  }
  [[nodiscard]] double synth_psi(double x) const noexcept {
    return kind_ == BasisKind::Haar ? psi_(x) : psi_tilde_(x);
  }
  [[nodiscard]] double synthesis(bool wavelet, double x) const noexcept {
    return wavelet ? synth_psi(x) : synth_phi(x);
  }

  [[nodiscard]] Interval synthesis_support(bool wavelet) const noexcept {
    if (kind_ == BasisKind::Haar) return analysis(wavelet).support();
    return wavelet ? Interval{psi_tilde_.lo(), psi_tilde_.hi()} : Interval{phi_tilde_.lo(), phi_tilde_.hi()};
  }

  /// Smallest interval holding both the analysis and the synthesis function.
  [[nodiscard]] Interval support_hull(bool wavelet) const noexcept {
    return hull(analysis(wavelet).support(), synthesis_support(wavelet));
  }

  [[nodiscard]] const DyadicTable& phi_tilde_table() const noexcept { return phi_tilde_; }
  [[nodiscard]] const DyadicTable& psi_tilde_table() const noexcept { return psi_tilde_; }

 private:
  BasisSpec() = default;

  static BasisSpec make_haar() {
    BasisSpec b;
    b.kind_ = BasisKind::Haar;
    b.name_ = "haar";
    b.phi_ = PiecewiseConstant::indicator(0.0, 1.0);
    b.psi_ = PiecewiseConstant({0.0, 0.5, 1.0}, {1.0, -1.0});
    return b;
  }

  static BasisSpec make_spline15() {
    BasisSpec b;
    b.kind_ = BasisKind::Spline15;
    b.name_ = "spline15";
    constexpr auto taps = spline_dual_taps();
    auto dual = [&](int k) -> double {
      const int i = k - kDualTapFirst;
      return (i >= 0 && i < static_cast<int>(taps.size())) ? taps[static_cast<std::size_t>(i)] : 0.0;
    };

    // phi = 1_[0,1) has lowpass (1, 1). psi(x) = sum_m g_m phi(2x - m), g_m = (-1)^m h~_{1-m}.
    b.phi_ = PiecewiseConstant::indicator(0.0, 1.0);
    std::vector<double> bp, vals;
    for (int m = -4; m <= 5; ++m) {
      bp.push_back(m / 2.0);
      vals.push_back((m % 2 == 0 ? 1.0 : -1.0) * dual(1 - m));
    }
    bp.push_back(3.0);
    b.psi_ = PiecewiseConstant(std::move(bp), std::move(vals));

    // phi~ at the integers -3..4: fixed point of v_m = sum_l h~_{2m-l} v_l with sum v = 1.
    constexpr int first = -3, count = 8;
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(count, count);
    for (int m = 0; m < count; ++m)
      for (int l = 0; l < count; ++l) A(m, l) -= dual(2 * (m + first) - (l + first));
    A.row(count - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(count);
    rhs(count - 1) = 1.0;
    const Eigen::VectorXd v = A.fullPivLu().solve(rhs);

    // Cascade refinement: table at spacing 2^-d on [-4, 5].
    std::vector<double> table(10, 0.0);
    for (int m = 0; m < count; ++m) table[static_cast<std::size_t>(m + 1)] = v(m);
    for (int d = 1; d <= kCascadeDepth; ++d) {
      const long per = 1L << d;
      const long half = per / 2;
      std::vector<double> next(static_cast<std::size_t>(9 * per + 1), 0.0);
      for (long i = 0; i < static_cast<long>(next.size()); ++i) {
        if (i % 2 == 0) {
          next[static_cast<std::size_t>(i)] = table[static_cast<std::size_t>(i / 2)];
          continue;
        }
        // x = -4 + i / 2^d; 2x - k sits at index (-4 - k) * 2^(d-1) + i of the coarser table.
        double acc = 0.0;
        for (int k = kDualTapFirst; k <= 5; ++k) {
          const long idx = (-4 - k) * half + i;
          if (idx >= 0 && idx < static_cast<long>(table.size())) acc += dual(k) * table[static_cast<std::size_t>(idx)];
        }
        next[static_cast<std::size_t>(i)] = acc;
      }
      table = std::move(next);
    }
    // psi~(x) = phi~(2x) - phi~(2x - 1) on [-2, 3] at spacing 2^-(D+1).
    const long per = 1L << kCascadeDepth;
    std::vector<double> wave(static_cast<std::size_t>(5 * 2 * per + 1), 0.0);
    for (long i = 0; i < static_cast<long>(wave.size()); ++i) {
      const auto at = [&](long idx) {
        return (idx >= 0 && idx < static_cast<long>(table.size())) ? table[static_cast<std::size_t>(idx)] : 0.0;
      };
      const double acc = at(i) - at(i - per);
      wave[static_cast<std::size_t>(i)] = acc;
    }
    b.phi_tilde_ = DyadicTable(-4.0, kCascadeDepth, std::move(table));
    b.psi_tilde_ = DyadicTable(-2.0, kCascadeDepth + 1, std::move(wave));
    return b;
  }

  BasisKind kind_ = BasisKind::Haar;
  std::string name_;
  PiecewiseConstant phi_, psi_;
  DyadicTable phi_tilde_, psi_tilde_;
};

namespace detail {

inline double level_scale(int j) noexcept { return j < 0 ? 1.0 : std::ldexp(1.0, j); }
inline double level_amplitude(int j) noexcept {
  if (j < 0) return 1.0;
  return (j % 2 == 0) ? std::ldexp(1.0, j / 2) : std::ldexp(std::numbers::sqrt2, (j - 1) / 2);
}

}  // namespace detail

/// phi_lambda as an exact step function: 2^{j/2} psi(2^j x - k), or phi(x - k) when j = -1.
inline PiecewiseConstant analysis_atom(const BasisSpec& basis, const LambdaIndex& l) {
  const PiecewiseConstant& base = basis.analysis(l.j >= 0);
  const double scale = detail::level_scale(l.j);
  const double amp = detail::level_amplitude(l.j);
  std::vector<double> bp, vals;
  for (double b : base.breakpoints()) bp.push_back((b + static_cast<double>(l.k)) / scale);
  for (double v : base.values()) vals.push_back(amp * v);
  return PiecewiseConstant(std::move(bp), std::move(vals));
}

[[nodiscard]] inline double atom_sup_norm(const BasisSpec& basis, const LambdaIndex& l) noexcept {
  return detail::level_amplitude(l.j) * basis.analysis(l.j >= 0).sup_norm();
}

[[nodiscard]] inline Interval atom_support(const BasisSpec& basis, const LambdaIndex& l) noexcept {
  const Interval s = basis.support_hull(l.j >= 0);
  const double scale = detail::level_scale(l.j);
  const auto k = static_cast<double>(l.k);
  return {(s.lo + k) / scale, (s.hi + k) / scale};
}

/// phi~_lambda(x).
[[nodiscard]] inline double synthesis_atom(const BasisSpec& basis, const LambdaIndex& l, double x) noexcept {
  const double y = detail::level_scale(l.j) * x - static_cast<double>(l.k);
  return detail::level_amplitude(l.j) * basis.synthesis(l.j >= 0, y);
}

/// beta_lambda = int phi_lambda f.
[[nodiscard]] inline double true_coeff(const BasisSpec& basis, const LambdaIndex& l, const SignalSpec& signal) {
  return analysis_atom(basis, l).integrate([&](double a, double b) { return signal.mass(a, b); });
}

/// V_{lambda,n} = (1/n) int phi_lambda^2 f.
[[nodiscard]] inline double true_variance(const BasisSpec& basis, const LambdaIndex& l, const SignalSpec& signal,
                                          long n) {
  if (n < 1) throw ConfigError("true_variance: n must be >= 1");
  return analysis_atom(basis, l).integrate([&](double a, double b) { return signal.mass(a, b); }, 2) /
         static_cast<double>(n);
}

/// beta^_lambda = (1/n) sum_T phi_lambda(T).
[[nodiscard]] inline double empirical_coeff(const BasisSpec& basis, const LambdaIndex& l, const PointSample& s) {
  return integrate_against(analysis_atom(basis, l), s) / static_cast<double>(s.n);
}

/// V^_lambda = (1/n^2) sum_T phi_lambda(T)^2.
[[nodiscard]] inline double empirical_variance(const BasisSpec& basis, const LambdaIndex& l, const PointSample& s) {
  const PiecewiseConstant atom = analysis_atom(basis, l);
  const Interval sup = atom.support();
  double acc = 0.0;
  auto it = std::lower_bound(s.points.begin(), s.points.end(), sup.lo);
  for (; it != s.points.end() && *it < sup.hi; ++it) {
    const double v = atom(*it);
    acc += v * v;
  }
  const auto n = static_cast<double>(s.n);
  return acc / (n * n);
}

/// Contiguous k range [kmin, kmax] at one level.
struct LevelRange {
  int j = -1;
  long kmin = 0;
  long kmax = -1;
  [[nodiscard]] std::size_t size() const noexcept { return kmax >= kmin ? static_cast<std::size_t>(kmax - kmin + 1) : 0; }
};

/// Dense enumeration of the indices j <= j0 whose atoms meet a window, ordered
/// by level then k. Positions index the flat coefficient arrays used in bulk
/// computations.
class IndexLayout {
 public:
  IndexLayout() = default;

  IndexLayout(const BasisSpec& basis, Interval window, int j0) : window_(window), j0_(j0) {
    if (!window.is_finite() || !(window.hi > window.lo)) throw ConfigError("index layout needs a finite, nonempty window");
    if (j0 < -1) throw ConfigError("j0 must be >= -1");
    if (j0 > 40) throw ConfigError("j0 too large");
    std::size_t off = 0;
    for (int j = -1; j <= j0; ++j) {
      const Interval s = basis.support_hull(j >= 0);
      const double scale = detail::level_scale(j);
      // Atom support [(s.lo + k)/scale, (s.hi + k)/scale) meets [lo, hi) iff k in (scale*lo - s.hi, scale*hi - s.lo).
      LevelRange r{j, static_cast<long>(std::floor(scale * window.lo - s.hi)) + 1,
                   static_cast<long>(std::ceil(scale * window.hi - s.lo)) - 1};
      levels_.push_back(r);
      offsets_.push_back(off);
      off += r.size();
    }
    size_ = off;
  }

  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] int j0() const noexcept { return j0_; }
  [[nodiscard]] Interval window() const noexcept { return window_; }
  [[nodiscard]] const std::vector<LevelRange>& levels() const noexcept { return levels_; }
  [[nodiscard]] const LevelRange& level(int j) const noexcept { return levels_[static_cast<std::size_t>(j + 1)]; }
  [[nodiscard]] std::size_t offset(int j) const noexcept { return offsets_[static_cast<std::size_t>(j + 1)]; }

  [[nodiscard]] LambdaIndex at(std::size_t pos) const noexcept {
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), pos);
    const auto li = static_cast<std::size_t>(it - offsets_.begin()) - 1;
    return {levels_[li].j, levels_[li].kmin + static_cast<long>(pos - offsets_[li])};
  }

  [[nodiscard]] std::optional<std::size_t> find(const LambdaIndex& l) const noexcept {
    if (l.j < -1 || l.j > j0_) return std::nullopt;
    const LevelRange& r = level(l.j);
    if (l.k < r.kmin || l.k > r.kmax) return std::nullopt;
    return offset(l.j) + static_cast<std::size_t>(l.k - r.kmin);
  }

  [[nodiscard]] std::vector<LambdaIndex> indices() const {
    std::vector<LambdaIndex> out;
    out.reserve(size_);
    for (const auto& r : levels_)
      for (long k = r.kmin; k <= r.kmax; ++k) out.push_back({r.j, k});
    return out;
  }

 private:
  Interval window_{};
  int j0_ = -1;
  std::vector<LevelRange> levels_;
  std::vector<std::size_t> offsets_;
  std::size_t size_ = 0;
};

/// All lambda with j <= j0 whose analysis or synthesis atom meets the window.
[[nodiscard]] inline std::vector<LambdaIndex> active_indices(const BasisSpec& basis, Interval window, int j0) {
  return IndexLayout(basis, window, j0).indices();
}

/// Flat per-layout arrays of beta^ and V^.
struct EmpiricalCoefficients {
  std::vector<double> beta_hat;
  std::vector<double> v_hat;
};

/// beta^ and V^ for every index of the layout in one pass over the points.
inline EmpiricalCoefficients empirical_coefficients(const BasisSpec& basis, const IndexLayout& layout,
                                                    const PointSample& sample) {
  EmpiricalCoefficients out;
  out.beta_hat.assign(layout.size(), 0.0);
  out.v_hat.assign(layout.size(), 0.0);
  const auto n = static_cast<double>(sample.n);
  for (const LevelRange& r : layout.levels()) {
    if (r.size() == 0) continue;
    const PiecewiseConstant& base = basis.analysis(r.j >= 0);
    const Interval s = base.support();
    const double scale = detail::level_scale(r.j);
    const double amp = detail::level_amplitude(r.j);
    const std::size_t off = layout.offset(r.j);
    for (double t : sample.points) {
      const double y = scale * t;
      // y - k in [s.lo, s.hi)  <=>  k in (y - s.hi, y - s.lo].
      const long lo = std::max(r.kmin, static_cast<long>(std::floor(y - s.hi)) + 1);
      const long hi = std::min(r.kmax, static_cast<long>(std::floor(y - s.lo)));
      for (long k = lo; k <= hi; ++k) {
        const double v = amp * base(y - static_cast<double>(k));
        const std::size_t pos = off + static_cast<std::size_t>(k - r.kmin);
        out.beta_hat[pos] += v;
        out.v_hat[pos] += v * v;
      }
    }
  }
  for (double& b : out.beta_hat) b /= n;
  for (double& v : out.v_hat) v /= n * n;
  return out;
}

/// Equally spaced evaluation points at the midpoints of size cells covering window.
struct UniformGrid {
  Interval window{0.0, 1.0};
  std::size_t size = 1u << 14;

  [[nodiscard]] double step() const noexcept { return window.width() / static_cast<double>(size); }
  [[nodiscard]] double x(std::size_t i) const noexcept {
    return window.lo + (static_cast<double>(i) + 0.5) * step();
  }
  [[nodiscard]] std::vector<double> points() const {
    std::vector<double> out(size);
    for (std::size_t i = 0; i < size; ++i) out[i] = x(i);
    return out;
  }
  void validate() const {
    if (!window.is_finite() || !(window.hi > window.lo)) throw ConfigError("grid window must be finite and nonempty");
    if (size == 0) throw ConfigError("grid size must be positive");
  }
};

namespace detail {

// Adds value * phi~_lambda to out over the grid cells inside the synthesis support.
inline void add_atom(const BasisSpec& basis, const LambdaIndex& l, double value, const UniformGrid& grid,
                     std::vector<double>& out) {
  if (value == 0.0) return;
  const Interval s = basis.synthesis_support(l.j >= 0);
  const double scale = level_scale(l.j);
  const double amp = level_amplitude(l.j) * value;
  const auto k = static_cast<double>(l.k);
  const double a = (s.lo + k) / scale, b = (s.hi + k) / scale;
  const double h = grid.step();
  const double first = std::ceil((a - grid.window.lo) / h - 0.5);
  const double last = std::floor((b - grid.window.lo) / h - 0.5);
  const auto n = static_cast<double>(grid.size);
  const double i0 = std::max(first, 0.0), i1 = std::min(last, n - 1.0);
  if (i1 < i0) return;
  const bool wavelet = l.j >= 0;
  for (auto i = static_cast<std::size_t>(i0); i <= static_cast<std::size_t>(i1); ++i)
    out[i] += amp * basis.synthesis(wavelet, scale * grid.x(i) - k);
}

}  // namespace detail

/// sum_lambda c_lambda phi~_lambda(x) at each grid point.
inline std::vector<double> reconstruct(const BasisSpec& basis, const CoeffSet& coeffs, const UniformGrid& grid) {
  grid.validate();
  std::vector<double> out(grid.size, 0.0);
  for (const auto& [l, v] : coeffs) detail::add_atom(basis, l, v, grid, out);
  return out;
}

/// Midpoint-rule integral of values^2 over the grid.
[[nodiscard]] inline double grid_l2_norm_squared(const std::vector<double>& values, const UniformGrid& grid) noexcept {
  double acc = 0.0;
  for (double v : values) acc += v * v;
  return acc * grid.step();
}

/// Exact true coefficients for a set of indices.
inline CoeffSet true_coefficients(const BasisSpec& basis, const std::vector<LambdaIndex>& indices,
                                  const SignalSpec& signal) {
  CoeffSet out;
  for (const auto& l : indices) out.emplace(l, true_coeff(basis, l, signal));
  return out;
}

struct FrameBounds {
  double c1 = 0.0;
  double c2 = 0.0;
};

/// Gram matrix of the synthesis atoms under the grid quadrature.
inline Eigen::MatrixXd synthesis_gram(const BasisSpec& basis, const std::vector<LambdaIndex>& indices,
                                      const UniformGrid& grid) {
  grid.validate();
  Eigen::MatrixXd values(static_cast<Eigen::Index>(indices.size()), static_cast<Eigen::Index>(grid.size));
  std::vector<double> row(grid.size);
  for (std::size_t r = 0; r < indices.size(); ++r) {
    std::fill(row.begin(), row.end(), 0.0);
    detail::add_atom(basis, indices[r], 1.0, grid, row);
    values.row(static_cast<Eigen::Index>(r)) = Eigen::Map<const Eigen::RowVectorXd>(row.data(), static_cast<Eigen::Index>(row.size()));
  }
  return (values * values.transpose()) * grid.step();
}

/// Extreme eigenvalues of the synthesis Gram matrix: for c supported on indices,
/// c1 |c|^2 <= |sum c phi~|^2 <= c2 |c|^2 under the same quadrature.
inline FrameBounds frame_bounds(const BasisSpec& basis, const std::vector<LambdaIndex>& indices,
                                const UniformGrid& grid) {
  if (indices.empty()) throw ConfigError("frame_bounds: empty index set");
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(synthesis_gram(basis, indices, grid),
                                                           Eigen::EigenvaluesOnly);
  return {eig.eigenvalues().minCoeff(), eig.eigenvalues().maxCoeff()};
}

}  // namespace poiwave
