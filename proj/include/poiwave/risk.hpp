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

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "poiwave/errors.hpp"
#include "poiwave/estimator.hpp"
#include "poiwave/interval.hpp"
#include "poiwave/pointprocess.hpp"
#include "poiwave/signals.hpp"
#include "poiwave/wavelets.hpp"

namespace poiwave {

/// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Right-continuous step function of gamma >= 0. values[0] holds on [0, b_0),
/// values[i] on [b_{i-1}, b_i), values.back() on [b_last, inf).
class StepCurve {
 public:
  StepCurve() : values_{0.0} {}

  StepCurve(std::vector<double> breakpoints, std::vector<double> values)
      : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
    if (values_.size() != breakpoints_.size() + 1) throw ConfigError("StepCurve: need one more value than breakpoints");
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
      if (!(breakpoints_[i] > 0.0) || !std::isfinite(breakpoints_[i]))
        throw ConfigError("StepCurve: breakpoints must be positive and finite");
      if (i > 0 && !(breakpoints_[i] > breakpoints_[i - 1]))
        throw ConfigError("StepCurve: breakpoints must be strictly increasing");
    }
  }

  static StepCurve constant(double v) { return StepCurve({}, {v}); }

  [[nodiscard]] double operator()(double gamma) const noexcept {
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), gamma);
    return values_[static_cast<std::size_t>(it - breakpoints_.begin())];
  }

  [[nodiscard]] const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
  [[nodiscard]] std::size_t pieces() const noexcept { return values_.size(); }
  [[nodiscard]] double piece_start(std::size_t i) const noexcept { return i == 0 ? 0.0 : breakpoints_[i - 1]; }
  [[nodiscard]] double limit() const noexcept { return values_.back(); }

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

namespace detail {

// Sorts (gamma, delta) jumps, merges equal gammas and integrates from base.
inline StepCurve build_curve(double base, std::vector<std::pair<double, double>>& jumps) {
  std::sort(jumps.begin(), jumps.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<double> bp, vals{base};
  bp.reserve(jumps.size());
  vals.reserve(jumps.size() + 1);
  CompensatedSum acc;
  acc.add(base);
  std::size_t i = 0;
  while (i < jumps.size()) {
    const double g = jumps[i].first;
    while (i < jumps.size() && jumps[i].first == g) acc.add(jumps[i++].second);
    if (g <= 0.0) {
      vals.front() = acc.value();
      continue;
    }
    bp.push_back(g);
    vals.push_back(acc.value());
  }
  return StepCurve(std::move(bp), std::move(vals));
}

}  // namespace detail

/// Pointwise mean of step curves with no discretisation in gamma.
class CurveAccumulator {
 public:
  void add(const StepCurve& c) {
    base_.add(c.values().front());
    const auto& bp = c.breakpoints();
    const auto& v = c.values();
    for (std::size_t i = 0; i < bp.size(); ++i) jumps_.emplace_back(bp[i], v[i + 1] - v[i]);
    ++count_;
  }

  [[nodiscard]] std::size_t count() const noexcept { return count_; }

  [[nodiscard]] StepCurve mean() const {
    if (count_ == 0) throw ConfigError("average of zero curves");
    const auto n = static_cast<double>(count_);
    std::vector<std::pair<double, double>> scaled(jumps_);
    for (auto& j : scaled) j.second /= n;
    return detail::build_curve(base_.value() / n, scaled);
  }

 private:
  CompensatedSum base_;
  std::vector<std::pair<double, double>> jumps_;
  std::size_t count_ = 0;
};

inline StepCurve average_curves(std::span<const StepCurve> curves) {
  if (curves.empty()) throw ConfigError("average_curves: empty list");
  if (curves.size() == 1) return curves.front();
  CurveAccumulator acc;
  for (const auto& c : curves) acc.add(c);
  return acc.mean();
}

/// Start of the first piece attaining the minimum among pieces starting at or before cap.
[[nodiscard]] inline double gamma_min(const StepCurve& curve, double gamma_cap) {
  if (!(gamma_cap > 0.0)) throw ConfigError("gamma cap must be positive");
  std::size_t best = 0;
  for (std::size_t i = 1; i < curve.pieces() && curve.piece_start(i) <= gamma_cap; ++i)
    if (curve.values()[i] < curve.values()[best]) best = i;
  return curve.piece_start(best);
}

/// sum over the index set of min(beta^2, V).
[[nodiscard]] inline double oracle_risk(const CoeffSet& true_coeffs, const CoeffSet& variances) {
  CompensatedSum acc;
  for (const auto& [l, v] : variances) {
    const double b = coeff_or_zero(true_coeffs, l);
    acc.add(std::min(b * b, v));
  }
  for (const auto& [l, b] : true_coeffs)
    if (!variances.contains(l) && b != 0.0) throw ConfigError("oracle_risk: missing variance for a nonzero coefficient");
  return acc.value();
}

/// sum over the union of keys of (kept - true)^2.
[[nodiscard]] inline double coeff_risk(const CoeffSet& kept, const CoeffSet& true_coeffs) {
  CompensatedSum acc;
  for (const auto& [l, b] : true_coeffs) {
    const double d = coeff_or_zero(kept, l) - b;
    acc.add(d * d);
  }
  for (const auto& [l, v] : kept)
    if (!true_coeffs.contains(l)) acc.add(v * v);
  return acc.value();
}

/// True coefficients, variances and sup norms on one index layout.
struct TruthTable {
  IndexLayout layout;
  long n = 2;
  std::vector<double> beta;
  std::vector<double> variance;
  std::vector<double> supnorm;
  double oracle = 0.0;

  [[nodiscard]] CoeffSet beta_set() const {
    CoeffSet out;
    for (std::size_t i = 0; i < beta.size(); ++i)
      if (beta[i] != 0.0) out.emplace(layout.at(i), beta[i]);
    return out;
  }
};

inline TruthTable make_truth(const BasisSpec& basis, const SignalSpec& signal, Interval window, int j0, long n) {
  if (n < 2) throw ConfigError("n must be >= 2");
  TruthTable t;
  t.layout = IndexLayout(basis, window, j0);
  t.n = n;
  const std::size_t m = t.layout.size();
  t.beta.resize(m);
  t.variance.resize(m);
  t.supnorm.resize(m);
  CompensatedSum oracle;
  for (std::size_t i = 0; i < m; ++i) {
    const LambdaIndex l = t.layout.at(i);
    const PiecewiseConstant atom = analysis_atom(basis, l);
    const auto mass = [&](double a, double b) { return signal.mass(a, b); };
    t.beta[i] = atom.integrate(mass);
    t.variance[i] = atom.integrate(mass, 2) / static_cast<double>(n);
    t.supnorm[i] = atom_sup_norm(basis, l);
    oracle.add(std::min(t.beta[i] * t.beta[i], t.variance[i]));
  }
  t.oracle = oracle.value();
  return t;
}

/// Coefficient loss of simulation-variant thresholding as a function of gamma,
/// unnormalised: value at gamma is sum (beta~ - beta)^2.
inline StepCurve loss_curve(const TruthTable& truth, const EmpiricalCoefficients& emp) {
  CompensatedSum base;
  std::vector<std::pair<double, double>> jumps;
  for (std::size_t i = 0; i < truth.beta.size(); ++i) {
    const double b = truth.beta[i];
    const double bh = emp.beta_hat[i];
    const double kept = (bh - b) * (bh - b);
    base.add(kept);
    if (bh == 0.0) continue;
    const double g = gamma_breakpoint(bh, emp.v_hat[i], truth.n, truth.supnorm[i]);
    jumps.emplace_back(g, b * b - kept);
  }
  return detail::build_curve(base.value(), jumps);
}

/// R_n(gamma) = loss(gamma) / oracle.
inline StepCurve risk_curve(const TruthTable& truth, const EmpiricalCoefficients& emp) {
  if (!(truth.oracle > 0.0)) throw NumericError("risk_curve: oracle risk is zero on the window");
  StepCurve loss = loss_curve(truth, emp);
  std::vector<double> vals = loss.values();
  for (double& v : vals) v /= truth.oracle;
  return StepCurve(loss.breakpoints(), std::move(vals));
}

inline StepCurve risk_curve(const PointSample& sample, const SignalSpec& signal, const BasisSpec& basis, long n,
                            int j0) {
  if (sample.n != n) throw ConfigError("risk_curve: sample scale does not match n");
  const TruthTable truth = make_truth(basis, signal, estimation_window(signal, sample), j0, n);
  return risk_curve(truth, empirical_coefficients(basis, truth.layout, sample));
}

struct RiskReport {
  double oracle = 0.0;
  double coeff_risk = 0.0;
  double l2_grid_risk = 0.0;
  long kept_count = 0;
  double tail_energy = 0.0;  // sum of beta^2 beyond j0 (Haar), reported, not in the oracle
};

/// Midpoint-rule integral of (estimate - f)^2 over the grid.
[[nodiscard]] inline double l2_grid_risk(const std::vector<double>& estimate_grid, const SignalSpec& signal,
                                         const UniformGrid& grid) {
  if (estimate_grid.size() != grid.size) throw ConfigError("l2_grid_risk: grid size mismatch");
  CompensatedSum acc;
  for (std::size_t i = 0; i < grid.size; ++i) {
    const double d = estimate_grid[i] - signal.pdf(grid.x(i));
    acc.add(d * d);
  }
  return acc.value() * grid.step();
}

/// |f|_2^2 by adaptive Gauss-Kronrod between the kinks of f; infinite when f is unbounded.
[[nodiscard]] inline double l2_norm_squared(const SignalSpec& signal, Interval window) {
  if (!std::isfinite(signal.sup_norm())) return kInf;
  std::vector<double> cuts{window.lo, window.hi};
  for (double k : signal.kinks())
    if (k > window.lo && k < window.hi) cuts.push_back(k);
  std::sort(cuts.begin(), cuts.end());
  CompensatedSum acc;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    acc.add(boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [&](double x) {
          const double v = signal.pdf(x);
          return v * v;
        },
        cuts[i], cuts[i + 1], 15, 1e-12));
  }
  return acc.value();
}

[[nodiscard]] inline double l2_norm_squared(const SignalSpec& signal) {
  return l2_norm_squared(signal, signal.tail_window(1e-14));
}

/// Energy of f outside the span of the truth table's indices, for the orthonormal Haar basis.
[[nodiscard]] inline double haar_tail_energy(const SignalSpec& signal, const TruthTable& truth) {
  CompensatedSum acc;
  acc.add(l2_norm_squared(signal));
  for (double b : truth.beta) acc.add(-b * b);
  return std::max(0.0, acc.value());
}

/// F_lambda: mass of f on the support of phi_lambda.
[[nodiscard]] inline double f_lambda(const SignalSpec& signal, const BasisSpec& basis, const LambdaIndex& l) {
  const Interval s = analysis_atom(basis, l).support();
  return signal.mass(s.lo, s.hi);
}

struct Membership {
  bool member = false;
  std::string reason;
  explicit operator bool() const noexcept { return member; }
};

/// Whether f lies in F_n(R) for the Haar analysis, probing levels j <= probe_depth.
inline Membership class_membership(const SignalSpec& signal, const BasisSpec& basis, long n, double R,
                                   int probe_depth) {
  if (basis.kind() != BasisKind::Haar) throw ConfigError("class membership is defined for the Haar basis");
  if (n < 2) throw ConfigError("n must be >= 2");
  if (!std::isfinite(signal.sup_norm())) return {false, "unbounded intensity"};
  if (!signal.has_compact_support()) return {false, "support is not compact, infinitely many nonzero coefficients"};
  if (signal.l1_norm() > R) return {false, "l1 norm exceeds R"};
  if (signal.sup_norm() > R) return {false, "sup norm exceeds R"};
  if (l2_norm_squared(signal) > R) return {false, "squared l2 norm exceeds R"};

  const double ln = std::log(static_cast<double>(n));
  const double floor_mass = ln * std::log(ln) / static_cast<double>(n);
  const IndexLayout layout(basis, signal.support(), probe_depth + 1);
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const LambdaIndex l = layout.at(i);
    const double b = true_coeff(basis, l, signal);
    if (std::abs(b) <= 1e-12 * detail::level_amplitude(l.j)) continue;
    if (l.j > probe_depth) return {false, "nonzero coefficients beyond probe depth " + std::to_string(probe_depth)};
    const double F = f_lambda(signal, basis, l);
    if (F < floor_mass)
      return {false, "F_lambda below (ln n)(ln ln n)/n at (" + std::to_string(l.j) + "," + std::to_string(l.k) + ")"};
  }
  return {true, "ok"};
}

}  // namespace poiwave
