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

// Monte-Carlo drivers behind the command line tool. Replication r always draws
// from the substream (seed, r), and results are reduced in replication order,
// so output does not depend on the number of worker threads.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "poiwave/baselines.hpp"
#include "poiwave/csv.hpp"
#include "poiwave/errors.hpp"
#include "poiwave/estimator.hpp"
#include "poiwave/pointprocess.hpp"
#include "poiwave/risk.hpp"
#include "poiwave/rng.hpp"
#include "poiwave/signals.hpp"
#include "poiwave/wavelets.hpp"

namespace poiwave {

/// Runs fn(i) for i in [0, count) on up to `threads` workers (0 = hardware).
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn, unsigned threads = 0) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

struct RunConfig {
  std::string signal = "Haar1";
  double d = 10.0;
  std::string basis = "haar";
  long n = 1024;
  std::optional<int> j0;
  double gamma = 1.0;
  double gamma_cap = 400.0;
  std::optional<long> reps;
  std::uint64_t seed = 1;
  std::size_t grid = 1u << 14;
  std::size_t bins = 0;  // 0 = default_bins(n)
  int coarse_level = 0;   // Anscombe baselines keep levels coarser than this untouched
  ThresholdVariant variant = ThresholdVariant::Simulation;
  std::vector<std::string> methods;
  std::map<std::string, std::string> externals;  // method name -> CSV (rep,x,estimate)
  unsigned threads = 0;

  [[nodiscard]] SignalSpec make_signal() const { return SignalSpec::parse(signal, d); }
  [[nodiscard]] const BasisSpec& make_basis() const { return BasisSpec::parse(basis); }

  void validate() const {
    if (n < 2) throw ConfigError("--n must be >= 2");
    if (reps && *reps < 1) throw ConfigError("--reps must be >= 1");
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ConfigError("--gamma must be finite and >= 0");
    if (!(gamma_cap > 0.0)) throw ConfigError("--gamma-cap must be positive");
    if (grid < 2) throw ConfigError("--grid must be >= 2");
    if (bins != 0 && (!is_power_of_two(bins) || bins < 2)) throw ConfigError("--bins must be a power of two >= 2");
    if (coarse_level < 0) throw ConfigError("--coarse-level must be >= 0");
    if (j0 && *j0 < -1) throw ConfigError("--j0 must be >= -1");
    (void)make_signal();
    (void)make_basis();
  }

  /// One-line description recorded as the CSV comment.
  [[nodiscard]] std::string describe(std::string_view command) const {
    std::ostringstream os;
    os << "poiwave " << command << " signal=" << make_signal().name() << " basis=" << make_basis().name()
       << " n=" << n << " j0=" << (j0 ? std::to_string(*j0) : std::string("default")) << " gamma=" << csv::number(gamma)
       << " gamma_cap=" << csv::number(gamma_cap) << " reps=" << (reps ? std::to_string(*reps) : std::string("default"))
       << " seed=" << seed << " grid=" << grid << " bins=" << (bins ? std::to_string(bins) : std::string("default"))
       << " coarse_level=" << coarse_level << " variant=" << variant_name(variant) << " d=" << csv::number(d);
    if (!methods.empty()) {
      os << " methods=";
      for (std::size_t i = 0; i < methods.size(); ++i) os << (i ? ";" : "") << methods[i];
    }
    return os.str();
  }
};

/// Replication r's point sample.
inline PointSample replicate_sample(const SignalSpec& signal, long n, std::uint64_t seed, std::uint32_t rep) {
  CounterRng rng(seed, rep, StreamPurpose::Sample);
  return sample_points(signal, n, rng);
}

// ---------------------------------------------------------------- reconstruct

struct ReconstructResult {
  UniformGrid grid;
  std::vector<double> truth;
  std::vector<double> estimate;
  CoeffSet kept;
  std::size_t points = 0;
};

inline ReconstructResult run_reconstruct(const RunConfig& cfg) {
  cfg.validate();
  const SignalSpec signal = cfg.make_signal();
  const BasisSpec& basis = cfg.make_basis();
  const PointSample sample = replicate_sample(signal, cfg.n, cfg.seed, 0);
  ThresholdParams p;
  p.gamma = cfg.gamma;
  p.n = cfg.n;
  p.j0 = cfg.j0.value_or(10);
  p.variant = cfg.variant;
  p.window = estimation_window(signal, sample);
  ReconstructResult r;
  r.points = sample.size();
  r.kept = estimate(sample, basis, p);
  r.grid = UniformGrid{p.window, cfg.grid};
  r.estimate = reconstruct(basis, r.kept, r.grid);
  r.truth.resize(cfg.grid);
  for (std::size_t i = 0; i < cfg.grid; ++i) r.truth[i] = signal.pdf(r.grid.x(i));
  return r;
}

// ---------------------------------------------------------------- calibrate

struct CalibrateResult {
  StepCurve mean_curve;
  double gamma_min = 0.0;
  double value_at_gamma_min = 0.0;
  double value_at_one = 0.0;
  long reps = 0;
  int j0 = 0;
};

/// Default replication count: 1000 for the three calibration signals, 100 otherwise.
inline long default_calibrate_reps(const SignalSpec& s) {
  return (s.id() == SignalName::Haar1 || s.id() == SignalName::Gauss1 || s.id() == SignalName::Bumps) ? 1000 : 100;
}

/// Mean of R_n(gamma) over reps independent samples.
inline StepCurve mean_risk_curve(const SignalSpec& signal, const BasisSpec& basis, long n, int j0, long reps,
                                 std::uint64_t seed, unsigned threads = 0) {
  if (reps < 1) throw ConfigError("reps must be >= 1");
  std::optional<TruthTable> shared;
  if (signal.has_compact_support()) shared = make_truth(basis, signal, signal.support(), j0, n);
  if (shared && !(shared->oracle > 0.0)) throw NumericError("oracle risk is zero on the window");

  CurveAccumulator acc;
  const std::size_t batch = 64;
  for (std::size_t start = 0; start < static_cast<std::size_t>(reps); start += batch) {
    const std::size_t count = std::min(batch, static_cast<std::size_t>(reps) - start);
    std::vector<StepCurve> curves(count);
    parallel_for(
        count,
        [&](std::size_t i) {
          const auto rep = static_cast<std::uint32_t>(start + i);
          const PointSample s = replicate_sample(signal, n, seed, rep);
          if (shared) {
            curves[i] = risk_curve(*shared, empirical_coefficients(basis, shared->layout, s));
          } else {
            const TruthTable t = make_truth(basis, signal, estimation_window(signal, s), j0, n);
            curves[i] = risk_curve(t, empirical_coefficients(basis, t.layout, s));
          }
        },
        threads);
    for (const auto& c : curves) acc.add(c);
  }
  return acc.mean();
}

inline CalibrateResult run_calibrate(const RunConfig& cfg) {
  cfg.validate();
  const SignalSpec signal = cfg.make_signal();
  CalibrateResult r;
  r.j0 = cfg.j0.value_or(default_j0(cfg.n));
  r.reps = cfg.reps.value_or(default_calibrate_reps(signal));
  r.mean_curve = mean_risk_curve(signal, cfg.make_basis(), cfg.n, r.j0, r.reps, cfg.seed, cfg.threads);
  r.gamma_min = gamma_min(r.mean_curve, cfg.gamma_cap);
  r.value_at_gamma_min = r.mean_curve(r.gamma_min);
  r.value_at_one = r.mean_curve(1.0);
  return r;
}

// ---------------------------------------------------------------- coefficient risk

struct MeanRisk {
  double mean = 0.0;
  double std_error = 0.0;
  double oracle = 0.0;  // mean oracle risk over replications
  long reps = 0;
};

/// Monte-Carlo mean of sum (beta~ - beta)^2 at a fixed gamma.
inline MeanRisk mean_coeff_risk(const SignalSpec& signal, const BasisSpec& basis, long n, int j0, double gamma,
                                ThresholdVariant variant, long reps, std::uint64_t seed, unsigned threads = 0) {
  if (reps < 1) throw ConfigError("reps must be >= 1");
  std::optional<TruthTable> shared;
  if (signal.has_compact_support()) shared = make_truth(basis, signal, signal.support(), j0, n);
  std::vector<double> risk(static_cast<std::size_t>(reps)), oracle(static_cast<std::size_t>(reps));
  parallel_for(
      static_cast<std::size_t>(reps),
      [&](std::size_t i) {
        const PointSample s = replicate_sample(signal, n, seed, static_cast<std::uint32_t>(i));
        std::optional<TruthTable> local;
        if (!shared) local = make_truth(basis, signal, estimation_window(signal, s), j0, n);
        const TruthTable& t = shared ? *shared : *local;
        const EmpiricalCoefficients emp = empirical_coefficients(basis, t.layout, s);
        ThresholdParams p{gamma, n, j0, variant, t.layout.window()};
        CompensatedSum acc;
        for (std::size_t k = 0; k < t.beta.size(); ++k) {
          const bool keep = std::abs(emp.beta_hat[k]) >= threshold(emp.v_hat[k], p, t.supnorm[k]);
          const double d = (keep ? emp.beta_hat[k] : 0.0) - t.beta[k];
          acc.add(d * d);
        }
        risk[i] = acc.value();
        oracle[i] = t.oracle;
      },
      threads);
  MeanRisk m;
  m.reps = reps;
  CompensatedSum sum, osum;
  for (std::size_t i = 0; i < risk.size(); ++i) sum.add(risk[i]), osum.add(oracle[i]);
  m.mean = sum.value() / static_cast<double>(reps);
  m.oracle = osum.value() / static_cast<double>(reps);
  if (reps > 1) {
    CompensatedSum ss;
    for (double v : risk) ss.add((v - m.mean) * (v - m.mean));
    m.std_error = std::sqrt(ss.value() / static_cast<double>(reps - 1) / static_cast<double>(reps));
  }
  return m;
}

// ---------------------------------------------------------------- check-bound

struct BoundCheck {
  MeanRisk risk;
  double bound = 0.0;  // 12 ln n (oracle + 1/n)
  bool pass = false;
};

inline BoundCheck run_check_bound(const RunConfig& cfg) {
  cfg.validate();
  const SignalSpec signal = cfg.make_signal();
  const int j0 = cfg.j0.value_or(default_j0(cfg.n));
  BoundCheck b;
  b.risk = mean_coeff_risk(signal, cfg.make_basis(), cfg.n, j0, cfg.gamma, cfg.variant, cfg.reps.value_or(200),
                           cfg.seed, cfg.threads);
  const auto n = static_cast<double>(cfg.n);
  b.bound = 12.0 * std::log(n) * (b.risk.oracle + 1.0 / n);
  b.pass = b.risk.mean + 2.0 * b.risk.std_error < b.bound;
  return b;
}

// ---------------------------------------------------------------- compare

inline const std::vector<std::string>& builtin_methods() {
  static const std::vector<std::string> m{"rand-thresh-haar", "rand-thresh-spline", "anscombe-uni", "anscombe-uni-ti"};
  return m;
}

struct CompareRow {
  long rep = 0;
  std::string method;
  double mse = 0.0;
};

namespace detail {

// External estimates: rep -> sorted (x, value) samples.
using ExternalEstimates = std::map<long, std::vector<std::pair<double, double>>>;

inline ExternalEstimates load_external(const std::string& path) {
  const csv::Table t = csv::read_file(path);
  const std::size_t cr = t.column("rep"), cx = t.column("x"), ce = t.column("estimate");
  ExternalEstimates out;
  for (const auto& row : t.rows)
    out[std::lround(csv::to_double(row[cr]))].emplace_back(csv::to_double(row[cx]), csv::to_double(row[ce]));
  for (auto& [rep, v] : out) std::sort(v.begin(), v.end());
  return out;
}

// Linear interpolation of (x, value) samples, zero outside their range.
inline std::vector<double> interpolate_onto(const std::vector<std::pair<double, double>>& s, const UniformGrid& g) {
  std::vector<double> out(g.size, 0.0);
  if (s.empty()) return out;
  for (std::size_t i = 0; i < g.size; ++i) {
    const double x = g.x(i);
    if (x < s.front().first || x > s.back().first) continue;
    auto it = std::lower_bound(s.begin(), s.end(), x, [](const auto& p, double v) { return p.first < v; });
    if (it == s.begin()) {
      out[i] = it->second;
      continue;
    }
    const auto& b = *it;
    const auto& a = *(it - 1);
    out[i] = b.first == a.first ? b.second : a.second + (x - a.first) / (b.first - a.first) * (b.second - a.second);
  }
  return out;
}

}  // namespace detail

/// Evaluation window of the comparison: the support, or the 1e-12 tail window.
[[nodiscard]] inline Interval comparison_window(const SignalSpec& signal) {
  return signal.has_compact_support() ? signal.support() : signal.tail_window(1e-12);
}

/// Per-replication L2 grid risk of each method on common samples.
inline std::vector<CompareRow> run_compare(const RunConfig& cfg) {
  cfg.validate();
  const SignalSpec signal = cfg.make_signal();
  std::vector<std::string> methods = cfg.methods.empty() ? builtin_methods() : cfg.methods;
  for (const auto& [name, path] : cfg.externals)
    if (std::find(methods.begin(), methods.end(), name) == methods.end()) methods.push_back(name);
  std::map<std::string, detail::ExternalEstimates> external;
  for (const auto& m : methods) {
    if (std::find(builtin_methods().begin(), builtin_methods().end(), m) != builtin_methods().end()) continue;
    const auto it = cfg.externals.find(m);
    if (it == cfg.externals.end()) throw ConfigError("method '" + m + "' needs --external " + m + "=PATH");
    external.emplace(m, detail::load_external(it->second));
  }

  const long reps = cfg.reps.value_or(100);
  const int j0 = cfg.j0.value_or(10);
  const UniformGrid grid{comparison_window(signal), cfg.grid};
  grid.validate();
  std::vector<std::vector<double>> mse(static_cast<std::size_t>(reps), std::vector<double>(methods.size(), 0.0));

  parallel_for(
      static_cast<std::size_t>(reps),
      [&](std::size_t r) {
        const PointSample s = replicate_sample(signal, cfg.n, cfg.seed, static_cast<std::uint32_t>(r));
        for (std::size_t m = 0; m < methods.size(); ++m) {
          const std::string& name = methods[m];
          std::vector<double> est;
          if (name == "rand-thresh-haar" || name == "rand-thresh-spline") {
            const BasisSpec& basis = name == "rand-thresh-haar" ? BasisSpec::haar() : BasisSpec::spline15();
            ThresholdParams p{cfg.gamma, cfg.n, j0, cfg.variant, estimation_window(signal, s)};
            est = s.empty() ? std::vector<double>(grid.size, 0.0) : reconstruct(basis, estimate(s, basis, p), grid);
          } else if (name == "anscombe-uni" || name == "anscombe-uni-ti") {
            AnscombeOptions opt;
            opt.bins = cfg.bins;
            opt.coarse_level = cfg.coarse_level;
            const std::size_t B = cfg.bins ? cfg.bins : default_bins(cfg.n);
            opt.shifts = name == "anscombe-uni" ? 1 : B;
            const PiecewiseConstant f = anscombe_estimate(signal, s, opt);
            est.resize(grid.size);
            for (std::size_t i = 0; i < grid.size; ++i) est[i] = f(grid.x(i));
          } else {
            const auto& ext = external.at(name);
            const auto it = ext.find(static_cast<long>(r));
            if (it == ext.end()) throw ConfigError("external method '" + name + "' has no rows for rep " + std::to_string(r));
            est = detail::interpolate_onto(it->second, grid);
          }
          mse[r][m] = l2_grid_risk(est, signal, grid);
        }
      },
      cfg.threads);

  std::vector<CompareRow> rows;
  for (std::size_t r = 0; r < mse.size(); ++r)
    for (std::size_t m = 0; m < methods.size(); ++m) rows.push_back({static_cast<long>(r), methods[m], mse[r][m]});
  return rows;
}

/// Median of the per-replication values of one method.
[[nodiscard]] inline double median_mse(const std::vector<CompareRow>& rows, std::string_view method) {
  std::vector<double> v;
  for (const auto& r : rows)
    if (r.method == method) v.push_back(r.mse);
  if (v.empty()) throw ConfigError("no rows for method '" + std::string(method) + "'");
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace poiwave
