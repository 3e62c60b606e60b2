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

// Monte-Carlo and numerical property checks shared by the unit tests and the
// acceptance runner. Each check recomputes its reference value from first
// principles rather than from the library's bulk code paths.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "poiwave/poiwave.hpp"

namespace poiwave::checks {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

inline std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

/// Sample mean, variance and the standard errors of both (normal-theory free:
/// the variance SE uses the fourth central moment).
struct Moments {
  double mean = 0.0, var = 0.0, se_mean = 0.0, se_var = 0.0;
};

inline Moments moments(const std::vector<double>& x) {
  Moments m;
  const auto N = static_cast<double>(x.size());
  for (double v : x) m.mean += v;
  m.mean /= N;
  double m2 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = (v - m.mean) * (v - m.mean);
    m2 += d;
    m4 += d * d;
  }
  m.var = m2 / (N - 1.0);
  m4 /= N;
  m.se_mean = std::sqrt(m.var / N);
  m.se_var = std::sqrt(std::max(0.0, m4 - (m2 / N) * (m2 / N)) / N);
  return m;
}

// ------------------------------------------------------------------ point process

/// Campbell: for g = psi_{3,2} under Haar1 at n = 256, E int g dN = n int g f and
/// Var int g dN = n int g^2 f.
inline Outcome campbell(int reps = 10000, std::uint64_t seed = 11) {
  const SignalSpec f = SignalSpec::make(SignalName::Haar1);
  const long n = 256;
  const PiecewiseConstant g = analysis_atom(BasisSpec::haar(), {3, 2});
  // psi_{3,2} = 2^{3/2} on [2/8, 2.5/8), -2^{3/2} on [2.5/8, 3/8).
  const double mean_ref = 0.0;
  const double var_ref = static_cast<double>(n) * 8.0 * (1.0 / 8.0);
  std::vector<double> vals;
  for (int r = 0; r < reps; ++r) {
    CounterRng rng(seed, static_cast<std::uint32_t>(r));
    vals.push_back(integrate_against(g, sample_points(f, n, rng)));
  }
  const Moments m = moments(vals);
  Outcome o;
  if (std::abs(m.mean - mean_ref) > 4.0 * m.se_mean) o.fail(fmt("mean %.4g vs %.4g (se %.3g)", m.mean, mean_ref, m.se_mean));
  if (std::abs(m.var - var_ref) > 4.0 * m.se_var) o.fail(fmt("var %.4g vs %.4g (se %.3g)", m.var, var_ref, m.se_var));
  o.note(fmt("mean %.4g var %.4g (ref %.4g)", m.mean, m.var, var_ref));
  return o;
}

/// P(int g (dN - dmu) >= sqrt(2u int g^2 dmu) + |g|_inf u / 3) <= e^-u.
inline Outcome exponential_inequality(int reps = 10000, std::uint64_t seed = 12) {
  const SignalSpec f = SignalSpec::make(SignalName::Haar1);
  const long n = 256;
  const PiecewiseConstant g = analysis_atom(BasisSpec::haar(), {3, 2});
  const double g_dmu = 0.0;
  const double g2_dmu = static_cast<double>(n);  // n * int g^2 f = n
  const double gsup = 2.0 * std::sqrt(2.0);
  std::vector<double> centred;
  for (int r = 0; r < reps; ++r) {
    CounterRng rng(seed, static_cast<std::uint32_t>(r));
    centred.push_back(integrate_against(g, sample_points(f, n, rng)) - g_dmu);
  }
  Outcome o;
  for (int u = 1; u <= 3; ++u) {
    const double level = std::sqrt(2.0 * u * g2_dmu) + gsup * u / 3.0;
    const double freq = static_cast<double>(std::count_if(centred.begin(), centred.end(),
                                                          [&](double v) { return v >= level; })) / reps;
    const double p = std::exp(-u);
    const double se = std::sqrt(p * (1 - p) / reps);
    if (freq > p + 4.0 * se) o.fail(fmt("u=%g freq %.4g > bound %.4g", u, freq, p + 4 * se));
    o.note(fmt("u=%g freq %.4g bound %.4g", u, freq, p));
  }
  return o;
}

/// Lemma-type concentration of beta^ (two-sided, 2e^-u) and of the variance
/// over-estimate (V >= V~ with u = gamma ln n has probability <= n^-gamma).
inline Outcome coefficient_concentration(int reps = 10000, std::uint64_t seed = 13) {
  const SignalSpec f = SignalSpec::make(SignalName::Haar1);
  const BasisSpec& basis = BasisSpec::haar();
  const long n = 256;
  const LambdaIndex l{3, 2};
  const double beta = 0.0;
  const double V = 1.0 / static_cast<double>(n);
  const double sup = std::pow(2.0, 1.5);
  std::vector<double> dev, vhat;
  for (int r = 0; r < reps; ++r) {
    CounterRng rng(seed, static_cast<std::uint32_t>(r));
    const PointSample s = sample_points(f, n, rng);
    dev.push_back(std::abs(empirical_coeff(basis, l, s) - beta));
    vhat.push_back(empirical_variance(basis, l, s));
  }
  Outcome o;
  for (int u = 1; u <= 3; ++u) {
    const double level = std::sqrt(2.0 * u * V) + sup * u / (3.0 * static_cast<double>(n));
    const double freq =
        static_cast<double>(std::count_if(dev.begin(), dev.end(), [&](double v) { return v >= level; })) / reps;
    const double p = std::min(1.0, 2.0 * std::exp(-u));
    const double se = std::sqrt(p * (1 - p) / reps);
    if (freq > p + 4.0 * se) o.fail(fmt("u=%g tail %.4g > %.4g", u, freq, p + 4 * se));
  }
  const double gamma = 1.0;
  std::size_t under = 0;
  for (double v : vhat)
    if (V >= v_tilde(v, gamma, n, sup)) ++under;
  const double p = std::pow(static_cast<double>(n), -gamma);
  const double freq = static_cast<double>(under) / reps;
  const double se = std::sqrt(p * (1 - p) / reps);
  if (freq > p + 4.0 * se) o.fail(fmt("V >= V~ freq %.4g > %.4g", freq, p + 4 * se));
  o.note(fmt("V>=V~ freq %.4g (bound %.4g)", freq, p));
  return o;
}

/// E beta^ = beta for a spread of indices, signals and both bases.
inline Outcome unbiasedness(int reps = 10000, std::uint64_t seed = 14) {
  struct Case {
    SignalName s;
    const BasisSpec* b;
    LambdaIndex l;
  };
  const std::vector<Case> cases{{SignalName::Haar2, &BasisSpec::haar(), {2, 0}},
                                {SignalName::Blocks, &BasisSpec::haar(), {3, 1}},
                                {SignalName::Gauss1, &BasisSpec::haar(), {-1, 0}},
                                {SignalName::Blocks, &BasisSpec::spline15(), {2, 1}},
                                {SignalName::Gauss1, &BasisSpec::spline15(), {0, 0}},
                                {SignalName::Bumps, &BasisSpec::spline15(), {4, 3}}};
  const long n = 64;
  Outcome o;
  for (const auto& c : cases) {
    const SignalSpec f = SignalSpec::make(c.s);
    // Reference by adaptive quadrature of phi_lambda f over each constant piece.
    const PiecewiseConstant atom = analysis_atom(*c.b, c.l);
    double beta = 0.0;
    for (std::size_t i = 0; i < atom.pieces(); ++i) {
      const double a = atom.breakpoints()[i], b = atom.breakpoints()[i + 1];
      beta += atom.values()[i] *
              boost::math::quadrature::gauss_kronrod<double, 61>::integrate([&](double x) { return f.pdf(x); }, a, b, 20, 1e-13);
    }
    std::vector<double> vals;
    for (int r = 0; r < reps; ++r) {
      CounterRng rng(seed, static_cast<std::uint32_t>(r));
      vals.push_back(empirical_coeff(*c.b, c.l, sample_points(f, n, rng)));
    }
    const Moments m = moments(vals);
    if (std::abs(m.mean - beta) > 4.0 * m.se_mean)
      o.fail(f.name() + " " + c.b->name() + fmt(" (%g,%g): mean %.5g", c.l.j, static_cast<double>(c.l.k), m.mean) +
             fmt(" vs %.5g", beta));
  }
  return o;
}

// ------------------------------------------------------------------ wavelets

/// Haar synthesis is an isometry: |sum c phi~|^2 = |c|^2.
inline Outcome haar_parseval(int trials = 100, std::uint64_t seed = 15) {
  const BasisSpec& haar = BasisSpec::haar();
  const UniformGrid grid{{0.0, 1.0}, 1u << 12};
  Outcome o;
  CounterRng rng(seed, 0, StreamPurpose::Design);
  for (int t = 0; t < trials; ++t) {
    CoeffSet c;
    const int terms = 1 + static_cast<int>(rng.uniform() * 20);
    for (int i = 0; i < terms; ++i) {
      const int j = static_cast<int>(rng.uniform() * 7) - 1;
      const long k = j < 0 ? 0 : static_cast<long>(rng.uniform() * std::ldexp(1.0, j));
      c[{j, k}] = 2.0 * rng.uniform() - 1.0;
    }
    double c2 = 0.0;
    for (const auto& [l, v] : c) c2 += v * v;
    const double q = grid_l2_norm_squared(reconstruct(haar, c, grid), grid);
    if (std::abs(q - c2) > 1e-6) {
      o.fail(fmt("trial %g: %.10g vs %.10g", t, q, c2));
      break;
    }
  }
  return o;
}

/// int psi(x) x^p dx over the exact pieces, p = 0..4.
inline Outcome spline_vanishing_moments() {
  const PiecewiseConstant& psi = BasisSpec::spline15().psi();
  Outcome o;
  for (int p = 0; p <= 4; ++p) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < psi.pieces(); ++i) {
      const long double a = psi.breakpoints()[i], b = psi.breakpoints()[i + 1];
      acc += static_cast<long double>(psi.values()[i]) * (std::pow(b, p + 1) - std::pow(a, p + 1)) / (p + 1);
    }
    if (std::abs(static_cast<double>(acc)) >= 1e-12) o.fail(fmt("degree %g moment %.3g", p, static_cast<double>(acc)));
  }
  return o;
}

/// int phi_lambda phi~_mu over the analysis atom's pieces, composite Simpson on
/// a 2^-16 mesh of each piece.
inline double cross_integral(const BasisSpec& b, const LambdaIndex& analysis, const LambdaIndex& synthesis) {
  const PiecewiseConstant atom = analysis_atom(b, analysis);
  double acc = 0.0;
  for (std::size_t i = 0; i < atom.pieces(); ++i) {
    const double a = atom.breakpoints()[i], e = atom.breakpoints()[i + 1];
    const int m = std::max(2, static_cast<int>(std::ceil((e - a) * 65536.0)) & ~1);
    const double h = (e - a) / m;
    double s = synthesis_atom(b, synthesis, a) + synthesis_atom(b, synthesis, e);
    for (int q = 1; q < m; ++q) s += (q % 2 ? 4.0 : 2.0) * synthesis_atom(b, synthesis, a + q * h);
    acc += atom.values()[i] * s * h / 3.0;
  }
  return acc;
}

/// <phi_lambda, phi~_mu> = 1{lambda = mu} for scaling and wavelet indices at levels -1..2.
inline Outcome spline_biorthogonality(double tol = 1e-5) {
  const BasisSpec& b = BasisSpec::spline15();
  std::vector<LambdaIndex> idx;
  for (long k = -2; k <= 2; ++k) idx.push_back({-1, k});
  for (int j = 0; j <= 2; ++j)
    for (long k = -2; k <= 2; ++k) idx.push_back({j, k});
  Outcome o;
  double worst = 0.0;
  for (const auto& a : idx)
    for (const auto& s : idx) {
      const double v = cross_integral(b, a, s);
      const double err = std::abs(v - (a == s ? 1.0 : 0.0));
      worst = std::max(worst, err);
      if (err > tol)
        o.fail(fmt("(%g,%g)", a.j, static_cast<double>(a.k)) + fmt(" x (%g,%g)", s.j, static_cast<double>(s.k)) +
               fmt(" = %.3g", v));
    }
  o.note(fmt("max deviation %.3g", worst));
  return o;
}

// ------------------------------------------------------------------ estimator / baselines

/// eta(gamma*) = |beta^| on random tuples, with eta written out from its formula.
inline Outcome breakpoint_substitution(int trials = 10000, std::uint64_t seed = 16) {
  CounterRng rng(seed, 0, StreamPurpose::Design);
  Outcome o;
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const long n = 2 + static_cast<long>(rng.uniform() * 10000);
    const double beta = (rng.uniform() - 0.5) * std::pow(10.0, -3.0 * rng.uniform());
    const double vhat = rng.uniform() < 0.1 ? 0.0 : std::pow(10.0, -6.0 * rng.uniform()) / static_cast<double>(n);
    const double s = std::pow(2.0, 6.0 * rng.uniform());
    const double g = gamma_breakpoint(beta, vhat, n, s);
    const double ln = std::log(static_cast<double>(n));
    const double eta = std::sqrt(2.0 * g * ln * vhat) + g * ln * s / (3.0 * static_cast<double>(n));
    const double rel = std::abs(eta - std::abs(beta)) / std::max(std::abs(beta), 1e-300);
    worst = std::max(worst, rel);
  }
  if (worst > 1e-12) o.fail(fmt("max relative error %.3g", worst));
  o.note(fmt("max relative error %.3g", worst));
  return o;
}

/// Var 2 sqrt(N + 3/8) in [0.9, 1.1] for N ~ Poisson(m), m in {5, 10, 50}.
inline Outcome anscombe_variance(int draws = 100000, std::uint64_t seed = 17) {
  Outcome o;
  for (double m : {5.0, 10.0, 50.0}) {
    CounterRng rng(seed, static_cast<std::uint32_t>(m), StreamPurpose::Noise);
    std::vector<double> y;
    y.reserve(static_cast<std::size_t>(draws));
    for (int i = 0; i < draws; ++i) y.push_back(2.0 * std::sqrt(static_cast<double>(poisson_count(m, rng)) + 0.375));
    const double v = moments(y).var;
    if (v < 0.9 || v > 1.1) o.fail(fmt("mean %g: variance %.4f", m, v));
    o.note(fmt("m=%g var %.4f", m, v));
  }
  return o;
}

// ------------------------------------------------------------------ risk curve oracle

/// R_n(gamma) recomputed from scratch at one gamma: per-index atoms, exact
/// coefficients, the simulation threshold formula and the keep rule.
struct BruteForceRisk {
  std::vector<double> beta, beta_hat, v_hat, sup;
  long n = 2;
  double oracle = 0.0;

  BruteForceRisk(const BasisSpec& basis, const SignalSpec& f, const PointSample& s, Interval window, int j0) : n(s.n) {
    for (const LambdaIndex& l : active_indices(basis, window, j0)) {
      const PiecewiseConstant atom = analysis_atom(basis, l);
      double b = 0.0, v = 0.0;
      for (std::size_t i = 0; i < atom.pieces(); ++i) {
        const double m = f.mass(atom.breakpoints()[i], atom.breakpoints()[i + 1]);
        b += atom.values()[i] * m;
        v += atom.values()[i] * atom.values()[i] * m;
      }
      v /= static_cast<double>(n);
      double bh = 0.0, vh = 0.0;
      for (double t : s.points) {
        const double a = atom(t);
        bh += a;
        vh += a * a;
      }
      beta.push_back(b);
      beta_hat.push_back(bh / static_cast<double>(n));
      v_hat.push_back(vh / (static_cast<double>(n) * static_cast<double>(n)));
      sup.push_back(atom.sup_norm());
      oracle += std::min(b * b, v);
    }
  }

  [[nodiscard]] double operator()(double gamma) const {
    const double ln = std::log(static_cast<double>(n));
    long double acc = 0.0L;
    for (std::size_t i = 0; i < beta.size(); ++i) {
      const double eta = std::sqrt(2.0 * gamma * ln * v_hat[i]) + gamma * ln * sup[i] / (3.0 * static_cast<double>(n));
      const double kept = std::abs(beta_hat[i]) >= eta ? beta_hat[i] : 0.0;
      acc += static_cast<long double>((kept - beta[i]) * (kept - beta[i]));
    }
    return static_cast<double>(acc) / oracle;
  }
};

/// risk_curve against the brute-force recomputation on 10^3 gamma values for
/// random (signal, basis, n, seed) draws.
inline Outcome step_curve_oracle(int pairs = 100, std::uint64_t seed = 18, int gammas = 1000) {
  CounterRng design(seed, 0, StreamPurpose::Design);
  const auto names = SignalSpec::builtin_names();
  Outcome o;
  double worst = 0.0;
  for (int p = 0; p < pairs; ++p) {
    const SignalSpec f = SignalSpec::make(names[static_cast<std::size_t>(design.uniform() * names.size())]);
    const BasisSpec& basis = design.uniform() < 0.5 ? BasisSpec::haar() : BasisSpec::spline15();
    const long n = 64L << static_cast<int>(design.uniform() * 3);
    const int j0 = default_j0(n);
    const std::uint64_t s = design();
    CounterRng rng(s);
    const PointSample sample = sample_points(f, n, rng);
    const StepCurve curve = risk_curve(sample, f, basis, n, j0);
    const BruteForceRisk brute(basis, f, sample, estimation_window(f, sample), j0);
    const double top = 1.1 * (curve.breakpoints().empty() ? 1.0 : curve.breakpoints().back());
    for (int g = 0; g < gammas; ++g) {
      const double gamma = top * (g + 0.5) / gammas;
      const double a = curve(gamma), b = brute(gamma);
      const double rel = std::abs(a - b) / std::max(std::abs(b), 1e-300);
      worst = std::max(worst, rel);
      if (rel > 1e-12) {
        o.fail(f.name() + " " + basis.name() + fmt(" n=%g gamma=%.6g: %.15g", static_cast<double>(n), gamma, a) +
               fmt(" vs %.15g", b));
        return o;
      }
    }
  }
  o.note(fmt("max relative deviation %.3g", worst));
  return o;
}

}  // namespace poiwave::checks
