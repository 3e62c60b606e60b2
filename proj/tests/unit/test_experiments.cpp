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

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "poiwave/experiments.hpp"

using namespace poiwave;
using Catch::Approx;

TEST_CASE("parallel_for is order independent") {
  std::vector<double> a(1000), b(1000);
  parallel_for(1000, [&](std::size_t i) { a[i] = std::sqrt(static_cast<double>(i)); }, 1);
  parallel_for(1000, [&](std::size_t i) { b[i] = std::sqrt(static_cast<double>(i)); }, 4);
  CHECK(a == b);
  CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) { if (i == 7) throw NumericError("x"); }, 3), NumericError);
}

TEST_CASE("calibration does not depend on thread count") {
  RunConfig cfg;
  cfg.signal = "Gauss1";
  cfg.n = 256;
  cfg.reps = 20;
  cfg.threads = 1;
  const auto one = run_calibrate(cfg);
  cfg.threads = 3;
  const auto three = run_calibrate(cfg);
  CHECK(one.mean_curve.breakpoints() == three.mean_curve.breakpoints());
  CHECK(one.mean_curve.values() == three.mean_curve.values());
}

TEST_CASE("single replication equals its risk curve") {
  RunConfig cfg;
  cfg.signal = "Haar2";
  cfg.basis = "spline15";
  cfg.n = 512;
  cfg.reps = 1;
  cfg.seed = 77;
  const auto r = run_calibrate(cfg);
  const SignalSpec f = SignalSpec::make(SignalName::Haar2);
  const StepCurve c = risk_curve(replicate_sample(f, 512, 77, 0), f, BasisSpec::spline15(), 512, 9);
  REQUIRE(r.mean_curve.pieces() == c.pieces());
  for (std::size_t i = 0; i < c.pieces(); ++i) REQUIRE(r.mean_curve.values()[i] == Approx(c.values()[i]).epsilon(1e-13));
}

TEST_CASE("reconstruct recovers Haar1") {
  RunConfig cfg;
  cfg.signal = "Haar1";
  cfg.n = 1024;
  std::vector<double> fraction;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    cfg.seed = seed;
    const auto r = run_reconstruct(cfg);
    std::size_t close = 0;
    for (std::size_t i = 0; i < r.grid.size; ++i) close += std::abs(r.estimate[i] - 1.0) <= 0.15 ? 1 : 0;
    fraction.push_back(static_cast<double>(close) / static_cast<double>(r.grid.size));
  }
  std::sort(fraction.begin(), fraction.end());
  CHECK(0.5 * (fraction[9] + fraction[10]) >= 0.95);
}

TEST_CASE("reconstruct is deterministic") {
  RunConfig cfg;
  cfg.signal = "Bumps";
  cfg.basis = "spline15";
  cfg.grid = 512;
  const auto a = run_reconstruct(cfg), b = run_reconstruct(cfg);
  CHECK(a.estimate == b.estimate);
  CHECK(a.kept == b.kept);
}

TEST_CASE("compare rows and external estimates") {
  const std::string path = "compare_external_test.csv";
  {
    std::ofstream out(path);
    out << "# flat guess\nrep,x,estimate\n";
    for (int rep = 0; rep < 2; ++rep)
      for (int i = 0; i <= 10; ++i) out << rep << ',' << i / 10.0 << ",1\n";
  }
  RunConfig cfg;
  cfg.signal = "Haar1";
  cfg.n = 256;
  cfg.reps = 2;
  cfg.methods = {"anscombe-uni", "flat"};
  cfg.externals = {{"flat", path}};
  const auto rows = run_compare(cfg);
  CHECK(rows.size() == 4);
  for (const auto& r : rows)
    if (r.method == "flat") CHECK(r.mse == Approx(0.0).margin(1e-3));
  cfg.externals.clear();
  CHECK_THROWS_AS(run_compare(cfg), ConfigError);
  std::remove(path.c_str());

  RunConfig single;
  single.methods = {"rand-thresh-haar"};
  single.reps = 1;
  CHECK(run_compare(single).size() == 1);
}

TEST_CASE("config validation") {
  RunConfig cfg;
  cfg.n = 1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.n = 64;
  cfg.basis = "daubechies";
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.basis = "haar";
  cfg.bins = 100;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.bins = 0;
  cfg.coarse_level = -1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("csv formats") {
  std::ostringstream os;
  csv::write_step_curve(os, StepCurve({0.5}, {2.0, 1.0}), "cfg");
  CHECK(os.str() == "# cfg\ngamma_from,value\n0,2\n0.5,1\n");
  std::ostringstream co;
  csv::write_coeffs(co, {{{-1, 0}, 0.25}, {{2, 3}, -1.0}}, "cfg");
  CHECK(co.str() == "# cfg\nj,k,value\n-1,0,0.25\n2,3,-1\n");
  std::istringstream in(co.str());
  const auto t = csv::read(in);
  CHECK(t.columns == std::vector<std::string>{"j", "k", "value"});
  CHECK(t.rows.size() == 2);
  CHECK(csv::to_double(t.rows[0][2]) == 0.25);
  CHECK(csv::number(0.1) == "0.10000000000000001");
}
