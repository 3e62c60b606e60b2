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

// poiwave command line driver.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "poiwave/poiwave.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct Options {
  poiwave::RunConfig cfg;
  std::string out;
  std::string coeffs_out;
  std::string variant = "simulation";
  std::string j0;
  std::string reps;
  bool gamma_set = false;
};

// Output file if --out was given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw poiwave::ConfigError("cannot write '" + path + "'");
    }
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }
  bool to_file() const { return file_ != nullptr; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--signal", o.cfg.signal, "Haar1, Haar2, Blocks, Comb, Gauss1, Gauss2, Beta0.5, Beta4, Bumps, gaussmix");
  cmd->add_option("--basis", o.cfg.basis, "haar or spline15");
  cmd->add_option("--n", o.cfg.n, "Scale n of the Poisson process");
  cmd->add_option("--j0", o.j0, "Finest level (default depends on the command)");
  cmd->add_option("--gamma", o.cfg.gamma, "Threshold parameter");
  cmd->add_option("--gamma-cap", o.cfg.gamma_cap, "Largest gamma considered for gamma_min");
  cmd->add_option("--reps", o.reps, "Replications");
  cmd->add_option("--seed", o.cfg.seed, "Random seed");
  cmd->add_option("--grid", o.cfg.grid, "Evaluation grid size");
  cmd->add_option("--bins", o.cfg.bins, "Bins for the Anscombe baselines (power of two)");
  cmd->add_option("--coarse-level", o.cfg.coarse_level, "Coarsest Haar level thresholded by the Anscombe baselines");
  cmd->add_option("--variant", o.variant, "simulation or theoretical");
  cmd->add_option("--d", o.cfg.d, "Distance between the two Gaussians of gaussmix");
  cmd->add_option("--threads", o.cfg.threads, "Worker threads (0 = all cores)");
  cmd->add_option("--out", o.out, "Output CSV path (default stdout)");
}

void finish_options(Options& o) {
  o.cfg.variant = poiwave::parse_variant(o.variant);
  if (!o.j0.empty()) o.cfg.j0 = std::stoi(o.j0);
  if (!o.reps.empty()) o.cfg.reps = std::stol(o.reps);
}

int signals_list(const Options& o) {
  Sink sink(o.out);
  poiwave::csv::Writer w(sink.os());
  w.comment("poiwave signals list").header({"name", "support_lo", "support_hi", "sup_norm", "l1_norm"});
  for (auto id : poiwave::SignalSpec::builtin_names()) {
    const auto s = poiwave::SignalSpec::make(id);
    w.row(s.name(), s.support().lo, s.support().hi, s.sup_norm(), s.l1_norm());
  }
  return 0;
}

int reconstruct(const Options& o) {
  if (o.cfg.reps && *o.cfg.reps > 1) std::cerr << "warning: reconstruct uses a single replication, ignoring --reps\n";
  const auto r = poiwave::run_reconstruct(o.cfg);
  const std::string config = o.cfg.describe("reconstruct");
  Sink sink(o.out);
  poiwave::csv::Writer w(sink.os());
  w.comment(config).header({"x", "f_true", "f_estimate"});
  for (std::size_t i = 0; i < r.grid.size; ++i) w.row(r.grid.x(i), r.truth[i], r.estimate[i]);
  if (!o.coeffs_out.empty()) {
    std::ofstream c(o.coeffs_out);
    if (!c) throw poiwave::ConfigError("cannot write '" + o.coeffs_out + "'");
    poiwave::csv::write_coeffs(c, r.kept, config);
  }
  return 0;
}

int calibrate(const Options& o) {
  const auto r = poiwave::run_calibrate(o.cfg);
  Sink sink(o.out);
  poiwave::csv::write_step_curve(sink.os(), r.mean_curve, o.cfg.describe("calibrate"));
  std::ostream& summary = sink.to_file() ? std::cout : std::cerr;
  summary << "n=" << o.cfg.n << " j0=" << r.j0 << " reps=" << r.reps << " gamma_min=" << r.gamma_min
          << " R(gamma_min)=" << r.value_at_gamma_min << " R(1)=" << r.value_at_one << '\n';
  return 0;
}

int compare(const Options& o) {
  const auto rows = poiwave::run_compare(o.cfg);
  Sink sink(o.out);
  poiwave::csv::Writer w(sink.os());
  w.comment(o.cfg.describe("compare")).header({"rep", "method", "mse"});
  for (const auto& r : rows) w.row(r.rep, r.method, r.mse);
  return 0;
}

int check_bound(const Options& o) {
  const auto b = poiwave::run_check_bound(o.cfg);
  Sink sink(o.out);
  poiwave::csv::Writer w(sink.os());
  w.comment(o.cfg.describe("check-bound")).header({"reps", "mean_risk", "std_error", "oracle", "bound", "pass"});
  w.row(b.risk.reps, b.risk.mean, b.risk.std_error, b.risk.oracle, b.bound, b.pass ? 1 : 0);
  return b.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Poisson intensity estimation by data-driven wavelet thresholding"};
  app.require_subcommand(1);

  Options list_opts;
  auto* signals = app.add_subcommand("signals", "Built-in signals");
  auto* list = signals->add_subcommand("list", "Print name, support, sup norm and l1 norm as CSV");
  list->add_option("--out", list_opts.out, "Output CSV path (default stdout)");
  signals->require_subcommand(1);

  Options rec, cal, cmp, chk;
  auto* c_rec = app.add_subcommand("reconstruct", "Estimate one sample and evaluate on a grid");
  add_common(c_rec, rec);
  c_rec->add_option("--coeffs-out", rec.coeffs_out, "Also write kept coefficients (j,k,value)");

  auto* c_cal = app.add_subcommand("calibrate", "Average oracle-ratio step curve over replications");
  add_common(c_cal, cal);

  auto* c_cmp = app.add_subcommand("compare", "Per-replication L2 risk of several estimators");
  add_common(c_cmp, cmp);
  c_cmp->add_option("--methods", cmp.cfg.methods, "rand-thresh-haar, rand-thresh-spline, anscombe-uni, anscombe-uni-ti")
      ->delimiter(',');
  std::vector<std::string> externals;
  c_cmp->add_option("--external", externals, "NAME=PATH of a CSV with columns rep,x,estimate");

  auto* c_chk = app.add_subcommand("check-bound", "Compare mean coefficient risk with 12 ln n (oracle + 1/n)");
  add_common(c_chk, chk);
  chk.variant = "theoretical";
  chk.cfg.gamma = 1.0 + std::sqrt(2.0);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (list->parsed()) return signals_list(list_opts);
    if (c_rec->parsed()) {
      finish_options(rec);
      return reconstruct(rec);
    }
    if (c_cal->parsed()) {
      finish_options(cal);
      return calibrate(cal);
    }
    if (c_cmp->parsed()) {
      finish_options(cmp);
      for (const auto& e : externals) {
        const auto eq = e.find('=');
        if (eq == std::string::npos || eq == 0) throw poiwave::ConfigError("--external expects NAME=PATH");
        cmp.cfg.externals[e.substr(0, eq)] = e.substr(eq + 1);
      }
      return compare(cmp);
    }
    if (c_chk->parsed()) {
      finish_options(chk);
      return check_bound(chk);
    }
  } catch (const poiwave::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const poiwave::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitConfig;
}
