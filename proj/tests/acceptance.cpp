// Copyright 2026 The gbsopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Release acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero when any criterion fails.

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gbsopt/ensembles.hpp"
#include "gbsopt/errors.hpp"
#include "gbsopt/experiment.hpp"
#include "gbsopt/gbs.hpp"
#include "gbsopt/hafnian.hpp"
#include "gbsopt/optimizers.hpp"
#include "gbsopt/proportional.hpp"
#include "test_oracles.hpp"

using namespace gbsopt;
namespace fs = std::filesystem;

namespace {

const fs::path kDataDir = GBSOPT_DATA_DIR;
const fs::path kCli = GBSOPT_CLI_PATH;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Outcome hafnian_equivalence() {
  RandomStream rng(1001);
  double worst = 0.0;
  for (std::size_t dim = 2; dim <= 8; dim += 2) {
    for (int t = 0; t < 200; ++t) {
      const auto x = gaussian_symmetric(dim, 1.0, rng);
      const Complex a = hafnian(x);
      const Complex b = hafnian_definition(x);
      worst = std::max(worst, std::abs(a - b) / std::abs(b));
    }
  }
  return {worst < 1e-12, "max relative error " + fmt("%.3g", worst)};
}

Outcome complete_graph() {
  bool ok = true;
  std::string detail;
  for (std::size_t m = 1; m <= 6; ++m) {
    const std::size_t n = 2 * m;
    std::vector<Complex> e(n * n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      e[i * n + i] = 0.0;
    }
    const Complex h = hafnian(ComplexMatrix(n, e, true));
    const auto expected = static_cast<double>(double_factorial(static_cast<int>(n) - 1));
    ok = ok && h.real() == expected && h.imag() == 0.0;
    detail += (m > 1 ? " " : "") + std::to_string(static_cast<long long>(h.real()));
  }
  return {ok, "Haf(K_2m), m=1..6: " + detail};
}

Outcome cycle_sum() {
  bool ok = true;
  std::string detail;
  for (std::size_t m = 1; m <= 6; ++m) {
    const auto s = pmp_cycle_sum(m).sum;
    ok = ok && s == double_factorial(static_cast<int>(2 * m));
    detail += (m > 1 ? " " : "") + std::to_string(s);
  }
  return {ok, "f(m), m=1..6: " + detail};
}

Outcome moments() {
  RandomStream rng(1004);
  bool ok = true;
  std::string detail;
  for (int k : {2, 4, 6}) {
    const auto m = haf_moments_mc(k, 100000, rng);
    const double e2 = static_cast<double>(double_factorial(k - 1));
    double e4 = 1.0;
    for (int i = 2; i <= k; ++i) {
      e4 *= i;
    }
    const double z2 = (m.mean2 - e2) / m.stderr2;
    const double z4 = (m.mean4 - e4) / m.stderr4;
    ok = ok && std::abs(z2) < 4.0 && std::abs(z4) < 4.0;
    detail += " k=" + std::to_string(k) + ":" + fmt("%+.2f", z2) + "/" + fmt("%+.2f", z4);
  }
  return {ok, "z-scores (2nd/4th)" + detail};
}

// An exact sampler's TV over 10^5 draws on 70 patterns averages about 0.009
// and crosses 0.01 in roughly one batch out of seven, so a single batch
// cannot separate bias from noise. The criterion uses the mean TV of 100
// independent 10^5-draw batches (standard error near 1e-4) and adds a
// chi-square fit on the pooled draws.
Outcome conditional_law() {
  RandomStream rng(1005);
  const auto b = coe_matrix({1.0, 8}, rng);
  const auto dist = build_conditional_distribution(b, 4, 1.0);
  const auto p = dist.probabilities();
  double total = 0.0;
  for (double x : p) {
    total += x;
  }
  constexpr std::size_t kDraws = 100000;
  constexpr std::size_t kBatches = 100;
  std::vector<double> pooled(p.size(), 0.0);
  std::vector<double> tvs;
  for (std::size_t batch = 0; batch < kBatches; ++batch) {
    RandomStream draw_rng = RandomStream(2005).substream(batch + 1);
    std::vector<double> counts(p.size(), 0.0);
    for (std::size_t i = 0; i < kDraws; ++i) {
      counts[dist.sample_index(draw_rng)] += 1.0;
    }
    double tv = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      tv += std::abs(counts[i] / kDraws - p[i]);
      pooled[i] += counts[i];
    }
    tvs.push_back(0.5 * tv);
  }
  const double first_tv = tvs.front();
  double mean_tv = 0.0;
  std::size_t over = 0;
  for (double tv : tvs) {
    mean_tv += tv / kBatches;
    over += tv >= 0.01 ? 1 : 0;
  }

  double chi2 = 0.0;
  std::size_t cells = 0;
  const double n_total = static_cast<double>(kDraws * kBatches);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) {
      const double expected = n_total * p[i];
      chi2 += (pooled[i] - expected) * (pooled[i] - expected) / expected;
      ++cells;
    }
  }
  const boost::math::chi_squared chi_dist(static_cast<double>(cells - 1));
  const double chi_p = boost::math::cdf(boost::math::complement(chi_dist, chi2));

  const bool ok = std::abs(total - 1.0) < 1e-10 && mean_tv < 0.01 && chi_p > 1e-3;
  return {ok, "normalization error " + fmt("%.2g", std::abs(total - 1.0)) + ", mean TV per 10^5 draws " +
                  fmt("%.5f", mean_tv) + " over 100 batches (first " + fmt("%.4f", first_tv) + ", " +
                  std::to_string(over) + " batches >= 0.01), chi-square p " + fmt("%.3f", chi_p)};
}

Outcome analytic_theory() {
  double worst = 0.0;
  for (double lambda : {1.0, 2.0, 4.0, 8.0}) {
    for (std::size_t kappa = 1; kappa <= 100; ++kappa) {
      const double q = test::expected_max_quadrature(lambda, kappa);
      worst = std::max(worst, std::abs(prop::expected_max_proportional({lambda, kappa}) - q) / q);
    }
  }
  bool uniform_exact = true;
  for (std::size_t kappa = 1; kappa <= 100; ++kappa) {
    uniform_exact = uniform_exact && prop::expected_max_uniform(kappa) ==
                                         static_cast<double>(kappa) / static_cast<double>(kappa + 1);
  }
  bool dominance = true;
  const auto fig2 = emit_figure2({1, 2, 4, 8}, 100);
  for (const auto& row : fig2.rows) {
    for (std::size_t c = 2; c < row.size(); ++c) {
      dominance = dominance && row[c] >= row[1] && row[c] > row[c - 1];
    }
  }
  return {worst < 1e-8 && uniform_exact && dominance,
          "quadrature rel error " + fmt("%.2g", worst) + (uniform_exact ? ", uniform exact" : ", uniform MISMATCH") +
              (dominance ? ", alpha dominance holds" : ", alpha dominance FAILS")};
}

Outcome ratio_R() {
  double smallest = 1e300;
  for (std::size_t k = 2; k <= 20; k += 2) {
    smallest = std::min(smallest, prop::analytic_ratio_R(k * k, k));
  }
  const double exact = test::exact_ratio_R(4, 2);
  const bool ok = smallest > 1.0 && exact == 1.5 && std::abs(prop::analytic_ratio_R(4, 2) - exact) < 1e-14;
  return {ok, "min R(k^2,k) over k=2..20 " + fmt("%.6g", smallest) + ", R(4,2) " +
                  fmt("%.15g", prop::analytic_ratio_R(4, 2))};
}

std::vector<double> final_values(const FigureDataset& ds) {
  std::vector<double> v;
  for (const auto& run : ds.runs) {
    v.push_back(run["best_value"].get<double>());
  }
  return v;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) {
    s += x;
  }
  return s / static_cast<double>(v.size());
}

/// One-sided paired t-test of mean(a - b) > 0.
double paired_p_value(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = a[i] - b[i];
  }
  const double m = mean_of(d);
  double ss = 0.0;
  for (double x : d) {
    ss += (x - m) * (x - m);
  }
  const double se = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
  const boost::math::students_t dist(static_cast<double>(n - 1));
  return boost::math::cdf(boost::math::complement(dist, m / se));
}

Outcome figure4_dominance() {
  bool ok = true;
  std::ostringstream detail;
  for (int seed = 101; seed <= 105; ++seed) {
    ExperimentConfig c;
    c.budget = 200;
    c.repetitions = 400;
    c.seed = static_cast<std::uint64_t>(seed);
    c.save_runs = true;
    c.matrix_path = (kDataDir / ("coe_n12_seed" + std::to_string(seed) + ".json")).string();
    std::vector<double> gbs[3], uni[3];
    const char* algorithms[3] = {"random-search", "annealing", "greedy"};
    for (int a = 0; a < 3; ++a) {
      c.algorithm = algorithms[a];
      c.sampler = c.tweaker = "gbs";
      gbs[a] = final_values(run_experiment(c));
      c.sampler = c.tweaker = "uniform";
      uni[a] = final_values(run_experiment(c));
    }
    const double p = paired_p_value(gbs[0], uni[0]);
    const bool rs = p < 0.01;
    const bool sa = mean_of(gbs[1]) >= mean_of(uni[1]);
    const bool gr = mean_of(gbs[2]) >= mean_of(uni[2]);
    ok = ok && rs && sa && gr;
    detail << " [" << seed << ": rs p=" << fmt("%.1e", p) << (sa ? " sa>=" : " sa<") << (gr ? " gr>=" : " gr<") << "]";
  }
  return {ok, "per instance" + detail.str()};
}

Outcome max_clique() {
  RandomStream rng(1009);
  std::size_t agree = 0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + rng.below(11);
    const double density = 0.2 + 0.7 * rng.uniform();
    std::vector<Complex> e(n * n, 0.0);
    std::vector<std::uint32_t> adj(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (rng.uniform() < density) {
          e[i * n + j] = e[j * n + i] = 1.0;
          adj[i] |= 1u << j;
          adj[j] |= 1u << i;
        }
      }
    }
    agree += max_clique_via_maxhaf(ComplexMatrix(n, e, true)) == test::brute_force_even_clique(adj) ? 1 : 0;
  }
  return {agree == 50, std::to_string(agree) + "/50 graphs agree"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args, const fs::path& cwd) {
  const std::string cmd = "cd '" + cwd.string() + "' && '" + kCli.string() + "' " + args + " > stdout.txt 2> stderr.txt";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome cli_determinism() {
  const fs::path root = fs::temp_directory_path() / "gbsopt_acceptance_cli";
  fs::remove_all(root);
  const std::string data = kDataDir.string();
  {
    fs::create_directories(root);
    std::ofstream(root / "config.json")
        << R"({"algorithm": "annealing", "sampler": "gbs", "budget": 60, "repetitions": 8, "seed": 7})";
  }
  const std::vector<std::string> commands = {
      "haf '" + data + "/k4.json'",
      "gen-matrix --n 10 --r 0.8 --seed 42 --out m.json",
      "dist m.json --k 4 --r 0.8 --out dist.csv",
      "sample dist.csv --draws 500 --seed 3 --out draws.csv",
      "sample m.json --k 4 --draws 500 --seed 3",
      "optimize ../config.json --output-dir opt",
      "figures 1 --output-dir fig",
      "figures 2 --kappa-max 30 --output-dir fig",
      "figures 3 --output-dir fig",
      "figures 4 --config ../config.json --output-dir fig",
      "clique '" + data + "/k4_plus_isolated.json'",
      "moments --k 4 --trials 2000 --seed 5",
  };
  std::size_t files = 0;
  for (const char* run : {"a", "b"}) {
    const fs::path dir = root / run;
    fs::create_directories(dir);
    for (std::size_t i = 0; i < commands.size(); ++i) {
      if (run_cli(commands[i], dir) != 0) {
        return {false, "command failed: " + commands[i]};
      }
      fs::rename(dir / "stdout.txt", dir / ("stdout_" + std::to_string(i) + ".txt"));
    }
  }
  for (const auto& entry : fs::recursive_directory_iterator(root / "a")) {
    if (!entry.is_regular_file()) {
      continue;
    }
    const fs::path other = root / "b" / fs::relative(entry.path(), root / "a");
    if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
      return {false, "differs: " + fs::relative(entry.path(), root / "a").string()};
    }
    ++files;
  }
  return {files > commands.size(), std::to_string(files) + " files byte-identical across two runs of " +
                                       std::to_string(commands.size()) + " commands"};
}

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;
  std::function<Outcome()> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "hafnian recursion equals definition sum", 10, hafnian_equivalence},
      {2, "complete-graph hafnian identity", 0, complete_graph},
      {3, "perfect-matching cycle sum", 30, cycle_sum},
      {4, "Gaussian hafnian moments", 60, moments},
      {5, "conditional GBS law and sampler", 0, conditional_law},
      {6, "best-of-kappa analytic theory", 0, analytic_theory},
      {7, "ratio R(k^2, k)", 0, ratio_R},
      {8, "optimizer dominance on archived instances", 600, figure4_dominance},
      {9, "max-clique reduction", 60, max_clique},
      {10, "CLI determinism", 0, cli_determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_s > 0 && secs > c.time_limit_s) {
      o.pass = false;
      o.detail += " (over the " + fmt("%.0f", c.time_limit_s) + " s limit)";
    }
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.name << " -- " << o.detail
              << " [" << fmt("%.2f", secs) << " s]" << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
