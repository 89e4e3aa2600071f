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

// gbsopt: command line front end for the library.
//
// Exit codes: 0 success, 1 unexpected failure, 2 invalid input,
// 3 resource guard, 4 degenerate distribution. Every failure prints one
// JSON object on stderr.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gbsopt/ensembles.hpp"
#include "gbsopt/errors.hpp"
#include "gbsopt/experiment.hpp"
#include "gbsopt/format.hpp"
#include "gbsopt/gbs.hpp"
#include "gbsopt/hafnian.hpp"
#include "gbsopt/matrix.hpp"
#include "gbsopt/optimizers.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kInvalid = 2,
  kResource = 3,
  kDegenerate = 4,
};

int report(const char* kind, int code, const std::string& message) {
  json err = {{"error", kind}, {"message", message}, {"exit_code", code}};
  std::cerr << err.dump() << "\n";
  return code;
}

std::string format_complex(gbsopt::Complex z) {
  const double im = z.imag();
  return gbsopt::format_double(z.real()) + (std::signbit(im) ? "-" : "+") +
         gbsopt::format_double(std::abs(im)) + "i";
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw gbsopt::InvalidArgument("cannot write " + path.string());
  }
  return out;
}

void print_written(const fs::path& csv) {
  json j = {{"csv", csv.string()}};
  auto meta = csv;
  j["meta"] = meta.replace_extension(".meta.json").string();
  std::cout << j.dump() << "\n";
}

gbsopt::ConditionalGBSDistribution load_distribution(const std::string& input, std::optional<std::size_t> k,
                                                     double r) {
  if (fs::path(input).extension() == ".csv") {
    std::ifstream in(input, std::ios::binary);
    if (!in) {
      throw gbsopt::InvalidArgument("cannot open " + input);
    }
    return gbsopt::read_distribution_csv(in);
  }
  if (!k) {
    throw gbsopt::InvalidArgument("--k is required when sampling from a matrix");
  }
  return gbsopt::build_conditional_distribution(gbsopt::load_matrix(input), *k, r);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian boson sampling assisted Max-Haf optimization"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "gbsopt 0.1.0");

  // haf
  auto* haf_cmd = app.add_subcommand("haf", "Hafnian of a matrix file");
  std::string haf_path;
  std::string haf_method = "recursive";
  haf_cmd->add_option("matrix", haf_path, "Matrix JSON")->required();
  haf_cmd->add_option("--method", haf_method, "recursive or definition")
      ->check(CLI::IsMember({"recursive", "definition"}));

  // dist
  auto* dist_cmd = app.add_subcommand("dist", "Conditional GBS distribution table");
  std::string dist_path;
  std::size_t dist_k = 0;
  double dist_r = std::numeric_limits<double>::quiet_NaN();
  std::string dist_out;
  dist_cmd->add_option("matrix", dist_path, "Matrix JSON")->required();
  dist_cmd->add_option("--k", dist_k, "Photon number (even)")->required();
  dist_cmd->add_option("--r", dist_r, "Squeezing parameter, for q and p_valid");
  dist_cmd->add_option("--out", dist_out, "CSV path (default stdout)");

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "Draw patterns from a distribution CSV or a matrix");
  std::string sample_input;
  std::size_t sample_draws = 1;
  std::uint64_t sample_seed = 0;
  std::optional<std::size_t> sample_k;
  double sample_r = std::numeric_limits<double>::quiet_NaN();
  std::string sample_out;
  sample_cmd->add_option("input", sample_input, "Distribution CSV or matrix JSON")->required();
  sample_cmd->add_option("--draws", sample_draws, "Number of draws")->required();
  sample_cmd->add_option("--seed", sample_seed, "Seed")->required();
  sample_cmd->add_option("--k", sample_k, "Photon number when the input is a matrix");
  sample_cmd->add_option("--r", sample_r, "Squeezing parameter when the input is a matrix");
  sample_cmd->add_option("--out", sample_out, "CSV path (default stdout)");

  // optimize
  auto* opt_cmd = app.add_subcommand("optimize", "Run an optimizer experiment from a config");
  std::string opt_config;
  bool opt_paper = false;
  std::optional<std::string> opt_dir;
  opt_cmd->add_option("config", opt_config, "Config JSON")->required();
  opt_cmd->add_flag("--paper-scale", opt_paper, "n=30, k=10, ell=6, t0=3e-5, 1000 evaluations, 400 repetitions");
  opt_cmd->add_option("--output-dir", opt_dir, "Output directory");

  // figures
  auto* fig_cmd = app.add_subcommand("figures", "Emit figure data as CSV");
  int fig_id = 0;
  std::vector<double> fig_lambdas = {1.0, 2.0, 4.0, 8.0};
  std::size_t fig_grid = 100;
  std::size_t fig_kappa_max = 100;
  std::size_t fig_k_max = 20;
  std::string fig_config;
  bool fig_paper = false;
  std::optional<std::uint64_t> fig_seed;
  std::optional<std::size_t> fig_reps;
  std::optional<std::string> fig_dir;
  fig_cmd->add_option("figure", fig_id, "Figure number")->required()->check(CLI::Range(1, 4));
  fig_cmd->add_option("--lambdas", fig_lambdas, "Lambda values (figures 1, 2)")->delimiter(',');
  fig_cmd->add_option("--grid", fig_grid, "Grid points on (0, 1] (figure 1)");
  fig_cmd->add_option("--kappa-max", fig_kappa_max, "Largest kappa (figure 2)");
  fig_cmd->add_option("--k-max", fig_k_max, "Largest even k (figure 3)");
  fig_cmd->add_option("--config", fig_config, "Config JSON (figure 4)");
  fig_cmd->add_flag("--paper-scale", fig_paper, "Paper protocol (figure 4)");
  fig_cmd->add_option("--seed", fig_seed, "Seed override (figure 4)");
  fig_cmd->add_option("--repetitions", fig_reps, "Repetition override (figure 4)");
  fig_cmd->add_option("--output-dir", fig_dir, "Output directory");

  // clique
  auto* clique_cmd = app.add_subcommand("clique", "Largest even clique via Max-Haf");
  std::string clique_path;
  clique_cmd->add_option("matrix", clique_path, "Adjacency matrix JSON")->required();

  // gen-matrix
  auto* gen_cmd = app.add_subcommand("gen-matrix", "Generate a random instance");
  std::size_t gen_n = 12;
  double gen_r = 1.0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  std::string gen_kind = "coe";
  double gen_sigma = 1.0;
  gen_cmd->add_option("--n", gen_n, "Dimension")->required();
  gen_cmd->add_option("--r", gen_r, "Squeezing parameter (coe)");
  gen_cmd->add_option("--seed", gen_seed, "Seed")->required();
  gen_cmd->add_option("--out", gen_out, "Output JSON path")->required();
  gen_cmd->add_option("--kind", gen_kind, "coe, haar or gaussian")
      ->check(CLI::IsMember({"coe", "haar", "gaussian"}));
  gen_cmd->add_option("--sigma", gen_sigma, "Entry scale (gaussian)");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "Check a CSV against its recorded content hash");
  std::string verify_path;
  verify_cmd->add_option("csv", verify_path, "CSV file")->required();

  // moments
  auto* mom_cmd = app.add_subcommand("moments", "Monte-Carlo Hafnian moments of Gaussian matrices");
  int mom_k = 4;
  std::size_t mom_trials = 100000;
  std::uint64_t mom_seed = 0;
  mom_cmd->add_option("--k", mom_k, "Even dimension")->required();
  mom_cmd->add_option("--trials", mom_trials, "Number of matrices");
  mom_cmd->add_option("--seed", mom_seed, "Seed");

  // cycle-sum
  auto* cyc_cmd = app.add_subcommand("cycle-sum", "Sum of 2^cycles over perfect matchings");
  std::size_t cyc_m = 3;
  cyc_cmd->add_option("--m", cyc_m, "Half size")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);
    }
    return report("usage", kInvalid, e.what());
  }

  try {
    if (*haf_cmd) {
      const auto b = gbsopt::load_matrix(haf_path);
      const auto h = haf_method == "recursive" ? gbsopt::hafnian(b) : gbsopt::hafnian_definition(b);
      std::cout << format_complex(h) << "\n";
    } else if (*dist_cmd) {
      const auto dist = gbsopt::build_conditional_distribution(gbsopt::load_matrix(dist_path), dist_k, dist_r);
      if (dist_out.empty()) {
        gbsopt::write_distribution_csv(dist, std::cout);
      } else {
        auto out = open_output(dist_out);
        gbsopt::write_distribution_csv(dist, out);
        const auto diag = gbsopt::gbs_advantage_diagnostics(dist);
        json j = {{"csv", dist_out},
                  {"n", dist.n()},
                  {"k", dist.k()},
                  {"patterns", dist.size()},
                  {"total_weight", dist.total_weight()},
                  {"mu_uniform", diag.mu_u},
                  {"mu_gbs", diag.mu_gbs},
                  {"ratio", diag.ratio},
                  {"q", dist.q()},
                  {"p_valid", dist.p_valid()}};
        std::cout << j.dump() << "\n";
      }
    } else if (*sample_cmd) {
      const auto dist = load_distribution(sample_input, sample_k, sample_r);
      gbsopt::RandomStream rng(sample_seed);
      std::ostringstream text;
      text << "draw,index,pattern\n";
      for (std::size_t d = 0; d < sample_draws; ++d) {
        const std::size_t idx = dist.sample_index(rng);
        text << d << ',' << idx << ',' << dist.pattern(idx).bitstring() << '\n';
      }
      if (sample_out.empty()) {
        std::cout << text.str();
      } else {
        open_output(sample_out) << text.str();
      }
    } else if (*opt_cmd) {
      auto config = gbsopt::ExperimentConfig::load(opt_config);
      if (opt_paper) {
        config.apply_paper_scale();
      }
      const auto ds = gbsopt::run_experiment(config);
      print_written(gbsopt::write_dataset(ds, gbsopt::resolve_output_dir(opt_dir, config.output_dir)));
    } else if (*fig_cmd) {
      gbsopt::FigureDataset ds;
      std::optional<std::string> config_dir;
      if (fig_id == 1) {
        ds = gbsopt::emit_figure1(fig_lambdas, fig_grid);
      } else if (fig_id == 2) {
        ds = gbsopt::emit_figure2(fig_lambdas, fig_kappa_max);
      } else if (fig_id == 3) {
        ds = gbsopt::emit_figure3(fig_k_max);
      } else {
        auto config = fig_config.empty() ? gbsopt::ExperimentConfig{} : gbsopt::ExperimentConfig::load(fig_config);
        if (fig_paper) {
          config.apply_paper_scale();
        }
        if (fig_seed) {
          config.seed = *fig_seed;
        }
        if (fig_reps) {
          config.repetitions = *fig_reps;
        }
        config_dir = config.output_dir;
        ds = gbsopt::emit_figure4(config);
      }
      print_written(gbsopt::write_dataset(ds, gbsopt::resolve_output_dir(fig_dir, config_dir)));
    } else if (*clique_cmd) {
      const std::size_t k = gbsopt::max_clique_via_maxhaf(gbsopt::load_matrix(clique_path));
      std::cout << json{{"max_even_clique", k}}.dump() << "\n";
    } else if (*gen_cmd) {
      gbsopt::RandomStream rng(gen_seed);
      gbsopt::ComplexMatrix m;
      if (gen_kind == "coe") {
        m = gbsopt::coe_matrix(gbsopt::SqueezingSpec{gen_r, gen_n}, rng);
      } else if (gen_kind == "haar") {
        m = gbsopt::haar_unitary(gen_n, rng);
      } else {
        m = gbsopt::gaussian_symmetric(gen_n, gen_sigma, rng);
      }
      const fs::path out(gen_out);
      if (out.has_parent_path()) {
        fs::create_directories(out.parent_path());
      }
      gbsopt::save_matrix(m, out);
    } else if (*verify_cmd) {
      const auto r = gbsopt::verify_dataset(verify_path);
      std::cout << json{{"ok", r.ok}, {"expected", r.expected}, {"actual", r.actual}}.dump() << "\n";
      if (!r.ok) {
        return report("hash_mismatch", kFailure, "content hash of " + verify_path + " does not match");
      }
    } else if (*mom_cmd) {
      gbsopt::RandomStream rng(mom_seed);
      const auto est = gbsopt::haf_moments_mc(mom_k, mom_trials, rng);
      json j = gbsopt::to_json(est);
      j["expected_mean2"] = gbsopt::double_factorial(mom_k - 1);
      double kfact = 1.0;
      for (int i = 2; i <= mom_k; ++i) {
        kfact *= i;
      }
      j["expected_mean4"] = kfact;
      std::cout << j.dump() << "\n";
    } else if (*cyc_cmd) {
      const auto res = gbsopt::pmp_cycle_sum(cyc_m);
      std::cout << json{{"m", cyc_m}, {"sum", res.sum}, {"expected", gbsopt::double_factorial(2 * static_cast<int>(cyc_m))}}.dump()
                << "\n";
    }
  } catch (const gbsopt::InvalidArgument& e) {
    return report("invalid_argument", kInvalid, e.what());
  } catch (const gbsopt::ResourceLimit& e) {
    return report("resource_limit", kResource, e.what());
  } catch (const gbsopt::DegenerateDistribution& e) {
    return report("degenerate_distribution", kDegenerate, e.what());
  } catch (const json::exception& e) {
    return report("invalid_argument", kInvalid, e.what());
  } catch (const std::exception& e) {
    return report("internal", kFailure, e.what());
  }
  return kOk;
}
