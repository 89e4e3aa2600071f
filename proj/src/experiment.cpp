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

#include "gbsopt/experiment.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "gbsopt/ensembles.hpp"
#include "gbsopt/errors.hpp"
#include "gbsopt/format.hpp"
#include "gbsopt/gbs.hpp"
#include "gbsopt/hafnian.hpp"
#include "gbsopt/proportional.hpp"

namespace gbsopt {

namespace {

using nlohmann::json;

const std::set<std::string>& config_keys() {
  static const std::set<std::string> keys = {
      "n",    "k",  "r",    "algorithm",   "sampler",    "tweaker",   "budget",    "repetitions",
      "ell",  "t0", "seed", "matrix_path", "output_dir", "long_mode", "save_runs", "threads"};
  return keys;
}

std::uint64_t get_unsigned(const json& j, const std::string& key) {
  const json& v = j.at(key);
  // Values built in code arrive as signed integers; parsed text as unsigned.
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw InvalidArgument("config: '" + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

double get_number(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_number()) {
    throw InvalidArgument("config: '" + key + "' must be a number");
  }
  return v.get<double>();
}

std::string get_string(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_string()) {
    throw InvalidArgument("config: '" + key + "' must be a string");
  }
  return v.get<std::string>();
}

bool get_bool(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_boolean()) {
    throw InvalidArgument("config: '" + key + "' must be a boolean");
  }
  return v.get<bool>();
}

// Runs fn(i) for i in [0, count) on up to `threads` workers.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn fn) {
  if (threads == 0) {
    threads = std::max(1u, std::thread::hardware_concurrency());
  }
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      fn(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) {
            error = std::current_exception();
          }
          next = count;
        }
      }
    });
  }
  for (auto& th : pool) {
    th.join();
  }
  if (error) {
    std::rethrow_exception(error);
  }
}

std::size_t greedy_repetitions(const ExperimentConfig& c) {
  return greedy_repetitions_for_budget(c.n, c.k, c.budget);
}

struct Instance {
  ComplexMatrix b;
  std::optional<ConditionalGBSDistribution> dist_k;
  std::optional<ConditionalGBSDistribution> dist_ell;
};

std::vector<OptimizerRun> run_repetitions(const ExperimentConfig& c, const Instance& inst,
                                          const std::string& algorithm, const std::string& sampler,
                                          const std::string& tweaker) {
  const Explorer explorer = sampler == "gbs" ? Explorer::gbs(*inst.dist_k) : Explorer::uniform(c.n, c.k);
  std::optional<Tweaker> tw;
  if (algorithm == "annealing") {
    const TweakParams params{c.ell, c.k};
    tw = tweaker == "gbs" ? Tweaker::gbs(*inst.dist_ell, params) : Tweaker::uniform(params);
  }
  const RandomStream base(c.seed);
  std::vector<OptimizerRun> runs(c.repetitions);
  parallel_for(c.repetitions, c.threads, [&](std::size_t i) {
    RandomStream rng = base.substream(i + 1);
    ObjectiveOracle oracle(inst.b);
    if (algorithm == "random-search") {
      runs[i] = random_search(oracle, c.k, c.budget, explorer, rng);
    } else if (algorithm == "annealing") {
      runs[i] = simulated_annealing(oracle, c.k, AnnealSchedule{c.t0, c.budget - 1}, *tw, explorer, rng);
    } else {
      runs[i] = greedy(oracle, c.k, greedy_repetitions(c), explorer, rng);
    }
    runs[i].seed = c.seed;
    runs[i].config["repetition"] = i;
  });
  return runs;
}

struct CurveStats {
  std::vector<double> mean;
  std::vector<double> std;
  std::vector<double> std_error;
};

// Best-so-far statistics at evaluation counts 1..length; runs shorter than
// `length` hold their final value.
CurveStats curve_stats(const std::vector<OptimizerRun>& runs, std::size_t length) {
  const std::size_t reps = runs.size();
  std::vector<std::vector<double>> best(reps, std::vector<double>(length, 0.0));
  for (std::size_t i = 0; i < reps; ++i) {
    const auto& traj = runs[i].trajectory;
    std::size_t t = 0;
    double current = 0.0;
    for (std::size_t e = 1; e <= length; ++e) {
      while (t < traj.size() && traj[t].first <= e) {
        current = traj[t].second;
        ++t;
      }
      best[i][e - 1] = current;
    }
  }
  CurveStats s;
  s.mean.resize(length);
  s.std.resize(length);
  s.std_error.resize(length);
  const double r = static_cast<double>(reps);
  for (std::size_t e = 0; e < length; ++e) {
    double sum = 0.0;
    for (std::size_t i = 0; i < reps; ++i) {
      sum += best[i][e];
    }
    const double mean = sum / r;
    double ss = 0.0;
    for (std::size_t i = 0; i < reps; ++i) {
      const double d = best[i][e] - mean;
      ss += d * d;
    }
    const double sd = reps > 1 ? std::sqrt(ss / (r - 1.0)) : 0.0;
    s.mean[e] = mean;
    s.std[e] = sd;
    s.std_error[e] = sd / std::sqrt(r);
  }
  return s;
}

std::size_t max_evaluations(const std::vector<OptimizerRun>& runs) {
  std::size_t m = 0;
  for (const auto& run : runs) {
    m = std::max(m, run.evaluations);
  }
  return m;
}

json optimum_json(const Instance& inst, const ExperimentConfig& c) {
  std::optional<BruteForceResult> opt;
  if (inst.dist_k) {
    opt = brute_force_from_distribution(*inst.dist_k);
  } else if (binomial_saturating(c.n, c.k) <= kDeskPatternLimit) {
    opt = brute_force_maxhaf(inst.b, c.k);
  }
  if (!opt) {
    return nullptr;
  }
  return {{"pattern", opt->pattern.bitstring()}, {"value", opt->value}, {"value_squared", opt->value_squared}};
}

Instance build_instance(const ExperimentConfig& c, bool need_k, bool need_ell) {
  Instance inst{experiment_matrix(c), std::nullopt, std::nullopt};
  const std::uint64_t limit = c.long_mode ? kDefaultPatternLimit : kDeskPatternLimit;
  if (need_k) {
    inst.dist_k = build_conditional_distribution(inst.b, c.k, c.r, limit, c.threads);
  }
  if (need_ell) {
    inst.dist_ell = build_conditional_distribution(inst.b, c.ell, c.r, limit, c.threads);
  }
  return inst;
}

json instance_json(const ExperimentConfig& c, const Instance& inst) {
  return {{"source", c.matrix_path ? "file" : "coe"},
          {"matrix_sha1", git_blob_sha1(to_json(inst.b).dump())}};
}

std::string lambda_label(double lambda) { return format_double(lambda); }

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) {
    throw InvalidArgument("config: expected a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    if (!config_keys().count(key)) {
      throw InvalidArgument("config: unknown key '" + key + "'");
    }
  }
  ExperimentConfig c;
  if (j.contains("n")) c.n = get_unsigned(j, "n");
  if (j.contains("k")) c.k = get_unsigned(j, "k");
  if (j.contains("r")) c.r = get_number(j, "r");
  if (j.contains("algorithm")) c.algorithm = get_string(j, "algorithm");
  if (j.contains("sampler")) c.sampler = get_string(j, "sampler");
  if (j.contains("tweaker")) c.tweaker = get_string(j, "tweaker");
  if (j.contains("budget")) c.budget = get_unsigned(j, "budget");
  if (j.contains("repetitions")) c.repetitions = get_unsigned(j, "repetitions");
  if (j.contains("ell")) c.ell = get_unsigned(j, "ell");
  if (j.contains("t0")) c.t0 = get_number(j, "t0");
  if (j.contains("seed")) c.seed = get_unsigned(j, "seed");
  if (j.contains("matrix_path") && !j["matrix_path"].is_null()) c.matrix_path = get_string(j, "matrix_path");
  if (j.contains("output_dir") && !j["output_dir"].is_null()) c.output_dir = get_string(j, "output_dir");
  if (j.contains("long_mode")) c.long_mode = get_bool(j, "long_mode");
  if (j.contains("save_runs")) c.save_runs = get_bool(j, "save_runs");
  if (j.contains("threads")) c.threads = static_cast<unsigned>(get_unsigned(j, "threads"));
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidArgument("config: cannot open " + path.string());
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InvalidArgument("config: " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

ExperimentConfig ExperimentConfig::paper_scale() {
  ExperimentConfig c;
  c.apply_paper_scale();
  return c;
}

void ExperimentConfig::apply_paper_scale() {
  n = 30;
  k = 10;
  ell = 6;
  t0 = 3e-5;
  budget = 1000;
  repetitions = 400;
  long_mode = true;
}

void ExperimentConfig::validate() const {
  if (algorithm != "random-search" && algorithm != "annealing" && algorithm != "greedy") {
    throw InvalidArgument("config: algorithm must be random-search, annealing or greedy");
  }
  if (sampler != "gbs" && sampler != "uniform") {
    throw InvalidArgument("config: sampler must be gbs or uniform");
  }
  if (!tweaker.empty() && tweaker != "gbs" && tweaker != "uniform") {
    throw InvalidArgument("config: tweaker must be gbs or uniform");
  }
  if (n < 2 || n > 64) {
    throw InvalidArgument("config: n must lie in [2, 64]");
  }
  if (k < 2 || k % 2 != 0 || k > n || k > kMaxRecursiveHafnianDim) {
    throw InvalidArgument("config: k must be even with 2 <= k <= min(n, 24)");
  }
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw InvalidArgument("config: r must be positive and finite");
  }
  if (budget < 1) {
    throw InvalidArgument("config: budget must be at least 1");
  }
  if (repetitions < 1) {
    throw InvalidArgument("config: repetitions must be at least 1");
  }
  if (algorithm == "annealing") {
    if (budget < 2) {
      throw InvalidArgument("config: annealing needs a budget of at least 2");
    }
    TweakParams{ell, k}.validate();
    if (!(t0 > 0.0) || !std::isfinite(t0)) {
      throw InvalidArgument("config: t0 must be positive and finite");
    }
    if (k >= n) {
      throw InvalidArgument("config: annealing needs k < n");
    }
  }
  if (!long_mode && binomial_saturating(n, k) > kDeskPatternLimit) {
    throw ResourceLimit("config: C(" + std::to_string(n) + ", " + std::to_string(k) +
                        ") patterns exceeds the desk limit of " + std::to_string(kDeskPatternLimit) +
                        "; set long_mode or pass --paper-scale");
  }
}

json ExperimentConfig::to_json() const {
  json j = {{"n", n},
            {"k", k},
            {"r", r},
            {"algorithm", algorithm},
            {"sampler", sampler},
            {"tweaker", effective_tweaker()},
            {"budget", budget},
            {"repetitions", repetitions},
            {"ell", ell},
            {"t0", t0},
            {"seed", seed},
            {"long_mode", long_mode},
            {"save_runs", save_runs}};
  j["matrix_path"] = matrix_path ? json(*matrix_path) : json(nullptr);
  return j;
}

std::string FigureDataset::to_csv() const {
  std::string out;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) out += ',';
    out += columns[c];
  }
  out += '\n';
  for (const auto& row : rows) {
    if (row.size() != columns.size()) {
      throw InvalidArgument("FigureDataset: row width differs from the header");
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_double(row[c]);
    }
    out += '\n';
  }
  return out;
}

std::string git_blob_sha1(std::string_view content) {
  std::string data = "blob " + std::to_string(content.size());
  data.push_back('\0');
  data.append(content);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha1(), nullptr) != 1) {
    throw std::runtime_error("git_blob_sha1: digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    hex.push_back(kHex[md[i] >> 4]);
    hex.push_back(kHex[md[i] & 0xf]);
  }
  return hex;
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw InvalidArgument("cannot write " + path.string());
  }
  out << text;
  if (!out) {
    throw std::runtime_error("write failed: " + path.string());
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InvalidArgument("cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path meta_path_for(const std::filesystem::path& csv_path) {
  auto p = csv_path;
  p.replace_extension(".meta.json");
  return p;
}

}  // namespace

std::filesystem::path write_dataset(const FigureDataset& ds, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::string csv = ds.to_csv();
  json meta = ds.metadata;
  meta["id"] = ds.id;
  meta["columns"] = ds.columns;
  meta["rows"] = ds.rows.size();
  meta["content_hash"] = git_blob_sha1(csv);
  const auto csv_path = dir / (ds.id + ".csv");
  write_text(csv_path, csv);
  write_text(meta_path_for(csv_path), meta.dump(2) + "\n");
  if (!ds.runs.is_null()) {
    write_text(dir / (ds.id + ".runs.json"), ds.runs.dump() + "\n");
  }
  return csv_path;
}

VerifyResult verify_dataset(const std::filesystem::path& csv_path) {
  const json meta = json::parse(read_text(meta_path_for(csv_path)), nullptr, false);
  if (meta.is_discarded() || !meta.contains("content_hash") || !meta["content_hash"].is_string()) {
    throw InvalidArgument("verify: " + meta_path_for(csv_path).string() + " has no content_hash");
  }
  VerifyResult r;
  r.expected = meta["content_hash"].get<std::string>();
  r.actual = git_blob_sha1(read_text(csv_path));
  r.ok = r.expected == r.actual;
  return r;
}

std::filesystem::path resolve_output_dir(const std::optional<std::string>& flag,
                                         const std::optional<std::string>& config_value) {
  if (flag && !flag->empty()) {
    return *flag;
  }
  if (config_value && !config_value->empty()) {
    return *config_value;
  }
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) {
    return env;
  }
  return std::filesystem::current_path();
}

ComplexMatrix experiment_matrix(const ExperimentConfig& config) {
  if (config.matrix_path) {
    ComplexMatrix b = load_matrix(*config.matrix_path);
    if (b.dim() != config.n) {
      throw InvalidArgument("config: matrix has dimension " + std::to_string(b.dim()) + " but n = " +
                            std::to_string(config.n));
    }
    return b;
  }
  RandomStream rng(config.seed);
  return coe_matrix(SqueezingSpec{config.r, config.n}, rng);
}

FigureDataset run_experiment(const ExperimentConfig& config) {
  config.validate();
  const bool need_ell = config.algorithm == "annealing" && config.effective_tweaker() == "gbs";
  const Instance inst = build_instance(config, config.sampler == "gbs", need_ell);
  const auto runs = run_repetitions(config, inst, config.algorithm, config.sampler, config.effective_tweaker());
  const std::size_t length = max_evaluations(runs);
  const CurveStats s = curve_stats(runs, length);

  FigureDataset ds;
  ds.id = "optimize_" + config.algorithm + "_" + config.sampler;
  if (config.algorithm == "annealing") {
    ds.id += "_tweak_" + config.effective_tweaker();
  }
  ds.columns = {"evaluations", "mean", "std", "stderr"};
  for (std::size_t e = 0; e < length; ++e) {
    ds.rows.push_back({static_cast<double>(e + 1), s.mean[e], s.std[e], s.std_error[e]});
  }
  std::size_t fallbacks = 0;
  for (const auto& run : runs) {
    fallbacks += run.tweak_fallbacks;
  }
  ds.metadata = {{"config", config.to_json()},
                 {"seed", config.seed},
                 {"instance", instance_json(config, inst)},
                 {"optimum", optimum_json(inst, config)},
                 {"evaluations_per_run", length},
                 {"tweak_fallbacks", fallbacks}};
  if (config.algorithm == "greedy") {
    ds.metadata["greedy_repetitions"] = greedy_repetitions(config);
  }
  if (config.save_runs) {
    ds.runs = json::array();
    for (const auto& run : runs) {
      ds.runs.push_back(to_json(run));
    }
  }
  return ds;
}

FigureDataset emit_figure4(const ExperimentConfig& config) {
  ExperimentConfig base = config;
  base.algorithm = "annealing";
  base.validate();
  const Instance inst = build_instance(base, true, true);

  struct Curve {
    std::string label;
    std::vector<OptimizerRun> runs;
  };
  std::vector<Curve> curves;
  std::size_t length = 0;
  for (const std::string algorithm : {"random-search", "annealing", "greedy"}) {
    for (const std::string sampler : {"gbs", "uniform"}) {
      ExperimentConfig c = base;
      c.algorithm = algorithm;
      c.sampler = sampler;
      c.tweaker = sampler;
      auto runs = run_repetitions(c, inst, algorithm, sampler, sampler);
      length = std::max(length, max_evaluations(runs));
      curves.push_back({algorithm + "_" + sampler, std::move(runs)});
    }
  }

  FigureDataset ds;
  ds.id = "figure4";
  ds.columns = {"evaluations"};
  std::vector<CurveStats> stats;
  json evals = json::object();
  for (const auto& curve : curves) {
    ds.columns.push_back(curve.label + "_mean");
    ds.columns.push_back(curve.label + "_std");
    ds.columns.push_back(curve.label + "_stderr");
    stats.push_back(curve_stats(curve.runs, length));
    evals[curve.label] = max_evaluations(curve.runs);
  }
  for (std::size_t e = 0; e < length; ++e) {
    std::vector<double> row{static_cast<double>(e + 1)};
    for (const auto& s : stats) {
      row.push_back(s.mean[e]);
      row.push_back(s.std[e]);
      row.push_back(s.std_error[e]);
    }
    ds.rows.push_back(std::move(row));
  }
  json config_echo = config.to_json();
  config_echo.erase("algorithm");
  config_echo.erase("sampler");
  config_echo.erase("tweaker");
  ds.metadata = {{"config", config_echo},
                 {"seed", config.seed},
                 {"instance", instance_json(base, inst)},
                 {"optimum", optimum_json(inst, base)},
                 {"evaluations_per_run", evals},
                 {"greedy_repetitions", greedy_repetitions(base)}};
  if (config.save_runs) {
    ds.runs = json::object();
    for (const auto& curve : curves) {
      json arr = json::array();
      for (const auto& run : curve.runs) {
        arr.push_back(to_json(run));
      }
      ds.runs[curve.label] = std::move(arr);
    }
  }
  return ds;
}

FigureDataset emit_figure1(const std::vector<double>& lambdas, std::size_t grid) {
  if (grid < 2) {
    throw InvalidArgument("figure 1: grid must be at least 2");
  }
  FigureDataset ds;
  ds.id = "figure1";
  ds.columns = {"y", "p_uniform"};
  for (double lambda : lambdas) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
      throw InvalidArgument("figure 1: lambda values must be positive and finite");
    }
    ds.columns.push_back("p_lambda_" + lambda_label(lambda));
  }
  for (std::size_t i = 1; i <= grid; ++i) {
    const double y = static_cast<double>(i) / static_cast<double>(grid);
    std::vector<double> row{y, 1.0};
    for (double lambda : lambdas) {
      row.push_back(prop::exp_density(lambda, y));
    }
    ds.rows.push_back(std::move(row));
  }
  ds.metadata = {{"config", {{"lambdas", lambdas}, {"grid", grid}}}};
  return ds;
}

FigureDataset emit_figure2(const std::vector<double>& lambdas, std::size_t kappa_max) {
  if (kappa_max < 1) {
    throw InvalidArgument("figure 2: kappa_max must be at least 1");
  }
  FigureDataset ds;
  ds.id = "figure2";
  ds.columns = {"kappa", "alpha_uniform"};
  for (double lambda : lambdas) {
    prop::ExpFamilyParams{lambda, 1}.validate();
    ds.columns.push_back("alpha_lambda_" + lambda_label(lambda));
  }
  for (std::size_t kappa = 1; kappa <= kappa_max; ++kappa) {
    // -log10(1 - kappa/(kappa+1)) = log10(kappa + 1)
    std::vector<double> row{static_cast<double>(kappa), std::log10(static_cast<double>(kappa) + 1.0)};
    for (double lambda : lambdas) {
      row.push_back(prop::alpha_coefficient(prop::expected_max_proportional({lambda, kappa})));
    }
    ds.rows.push_back(std::move(row));
  }
  ds.metadata = {{"config", {{"lambdas", lambdas}, {"kappa_max", kappa_max}}}};
  return ds;
}

FigureDataset emit_figure3(std::size_t k_max) {
  if (k_max < 2 || k_max % 2 != 0) {
    throw InvalidArgument("figure 3: k_max must be even and at least 2");
  }
  FigureDataset ds;
  ds.id = "figure3";
  ds.columns = {"k", "n", "R"};
  for (std::size_t k = 2; k <= k_max; k += 2) {
    ds.rows.push_back({static_cast<double>(k), static_cast<double>(k * k), prop::analytic_ratio_R(k * k, k)});
  }
  ds.metadata = {{"config", {{"k_max", k_max}}}};
  return ds;
}

}  // namespace gbsopt
