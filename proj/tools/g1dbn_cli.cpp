/*
 * Copyright 2026 The g1dbn Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


// g1dbn command-line tool: simulate, infer, merge, eval, oracle, alpha1,
// replicate. Data goes to files or stdout, diagnostics to stderr.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "g1dbn/g1dbn.hpp"
#include "g1dbn/io.hpp"

namespace fs = std::filesystem;
using namespace g1dbn;

namespace {

enum Exit : int {
  kOk = 0,
  kCheckFailed = 1,
  kBadFlags = 2,
  kIo = 3,
  kTooManyParents = 4,
  kEmptyTruth = 5,
  kUnstable = 6,
  kBudget = 7,
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FlagError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse:
    case ErrorKind::NonFinite:
    case ErrorKind::TooFewTimePoints:
    case ErrorKind::TooFewVariables:
      return kIo;
    case ErrorKind::TooManyParents:
      return kTooManyParents;
    case ErrorKind::EmptyTruth:
      return kEmptyTruth;
    case ErrorKind::Unstable:
      return kUnstable;
    case ErrorKind::BudgetExceeded:
      return kBudget;
    case ErrorKind::InvalidArgument:
    case ErrorKind::InvalidDof:
    case ErrorKind::EmptyGrid:
      return kBadFlags;
    default:
      return kCheckFailed;
  }
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path + " for reading");
  return in;
}

// Writes through a buffer so that a failed run leaves no partial file.
void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw IoError("write to " + path.string() + " failed");
}

template <typename Fn>
void write_with(const fs::path& path, Fn&& fn) {
  std::ostringstream buf;
  fn(buf);
  write_file(path, buf.str());
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

TimeSeries load_series(const std::string& path) {
  auto in = open_in(path);
  return io::read_series(in);
}

AR1Model load_model(const std::string& path) {
  auto in = open_in(path);
  return io::read_model(in);
}

std::string padded(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04zu", index);
  return buf;
}

std::uint64_t default_seed() {
  const char* env = std::getenv("G1DBN_SEED");
  if (env == nullptr || *env == '\0') return 1;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(env, &used);
    if (used != std::string(env).size()) throw std::invalid_argument(env);
    return v;
  } catch (const std::exception&) {
    throw FlagError(std::string("G1DBN_SEED is not an unsigned integer: ") + env);
  }
}

const CLI::Validator kOpenUnit(
    [](std::string& s) -> std::string {
      double v = 0.0;
      if (!io::parse_double(s, v) || !(v > 0.0 && v <= 1.0)) return "must lie in (0, 1]";
      return {};
    },
    "(0,1]");

const CLI::Validator kOpenInterval(
    [](std::string& s) -> std::string {
      double v = 0.0;
      if (!io::parse_double(s, v) || !(v > 0.0 && v < 1.0)) return "must lie in (0, 1)";
      return {};
    },
    "(0,1)");

std::map<std::string, Estimator> estimator_map() {
  return {{"ls", Estimator::LS}, {"huber", Estimator::Huber}, {"tukey", Estimator::Tukey}};
}

struct EstimatorFlags {
  Estimator estimator = Estimator::LS;
  double huber_k = kDefaultHuberK;
  double tukey_c = kDefaultTukeyC;
  double irls_tol = 1e-6;
  int irls_max_iter = 50;

  void add(CLI::App* app) {
    app->add_option("--estimator", estimator, "regression estimator")
        ->transform(CLI::CheckedTransformer(estimator_map(), CLI::ignore_case));
    app->add_option("--huber-k", huber_k, "Huber tuning constant")->check(CLI::PositiveNumber);
    app->add_option("--tukey-c", tukey_c, "Tukey bisquare tuning constant")
        ->check(CLI::PositiveNumber);
    app->add_option("--irls-tol", irls_tol, "IRLS coefficient tolerance")
        ->check(CLI::PositiveNumber);
    app->add_option("--irls-max-iter", irls_max_iter, "IRLS iteration cap")
        ->check(CLI::Range(1, 100000));
  }
  void apply(InferenceConfig& cfg) const {
    cfg.estimator = estimator;
    cfg.huber_k = huber_k;
    cfg.tukey_c = tukey_c;
    cfg.irls_tol = irls_tol;
    cfg.irls_max_iter = irls_max_iter;
  }
};

std::vector<double> parse_grid(const std::string& text, const char* flag) {
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    if (!io::parse_double(item, v) || !(v > 0.0 && v <= 1.0))
      throw FlagError(std::string(flag) + ": '" + item + "' is not a value in (0, 1]");
    grid.push_back(v);
  }
  if (grid.empty()) throw FlagError(std::string(flag) + ": empty grid");
  return grid;
}

// ------------------------------------------------------------- simulate

struct SimulateFlags {
  Eigen::Index p = 50;
  Eigen::Index n = 20;
  double density = 0.05;
  std::optional<std::uint64_t> seed;
  std::string noise = "gaussian";
  double sigma_offdiag = 0.0;
  std::size_t replicates = 1;
  std::string out_dir;
  bool require_stable = false;
  Eigen::Index burn_in = 0;
};

int run_simulate(const SimulateFlags& f) {
  ExperimentConfig cfg;
  cfg.p = f.p;
  cfg.n = f.n;
  cfg.density = f.density;
  cfg.seed = f.seed ? *f.seed : default_seed();
  cfg.noise = f.noise == "uniform" ? NoiseSpec::uniform() : NoiseSpec::gaussian();
  cfg.sigma_offdiag = f.sigma_offdiag;
  cfg.require_stable = f.require_stable;
  cfg.burn_in = f.burn_in;
  make_dir(f.out_dir);
  for (std::size_t r = 0; r < f.replicates; ++r) {
    const auto model = experiment_model(cfg, r);
    const auto ts = experiment_series(cfg, model, r);
    const fs::path dir(f.out_dir);
    const auto tag = padded(r + 1);
    write_with(dir / ("model_" + tag + ".tsv"), [&](std::ostream& o) { io::write_model(o, model); });
    write_with(dir / ("series_" + tag + ".tsv"), [&](std::ostream& o) { io::write_series(o, ts); });
    write_with(dir / ("truth_" + tag + ".tsv"),
               [&](std::ostream& o) { io::write_plain_edges(o, population_gmin(model)); });
  }
  std::cerr << "wrote " << f.replicates << " replicate(s) to " << f.out_dir << '\n';
  return kOk;
}

// ---------------------------------------------------------------- infer

struct InferFlags {
  std::string series;
  EstimatorFlags est;
  double alpha1 = 0.7;
  std::string alpha1_grid;
  double alpha2 = 0.05;
  std::optional<double> fdr;
  unsigned threads = 1;
  std::vector<std::size_t> targets;
  std::string s1_file;
  std::string out_dir;
};

void report_warnings(const std::vector<Step2Warning>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w.message << '\n';
}

void print_alpha1_report(std::ostream& out, const Alpha1Selection& sel) {
  out << "alpha1\tedges\tzero_parents\tone_parent\ttwo_or_more\tone_predominates\n";
  for (const auto& pt : sel.report) {
    out << io::format_double(pt.alpha, io::kScoreDigits) << '\t' << pt.edges << '\t'
        << pt.zero_parents() << '\t' << pt.one_parent() << '\t' << pt.two_or_more() << '\t'
        << (pt.one_parent_predominates() ? "yes" : "no") << '\n';
  }
  out << "selected\t" << io::format_double(sel.alpha1, io::kScoreDigits)
      << (sel.degenerate ? "\tdegenerate" : "") << '\n';
}

int run_infer(const InferFlags& f) {
  const auto ts = load_series(f.series);
  validate_timeseries(ts.data(), SeriesUse::Step1);
  InferenceConfig cfg;
  f.est.apply(cfg);
  cfg.alpha1 = f.alpha1;
  cfg.alpha2 = f.alpha2;
  cfg.fdr_level = f.fdr;
  cfg.threads = f.threads;
  cfg.validate();
  const auto p = static_cast<std::size_t>(ts.p());
  const fs::path dir(f.out_dir);
  make_dir(dir);

  if (!f.targets.empty()) {
    const auto pairs = lagged_pairs(ts);
    for (auto t : f.targets) {
      if (t < 1 || t > p) throw FlagError("--target: " + std::to_string(t) + " is outside 1.." + std::to_string(p));
    }
    std::vector<Vector> rows(f.targets.size());
    parallel_for(f.targets.size(), f.threads, [&](std::size_t k) {
      rows[k] = step1_row(pairs, f.targets[k] - 1, cfg);
    });
    for (std::size_t k = 0; k < f.targets.size(); ++k) {
      write_with(dir / ("s1_row_" + padded(f.targets[k]) + ".tsv"), [&](std::ostream& o) {
        io::write_score_header(o, p);
        io::write_score_row(o, f.targets[k] - 1, rows[k]);
      });
    }
    return kOk;
  }

  ScoreMatrix s1 = ScoreMatrix::ones(p);
  if (!f.s1_file.empty()) {
    auto in = open_in(f.s1_file);
    s1 = io::read_score_matrix(in);
    if (s1.p() != p) throw FlagError("--s1: score matrix has " + std::to_string(s1.p()) +
                                     " columns but the series has " + std::to_string(p));
  } else {
    s1 = step1_scores(ts, cfg);
  }
  if (!f.alpha1_grid.empty()) {
    const auto sel = select_alpha1(s1, parse_grid(f.alpha1_grid, "--alpha1-grid"));
    print_alpha1_report(std::cerr, sel);
    cfg.alpha1 = sel.alpha1;
  }
  const auto result = infer_from_step1(ts, s1, cfg);
  report_warnings(result.warnings);

  write_with(dir / "s1.tsv", [&](std::ostream& o) { io::write_score_matrix(o, result.s1); });
  write_with(dir / "s2.tsv", [&](std::ostream& o) { io::write_score_matrix(o, result.s2); });
  write_with(dir / "step1_edges.tsv",
             [&](std::ostream& o) { io::write_edge_list(o, result.g1hat, result.s1, result.s2); });
  write_with(dir / "edges.tsv", [&](std::ostream& o) {
    io::write_edge_list(o, result.final_edges, result.s1, result.s2);
  });
  std::cerr << "alpha1 " << cfg.alpha1 << ": " << result.g1hat.size() << " step-1 edges, "
            << result.final_edges.size() << " final edges\n";
  return kOk;
}

// ---------------------------------------------------------------- merge

int run_merge(const std::vector<std::string>& shards, const std::string& out) {
  std::vector<io::ScoreRows> rows;
  for (const auto& path : shards) {
    auto in = open_in(path);
    rows.push_back(io::read_score_rows(in));
  }
  const auto merged = io::merge_score_rows(rows);
  if (out.empty()) {
    io::write_score_matrix(std::cout, merged);
  } else {
    write_with(out, [&](std::ostream& o) { io::write_score_matrix(o, merged); });
  }
  return kOk;
}

// ----------------------------------------------------------------- eval

struct EvalFlags {
  std::string scores;
  std::string truth;
  std::string model;
  std::string edges;
  std::string curve;
  std::string recall_grid = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1";
};

int run_eval(const EvalFlags& f) {
  ScoreMatrix scores = ScoreMatrix::ones(1);
  {
    auto in = open_in(f.scores);
    scores = io::read_score_matrix(in);
  }
  const auto p = scores.p();
  EdgeSet truth(p);
  if (!f.model.empty()) {
    const auto model = load_model(f.model);
    if (static_cast<std::size_t>(model.p()) != p)
      throw FlagError("--model: dimension does not match the score matrix");
    truth = population_gmin(model);
  } else {
    auto in = open_in(f.truth);
    truth = io::read_edges(in, p);
  }
  const auto grid = parse_grid(f.recall_grid, "--recall-grid");
  const auto curve = pr_curve(scores, truth);
  if (!f.curve.empty())
    write_with(f.curve, [&](std::ostream& o) { io::write_pr_curve(o, curve); });
  std::cout << "auc\t" << io::format_double(auc_pr(curve), io::kScoreDigits);
  for (double r : grid)
    std::cout << "\tppv@" << io::format_double(r, 3) << '\t'
              << io::format_double(precision_at_recall(curve, r), io::kScoreDigits);
  std::cout << '\n';
  if (!f.edges.empty()) {
    auto in = open_in(f.edges);
    const auto c = confusion(io::read_edges(in, p), truth, p);
    std::cout << "tp\t" << c.tp << "\tfp\t" << c.fp << "\tfn\t" << c.fn << "\ttn\t" << c.tn
              << "\tprecision\t" << io::format_double(c.precision(), io::kScoreDigits)
              << "\trecall\t" << io::format_double(c.recall(), io::kScoreDigits) << '\n';
  }
  return kOk;
}

// --------------------------------------------------------------- oracle

struct OracleFlags {
  std::string model;
  std::size_t q = 1;
  double tol = kOracleTolerance;
  std::uint64_t budget = kDefaultOracleBudget;
  unsigned threads = 1;
  std::string out_dir;
};

int run_oracle(const OracleFlags& f) {
  const auto model = load_model(f.model);
  const auto gamma = stationary_covariance(model);
  const auto gmin = population_gmin(model, f.tol);
  const auto gq = population_gq(model, f.q, f.tol, f.budget, f.threads);
  if (!f.out_dir.empty()) {
    const fs::path dir(f.out_dir);
    make_dir(dir);
    write_with(dir / "gmin.tsv", [&](std::ostream& o) { io::write_plain_edges(o, gmin); });
    write_with(dir / ("gq_" + std::to_string(f.q) + ".tsv"),
               [&](std::ostream& o) { io::write_plain_edges(o, gq); });
  }
  const std::string name = "G^(" + std::to_string(f.q) + ")";
  bool ok = true;
  auto check = [&](const std::string& label, bool pass) {
    std::cout << label << ": " << (pass ? "PASS" : "FAIL") << '\n';
    ok = ok && pass;
  };
  std::cout << "p\t" << model.p() << "\nq\t" << f.q << "\nedges G~\t" << gmin.size()
            << "\nedges " << name << '\t' << gq.size() << "\nmax in-degree G~\t"
            << gmin.max_in_degree() << "\nmax in-degree " << name << '\t'
            << gq.max_in_degree() << "\nlyapunov residual\t"
            << io::format_double(lyapunov_residual(model, gamma), 3) << '\n';
  check("lyapunov residual < 1e-12", lyapunov_residual(model, gamma) < 1e-12);
  check("G~ subset of " + name, gmin.is_subset_of(gq));
  if (gmin.max_in_degree() <= f.q) {
    check(name + " subset of G~", gq.is_subset_of(gmin));
    check(name + " == G~", gq == gmin);
  }
  if (gq.max_in_degree() <= f.q) check(name + " has <= q parents per node, so == G~", gq == gmin);
  return ok ? kOk : kCheckFailed;
}

// --------------------------------------------------------------- alpha1

int run_alpha1(const std::string& series, const std::string& grid_text,
               const EstimatorFlags& est, unsigned threads) {
  const auto ts = load_series(series);
  InferenceConfig cfg;
  est.apply(cfg);
  cfg.threads = threads;
  cfg.validate();
  const auto sel = select_alpha1(ts, parse_grid(grid_text, "--grid"), cfg);
  print_alpha1_report(std::cout, sel);
  return kOk;
}

// ------------------------------------------------------------ replicate

struct ReplicateFlags {
  SimulateFlags sim;
  EstimatorFlags est;
  double alpha1 = 0.7;
  double alpha2 = 0.05;
  std::string overflow = "tighten";
  unsigned threads = 1;
  std::string curve;
};

int run_replicate(const ReplicateFlags& f) {
  ExperimentConfig cfg;
  cfg.p = f.sim.p;
  cfg.n = f.sim.n;
  cfg.density = f.sim.density;
  cfg.replicates = f.sim.replicates;
  cfg.seed = f.sim.seed ? *f.sim.seed : default_seed();
  cfg.noise = f.sim.noise == "uniform" ? NoiseSpec::uniform() : NoiseSpec::gaussian();
  cfg.sigma_offdiag = f.sim.sigma_offdiag;
  cfg.require_stable = f.sim.require_stable;
  cfg.burn_in = f.sim.burn_in;
  f.est.apply(cfg.inference);
  cfg.inference.alpha1 = f.alpha1;
  cfg.inference.alpha2 = f.alpha2;
  cfg.inference.validate();
  cfg.overflow = f.overflow == "fail" ? OverflowPolicy::Fail : OverflowPolicy::Tighten;
  cfg.threads = f.threads;
  const auto s = run_experiment(cfg);
  if (!f.curve.empty()) {
    write_with(f.curve, [&](std::ostream& o) {
      o << "recall\tprecision_step1\tprecision_step2\n";
      for (std::size_t k = 0; k < s.recall_grid.size(); ++k)
        o << io::format_double(s.recall_grid[k], 3) << '\t'
          << io::format_double(s.mean_precision_step1[k], io::kScoreDigits) << '\t'
          << io::format_double(s.mean_precision_step2[k], io::kScoreDigits) << '\n';
    });
  }
  auto fmt = [](double v) { return io::format_double(v, io::kScoreDigits); };
  std::cout << "replicates\t" << s.replicates.size() << "\nmean_auc_step1\t"
            << fmt(s.mean_auc_step1) << "\nmean_auc_step2\t" << fmt(s.mean_auc_step2)
            << "\nstep2_better_fraction\t" << fmt(s.strict_improvement_rate())
            << "\nprecision_at_recall_0.4_step1\t" << fmt(s.mean_precision_at(0.4, false))
            << "\nprecision_at_recall_0.4_step2\t" << fmt(s.mean_precision_at(0.4))
            << "\nalpha1_tightened\t" << s.tightened() << '\n';
  return kOk;
}

void add_simulation_flags(CLI::App* app, SimulateFlags& f) {
  app->add_option("--p", f.p, "number of variables")->check(CLI::Range(1, 100000));
  app->add_option("--n", f.n, "number of time points")->check(CLI::Range(2, 10000000));
  app->add_option("--density", f.density, "fraction of nonzero entries in A")
      ->check(CLI::Range(0.0, 1.0));
  app->add_option("--seed", f.seed, "base seed (default: $G1DBN_SEED, else 1)");
  app->add_option("--noise", f.noise, "gaussian or uniform (U[-2,2])")
      ->check(CLI::IsMember({"gaussian", "uniform"}));
  app->add_option("--sigma-offdiag", f.sigma_offdiag,
                  "fraction of nonzero off-diagonal error covariances")
      ->check(CLI::Range(0.0, 1.0));
  app->add_option("--replicates", f.replicates, "number of replicates")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1000000}));
  app->add_flag("--require-stable", f.require_stable, "redraw A until its spectral radius is < 1");
  app->add_option("--burn-in", f.burn_in, "steps discarded before the first record")
      ->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-step dynamic Bayesian network inference from short time series"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "g1dbn 0.1.0");

  SimulateFlags sim;
  auto* simulate = app.add_subcommand("simulate", "simulate random AR(1) models and series");
  add_simulation_flags(simulate, sim);
  simulate->add_option("--out-dir", sim.out_dir, "output directory")->required();

  InferFlags inf;
  auto* infer_cmd = app.add_subcommand("infer", "score edges in two steps and select a graph");
  infer_cmd->add_option("--series", inf.series, "series file")->required();
  inf.est.add(infer_cmd);
  auto* a1 = infer_cmd->add_option("--alpha1", inf.alpha1, "step-1 threshold")->check(kOpenUnit);
  infer_cmd->add_option("--alpha1-grid", inf.alpha1_grid,
                        "comma-separated grid; choose alpha1 from the parent histogram")
      ->excludes(a1);
  auto* a2 = infer_cmd->add_option("--alpha2", inf.alpha2, "step-2 threshold")->check(kOpenUnit);
  infer_cmd->add_option("--fdr", inf.fdr, "Benjamini-Hochberg level for step 2")
      ->check(kOpenInterval)
      ->excludes(a2);
  infer_cmd->add_option("--threads", inf.threads, "worker threads")->check(CLI::Range(1u, 1024u));
  auto* target = infer_cmd->add_option("--target", inf.targets,
                                       "compute only these step-1 rows (1-based), one file each");
  infer_cmd->add_option("--s1", inf.s1_file, "precomputed (merged) step-1 score matrix")
      ->excludes(target);
  infer_cmd->add_option("--out-dir", inf.out_dir, "output directory")->required();

  std::vector<std::string> shards;
  std::string merge_out;
  auto* merge = app.add_subcommand("merge", "merge step-1 row shards into one score matrix");
  merge->add_option("shards", shards, "shard files")->required();
  merge->add_option("--out", merge_out, "output file (default: stdout)");

  EvalFlags ev;
  auto* eval = app.add_subcommand("eval", "precision-recall evaluation against a true graph");
  eval->add_option("--scores", ev.scores, "score matrix file")->required();
  auto* truth = eval->add_option("--truth", ev.truth, "true edge file");
  auto* model = eval->add_option("--model", ev.model, "model file (truth = nonzero A)");
  truth->excludes(model);
  eval->add_option("--edges", ev.edges, "predicted edge file for confusion counts");
  eval->add_option("--curve", ev.curve, "write the PR curve here");
  eval->add_option("--recall-grid", ev.recall_grid, "recall levels for the summary line");

  OracleFlags orc;
  auto* oracle = app.add_subcommand("oracle", "population graphs of a model and property checks");
  oracle->add_option("--model", orc.model, "model file")->required();
  oracle->add_option("--q", orc.q, "order of the dependence graph");
  oracle->add_option("--tol", orc.tol, "zero tolerance on partial covariances")
      ->check(CLI::PositiveNumber);
  oracle->add_option("--budget", orc.budget, "maximum C(p-1, q) * p^2");
  oracle->add_option("--threads", orc.threads, "worker threads")->check(CLI::Range(1u, 1024u));
  oracle->add_option("--out-dir", orc.out_dir, "write gmin.tsv and gq_<q>.tsv here");

  std::string a1_series;
  std::string a1_grid = "0.05,0.1,0.2,0.3,0.4,0.5,0.6,0.7";
  EstimatorFlags a1_est;
  unsigned a1_threads = 1;
  auto* alpha1 = app.add_subcommand("alpha1", "parent-count histograms over an alpha1 grid");
  alpha1->add_option("--series", a1_series, "series file")->required();
  alpha1->add_option("--grid", a1_grid, "comma-separated alpha1 values");
  a1_est.add(alpha1);
  alpha1->add_option("--threads", a1_threads, "worker threads")->check(CLI::Range(1u, 1024u));

  ReplicateFlags rep;
  rep.sim.replicates = 50;
  auto* replicate = app.add_subcommand("replicate", "averaged precision-recall curves over replicates");
  add_simulation_flags(replicate, rep.sim);
  rep.est.add(replicate);
  replicate->add_option("--alpha1", rep.alpha1, "step-1 threshold")->check(kOpenUnit);
  replicate->add_option("--alpha2", rep.alpha2, "step-2 threshold")->check(kOpenUnit);
  replicate->add_option("--overflow", rep.overflow,
                        "on too many step-1 parents: fail, or tighten alpha1 for that replicate")
      ->check(CLI::IsMember({"fail", "tighten"}));
  replicate->add_option("--threads", rep.threads, "replicates run concurrently")
      ->check(CLI::Range(1u, 1024u));
  replicate->add_option("--curve", rep.curve, "write the averaged curves here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadFlags;
  }

  try {
    if (*simulate) return run_simulate(sim);
    if (*infer_cmd) return run_infer(inf);
    if (*merge) return run_merge(shards, merge_out);
    if (*eval) {
      if (ev.truth.empty() && ev.model.empty()) throw FlagError("eval: one of --truth or --model is required");
      return run_eval(ev);
    }
    if (*oracle) return run_oracle(orc);
    if (*alpha1) return run_alpha1(a1_series, a1_grid, a1_est, a1_threads);
    if (*replicate) return run_replicate(rep);
  } catch (const FlagError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadFlags;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kOk;
}
