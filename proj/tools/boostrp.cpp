// Command-line front end: synthetic data, training, evaluation and the
// friedman1 benchmark runner.
//
// Exit codes: 0 success, 2 usage error, 1 runtime error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "boostrp/boostrp.hpp"

namespace {

using namespace boostrp;
namespace fs = std::filesystem;

constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 1;

/// Raised for invalid flag values detected after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v) { return detail::format_double(v); }

// ---------------------------------------------------------------------------
// synth

struct SynthArgs {
  std::string family;
  Index n = 300;
  Index d = 16;
  std::uint64_t seed = 0;
  double sigma = 1.0;
  bool noisy_outputs = false;
  std::string inputs = "normal";
  std::string out;
};

int cmd_synth(const SynthArgs& a) {
  SyntheticSpec spec;
  spec.family = parse_family(a.family);
  spec.inputs = parse_input_distribution(a.inputs);
  spec.n = a.n;
  spec.d = a.d;
  spec.noise_sigma = a.sigma;
  spec.seed = RngSeed{a.seed};
  spec.add_permuted_noise_outputs = a.noisy_outputs;
  const auto ds = generate(spec);
  save_csv(a.out, ds);
  std::cout << "rows=" << ds.n_samples() << " features=" << ds.n_features() << " outputs=" << ds.n_outputs()
            << " path=" << a.out << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
  std::string train;
  Index outputs = 1;
  std::string task = "regression";
  std::string variant = "gbmo";
  std::string loss = "l2";
  double mu = 0.1;
  Index stages = 100;
  Index max_leaves = 2;
  std::string k = "all";
  Index min_samples_leaf = 1;
  std::string projection = "subsample";
  Index q = 1;
  std::uint64_t seed = 0;
  std::optional<double> time_budget;
  std::string valid;
  std::string metric = "auto";
  std::string model_out;
  std::string report_out;
  std::string curve_out;
};

Index parse_k(const std::string& k, Index p) {
  if (k == "all") return 0;
  if (k == "sqrt") return std::max<Index>(1, static_cast<Index>(std::lround(std::sqrt(static_cast<double>(p)))));
  try {
    std::size_t pos = 0;
    const long v = std::stol(k, &pos);
    if (pos != k.size() || v < 1) throw UsageError("--k must be 'all', 'sqrt' or a positive integer");
    if (v > p) throw UsageError("--k " + k + " exceeds the " + std::to_string(p) + " available features");
    return static_cast<Index>(v);
  } catch (const std::logic_error&) {
    throw UsageError("--k must be 'all', 'sqrt' or a positive integer");
  }
}

MetricKind resolve_metric(const std::string& name, Task task) {
  if (name == "auto") return task == Task::multilabel ? MetricKind::lrap : MetricKind::macro_r2;
  return parse_metric(name);
}

const char* metric_name(MetricKind m) { return m == MetricKind::lrap ? "lrap" : "macro_r2"; }

int cmd_train(const TrainArgs& a) {
  // Everything checkable without data is checked before any work.
  if (!(a.mu > 0.0 && a.mu <= 1.0)) throw UsageError("--mu must lie in (0, 1]");
  if (a.stages < 0) throw UsageError("--stages must be nonnegative");
  if (a.max_leaves < 2) throw UsageError("--max-leaves must be at least 2");
  if (a.q < 1) throw UsageError("--q must be positive");
  if (a.time_budget && !(*a.time_budget >= 0)) throw UsageError("--time-budget must be nonnegative");
  BoostConfig cfg;
  cfg.variant = parse_variant(a.variant);
  cfg.loss = parse_loss(a.loss);
  cfg.projection = parse_projection(a.projection);
  const Task task = parse_task(a.task);
  const MetricKind metric = resolve_metric(a.metric, task);
  if (cfg.variant == Variant::gb_rpo && a.q != 1) throw UsageError("gb-rpo requires --q 1");
  if (cfg.loss == LossKind::logistic && task != Task::multilabel)
    throw UsageError("--loss logistic requires --task multilabel");

  const Dataset train = load_csv(a.train, a.outputs, task);
  cfg.learning_rate = a.mu;
  cfg.n_stages = a.stages;
  cfg.q = a.q;
  cfg.seed = RngSeed{a.seed};
  cfg.time_budget_seconds = a.time_budget;
  cfg.tree.max_leaves = a.max_leaves;
  cfg.tree.k_features = parse_k(a.k, train.n_features());
  cfg.tree.min_samples_leaf = a.min_samples_leaf;

  std::optional<Dataset> valid;
  if (!a.valid.empty()) {
    valid = load_csv(a.valid, a.outputs, task);
    if (valid->n_features() != train.n_features())
      throw ShapeError("validation set has " + std::to_string(valid->n_features()) + " features, training set has " +
                       std::to_string(train.n_features()));
  }

  const auto result = fit(train, cfg);
  save_model(a.model_out, result.model);

  std::vector<double> val_trace;
  if (valid)
    val_trace = staged_scores(result.model, valid->features(), valid->targets(), [&](const Matrix& y, const Matrix& s) {
      return evaluate(metric, y, s).value;
    });

  std::ostringstream rep;
  rep << "command=train\n"
      << "variant=" << to_string(cfg.variant) << "\nloss=" << to_string(cfg.loss) << "\ntask=" << to_string(task)
      << "\nmu=" << num(cfg.learning_rate) << "\nstages_requested=" << cfg.n_stages
      << "\nmax_leaves=" << cfg.tree.max_leaves << "\nk_features=" << (cfg.tree.k_features ? cfg.tree.k_features : train.n_features())
      << "\nmin_samples_leaf=" << cfg.tree.min_samples_leaf << "\nprojection=" << to_string(cfg.projection)
      << "\nq=" << cfg.q << "\nseed=" << a.seed << "\nn_train=" << train.n_samples()
      << "\nn_features=" << train.n_features() << "\nn_outputs=" << train.n_outputs()
      << "\nstages_fitted=" << result.model.stages.size() << "\ntrain_loss_final=" << num(result.train_loss.back())
      << '\n';
  if (valid) rep << "validation_metric=" << metric_name(metric) << "\nvalidation_final=" << num(val_trace.back()) << '\n';
  rep << "fit_seconds=" << num(result.elapsed_seconds.back()) << '\n';
  for (std::size_t m = 0; m < result.train_loss.size(); ++m) {
    rep << "stage=" << m << " seconds=" << num(result.elapsed_seconds[m]) << " train_loss=" << num(result.train_loss[m]);
    if (valid) rep << " validation=" << num(val_trace[m]);
    rep << '\n';
  }
  if (a.report_out.empty() || a.report_out == "-") {
    std::cout << rep.str();
  } else {
    std::ofstream out(a.report_out);
    if (!out) throw Error("cannot write '" + a.report_out + "'");
    out << rep.str();
    std::cout << "stages_fitted=" << result.model.stages.size() << " train_loss_final=" << num(result.train_loss.back())
              << " model=" << a.model_out << '\n';
  }

  if (!a.curve_out.empty()) {
    std::ofstream out(a.curve_out);
    if (!out) throw Error("cannot write '" + a.curve_out + "'");
    out << "stage,seconds,train_loss,val_metric\n";
    for (std::size_t m = 0; m < result.train_loss.size(); ++m)
      out << m << ',' << num(result.elapsed_seconds[m]) << ',' << num(result.train_loss[m]) << ','
          << (valid ? num(val_trace[m]) : std::string()) << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string model;
  std::string test;
  std::string metric = "auto";
  bool per_output = false;
};

int cmd_eval(const EvalArgs& a) {
  const auto model = load_model(a.model);
  const MetricKind metric = resolve_metric(a.metric, model.task);
  const auto test = load_csv(a.test, model.n_outputs(), model.task);
  if (test.n_features() != model.n_features)
    throw ShapeError("model expects p=" + std::to_string(model.n_features) + " features but test set has p=" +
                     std::to_string(test.n_features()));
  const auto report = evaluate(metric, test.targets(), model.predict(test.features()));
  std::cout << report.name << '=' << num(report.value) << '\n';
  if (report.excluded_rows > 0) std::cout << "excluded_rows=" << report.excluded_rows << '\n';
  if (a.per_output && report.per_output)
    for (Index j = 0; j < report.per_output->size(); ++j)
      std::cout << report.name << '[' << j << "]=" << num((*report.per_output)(j)) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// benchmark

struct BenchArgs {
  std::string suite = "friedman";
  Index stages = 1000;
  std::optional<double> time_budget;
  Index repetitions = 1;
  std::uint64_t seed = 0;
  Index n_train = 300;
  Index n_test = 4000;
  Index d = 16;
  std::vector<double> mu_grid{0.1};
  bool select_on_validation = false;
  bool st_per_output = false;
  std::string inputs = "normal";
  Index max_leaves = 2;
  std::string out_dir;
};

int cmd_benchmark(const BenchArgs& a) {
  BenchmarkOptions opt;
  if (a.suite == "friedman")
    opt.noisy_outputs = false;
  else if (a.suite == "friedman-noisy")
    opt.noisy_outputs = true;
  else
    throw UsageError("--suite must be 'friedman' or 'friedman-noisy'");
  for (double mu : a.mu_grid)
    if (!(mu > 0 && mu <= 1)) throw UsageError("--mu-grid values must lie in (0, 1]");
  opt.inputs = parse_input_distribution(a.inputs);
  opt.stages = a.stages;
  opt.time_budget_seconds = a.time_budget;
  opt.repetitions = a.repetitions;
  opt.seed = RngSeed{a.seed};
  opt.n_train = a.n_train;
  opt.n_test = a.n_test;
  opt.d = a.d;
  opt.learning_rates = a.mu_grid;
  opt.select_on_validation = a.select_on_validation;
  opt.single_target_stages_per_output = a.st_per_output;
  opt.max_leaves = a.max_leaves;
  opt.threads = default_thread_count();

  fs::create_directories(a.out_dir);
  const auto results = run_benchmark(opt);

  const fs::path dir(a.out_dir);
  std::ofstream traces(dir / "traces.csv");
  std::ofstream summary(dir / "summary.csv");
  if (!traces || !summary) throw Error("cannot write into '" + a.out_dir + "'");
  traces << "family,variant,repetition,stage,seconds,train_loss,test_macro_r2\n";
  summary << "family,variant,repetition,learning_rate,stages,final_macro_r2,rank,error\n";
  for (const auto& r : results) {
    const std::string fam = to_string(r.family), var = to_string(r.variant);
    for (std::size_t m = 0; m < r.test_r2.size(); ++m)
      traces << fam << ',' << var << ',' << r.repetition << ',' << m << ',' << num(r.seconds[m]) << ','
             << num(r.train_loss[m]) << ',' << num(r.test_r2[m]) << '\n';
    summary << fam << ',' << var << ',' << r.repetition << ',' << num(r.learning_rate) << ',' << r.stages_fitted << ','
            << (r.ok() ? num(r.final_r2) : std::string()) << ',' << r.rank << ',' << r.error << '\n';

    std::ofstream rep(dir / ("report_" + fam + "_" + var + "_" + std::to_string(r.repetition) + ".txt"));
    rep << "command=benchmark\nsuite=" << a.suite << "\nfamily=" << fam << "\nvariant=" << var
        << "\nrepetition=" << r.repetition << "\nloss=l2\nmax_leaves=" << opt.max_leaves << "\nk_features=all"
        << "\nprojection=subsample\nmu=" << num(r.learning_rate) << "\nstages_fitted=" << r.stages_fitted << '\n';
    if (r.ok()) {
      rep << "final_macro_r2=" << num(r.final_r2) << "\nrank=" << r.rank << '\n';
      for (std::size_t m = 0; m < r.test_r2.size(); ++m)
        rep << "stage=" << m << " seconds=" << num(r.seconds[m]) << " train_loss=" << num(r.train_loss[m])
            << " test=" << num(r.test_r2[m]) << '\n';
    } else {
      rep << "error=" << r.error << '\n';
    }
  }

  // Mean over repetitions, printed per family.
  struct Agg {
    double r2 = 0, rank = 0;
    int n = 0, failed = 0;
  };
  std::map<std::pair<int, int>, Agg> agg;
  for (const auto& r : results) {
    auto& g = agg[{static_cast<int>(r.family), static_cast<int>(r.variant)}];
    if (!r.ok()) {
      ++g.failed;
      continue;
    }
    g.r2 += r.final_r2;
    g.rank += r.rank;
    ++g.n;
  }
  std::printf("%-8s %-16s %14s %10s\n", "family", "variant", "macro_r2", "mean_rank");
  for (const auto& [key, g] : agg) {
    const auto fam = to_string(static_cast<Family>(key.first));
    const auto var = to_string(static_cast<Variant>(key.second));
    if (g.n == 0)
      std::printf("%-8s %-16s %14s %10s\n", fam, var, "failed", "-");
    else
      std::printf("%-8s %-16s %14.4f %10.2f\n", fam, var, g.r2 / g.n, g.rank / g.n);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"boostrp: multi-output gradient tree boosting with random output projections"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Generate a friedman1 multi-output dataset as CSV");
  s->add_option("--family", synth.family, "chain | group | ind")->required();
  s->add_option("--n", synth.n, "Number of samples");
  s->add_option("--d", synth.d, "Number of outputs");
  s->add_option("--seed", synth.seed, "Random seed");
  s->add_option("--sigma", synth.sigma, "Noise standard deviation");
  s->add_flag("--noisy-outputs", synth.noisy_outputs, "Append d row-permuted copies of the outputs");
  s->add_option("--inputs", synth.inputs, "Input law: normal | uniform");
  s->add_option("-o,--out", synth.out, "Output CSV path")->required();

  TrainArgs train;
  auto* t = app.add_subcommand("train", "Fit a boosted ensemble and save it");
  t->add_option("--train", train.train, "Training CSV (targets in the last columns)")->required();
  t->add_option("--outputs", train.outputs, "Number of output columns")->required();
  t->add_option("--task", train.task, "regression | multilabel");
  t->add_option("--variant", train.variant, "single-target | gbmo | gb-rpo | gb-relabel-rpo");
  t->add_option("--loss", train.loss, "l2 | l1 | logistic");
  t->add_option("--mu", train.mu, "Learning rate in (0, 1]");
  t->add_option("--stages", train.stages, "Maximum number of stages");
  t->add_option("--max-leaves", train.max_leaves, "Leaves per tree (2 = stump)");
  t->add_option("--k", train.k, "Features per node: all | sqrt | integer");
  t->add_option("--min-samples-leaf", train.min_samples_leaf, "Minimum samples per leaf");
  t->add_option("--projection", train.projection, "gaussian | achlioptas | sparse_rademacher | subsample");
  t->add_option("--q", train.q, "Projected dimension (gb-relabel-rpo)");
  t->add_option("--seed", train.seed, "Random seed");
  t->add_option("--time-budget", train.time_budget, "Wall-clock budget in seconds");
  t->add_option("--valid", train.valid, "Validation CSV for the learning curve");
  t->add_option("--metric", train.metric, "auto | lrap | macro-r2");
  t->add_option("-o,--model", train.model_out, "Model output path")->required();
  t->add_option("--report", train.report_out, "Run report path (default: stdout)");
  t->add_option("--curve", train.curve_out, "Learning-curve CSV path");

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "Score a saved model on a CSV test set");
  e->add_option("--model", eval.model, "Model file")->required();
  e->add_option("--test", eval.test, "Test CSV")->required();
  e->add_option("--metric", eval.metric, "auto | lrap | macro-r2");
  e->add_flag("--per-output", eval.per_output, "Also print per-output components");

  BenchArgs bench;
  auto* b = app.add_subcommand("benchmark", "Compare the four drivers on friedman1 chain/group/ind");
  b->add_option("--suite", bench.suite, "friedman | friedman-noisy");
  b->add_option("--stages", bench.stages, "Stage budget per fit");
  b->add_option("--time-budget", bench.time_budget, "Wall-clock budget per fit in seconds");
  b->add_option("--repetitions", bench.repetitions, "Independent seeded repetitions");
  b->add_option("--seed", bench.seed, "Random seed");
  b->add_option("--n-train", bench.n_train, "Training samples");
  b->add_option("--n-test", bench.n_test, "Test samples");
  b->add_option("--d", bench.d, "Outputs");
  b->add_option("--mu-grid", bench.mu_grid, "Learning rates to select from")->delimiter(',');
  b->add_flag("--select-on-validation", bench.select_on_validation, "Pick rate and stage count on a 20% split");
  b->add_flag("--st-per-output", bench.st_per_output, "Count single-target stages per output");
  b->add_option("--inputs", bench.inputs, "Input law: normal | uniform");
  b->add_option("--max-leaves", bench.max_leaves, "Leaves per tree");
  b->add_option("-o,--out-dir", bench.out_dir, "Directory for traces, summary and reports")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::CallForAllHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kExitUsage;
  }

  try {
    if (*s) return cmd_synth(synth);
    if (*t) return cmd_train(train);
    if (*e) return cmd_eval(eval);
    if (*b) return cmd_benchmark(bench);
  } catch (const UsageError& err) {
    std::cerr << "usage error: " << err.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& err) {
    std::cerr << "usage error: " << err.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
