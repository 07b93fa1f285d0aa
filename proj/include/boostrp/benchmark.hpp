#ifndef BOOSTRP_BENCHMARK_HPP
#define BOOSTRP_BENCHMARK_HPP

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "boostrp/boosting.hpp"
#include "boostrp/metrics.hpp"
#include "boostrp/synthetic.hpp"

namespace boostrp {

/// Comparison of the four drivers on the friedman1 families, with the settings
/// used for the convergence study: stumps, all features, l2, subsampled outputs.
struct BenchmarkOptions {
  std::vector<Family> families{Family::chain, Family::group, Family::ind};
  std::vector<Variant> variants{Variant::single_target, Variant::gbmo, Variant::gb_rpo, Variant::gb_relabel_rpo};
  bool noisy_outputs = false;
  Index n_train = 300;
  Index n_test = 4000;
  Index d = 16;
  double noise_sigma = 1.0;
  InputDistribution inputs = InputDistribution::normal;
  /// Weak models per fit. Counted in total unless
  /// `single_target_stages_per_output`, in which case single-target fits
  /// d * stages trees (one budget per output).
  Index stages = 1000;
  bool single_target_stages_per_output = false;
  std::optional<double> time_budget_seconds;
  Index repetitions = 1;
  RngSeed seed{};
  /// Learning-rate grid; with more than one value (or select_on_validation)
  /// the rate and stage count are chosen on a 20% validation split.
  std::vector<double> learning_rates{0.1};
  bool select_on_validation = false;
  Index max_leaves = 2;
  unsigned threads = 1;
};

struct CellResult {
  Family family = Family::group;
  Variant variant = Variant::gbmo;
  Index repetition = 0;
  double learning_rate = 0.0;
  Index stages_fitted = 0;
  double final_r2 = 0.0;
  /// Per stage prefix: wall-clock seconds, training loss, test macro-r2.
  std::vector<double> seconds;
  std::vector<double> train_loss;
  std::vector<double> test_r2;
  /// 1 = best final macro-r2 among the variants of the same (family, repetition).
  int rank = 0;
  std::string error;

  bool ok() const noexcept { return error.empty(); }

  /// First time the test score reaches `level`, if ever.
  std::optional<double> time_to_reach(double level) const {
    for (std::size_t i = 0; i < test_r2.size(); ++i)
      if (test_r2[i] >= level) return seconds[i];
    return std::nullopt;
  }
};

/// Worker count: hardware concurrency capped by BOOSTRP_THREADS when set.
inline unsigned default_thread_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("BOOSTRP_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

inline BoostConfig benchmark_config(Variant v, double mu, Index stages, Index max_leaves, RngSeed seed) {
  BoostConfig cfg;
  cfg.variant = v;
  cfg.loss = LossKind::l2;
  cfg.n_stages = stages;
  cfg.learning_rate = mu;
  cfg.projection = ProjectionScheme::subsample;
  cfg.q = 1;
  cfg.tree.max_leaves = max_leaves;
  cfg.tree.k_features = 0;
  cfg.seed = seed;
  return cfg;
}

/// Fits one variant and records its learning curve on `test`.
inline CellResult run_cell(Variant variant, const Dataset& train, const Dataset& test, const BenchmarkOptions& opt,
                           RngSeed seed) {
  CellResult cell;
  cell.variant = variant;
  double mu = opt.learning_rates.empty() ? 0.1 : opt.learning_rates.front();
  const Index budget =
      variant == Variant::single_target && opt.single_target_stages_per_output ? opt.stages * train.n_outputs() : opt.stages;
  Index stages = budget;

  if (opt.select_on_validation || opt.learning_rates.size() > 1) {
    const auto parts = split_dataset(train, {0.8, 0.2, 0.0}, derive_seed(seed, SeedStream::split, 1));
    double best = -std::numeric_limits<double>::infinity();
    for (const double rate : opt.learning_rates) {
      auto cfg = benchmark_config(variant, rate, budget, opt.max_leaves, seed);
      cfg.time_budget_seconds = opt.time_budget_seconds;
      const auto fitted = fit(parts.train, cfg);
      const auto trace =
          staged_scores(fitted.model, parts.validation.features(), parts.validation.targets(), macro_r2_score);
      for (std::size_t m = 0; m < trace.size(); ++m)
        if (trace[m] > best) {
          best = trace[m];
          mu = rate;
          stages = static_cast<Index>(m);
        }
    }
  }

  auto cfg = benchmark_config(variant, mu, stages, opt.max_leaves, seed);
  cfg.time_budget_seconds = opt.time_budget_seconds;
  const auto fitted = fit(train, cfg);
  cell.learning_rate = mu;
  cell.stages_fitted = static_cast<Index>(fitted.model.stages.size());
  cell.seconds = fitted.elapsed_seconds;
  cell.train_loss = fitted.train_loss;
  cell.test_r2 = staged_scores(fitted.model, test.features(), test.targets(), macro_r2_score);
  cell.final_r2 = cell.test_r2.back();
  return cell;
}

inline std::pair<Dataset, Dataset> benchmark_data(Family family, const BenchmarkOptions& opt, Index repetition) {
  const RngSeed base = derive_seed(opt.seed, SeedStream::benchmark, static_cast<std::uint64_t>(repetition));
  SyntheticSpec spec{family, opt.n_train, opt.d, opt.noise_sigma, derive_seed(base, SeedStream::synthetic, 1),
                     opt.noisy_outputs, opt.inputs};
  auto train = generate(spec);
  spec.n = opt.n_test;
  spec.seed = derive_seed(base, SeedStream::synthetic, 2);
  auto test = generate(spec);
  return {std::move(train), std::move(test)};
}

/// Runs every (family, variant, repetition) cell; cells run on up to
/// `opt.threads` workers and failures are recorded per cell.
inline std::vector<CellResult> run_benchmark(const BenchmarkOptions& opt) {
  struct Job {
    Family family;
    Variant variant;
    Index rep;
    std::size_t data;
  };
  std::vector<std::pair<Dataset, Dataset>> data;
  std::vector<Job> jobs;
  for (Index rep = 0; rep < opt.repetitions; ++rep)
    for (const auto fam : opt.families) {
      data.push_back(benchmark_data(fam, opt, rep));
      for (const auto v : opt.variants) jobs.push_back(Job{fam, v, rep, data.size() - 1});
    }

  std::vector<CellResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
      const auto& job = jobs[i];
      const RngSeed seed = derive_seed(opt.seed, SeedStream::benchmark,
                                       1000 + static_cast<std::uint64_t>(job.rep) * 16 +
                                           static_cast<std::uint64_t>(job.variant));
      CellResult cell;
      try {
        cell = run_cell(job.variant, data[job.data].first, data[job.data].second, opt, seed);
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
      cell.family = job.family;
      cell.variant = job.variant;
      cell.repetition = job.rep;
      results[i] = std::move(cell);
    }
  };
  const unsigned n_threads = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(jobs.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // Rank within each (family, repetition); failed cells rank last.
  std::map<std::pair<int, Index>, std::vector<CellResult*>> groups;
  for (auto& r : results) groups[{static_cast<int>(r.family), r.repetition}].push_back(&r);
  for (auto& [key, cells] : groups) {
    std::stable_sort(cells.begin(), cells.end(), [](const CellResult* a, const CellResult* b) {
      if (a->ok() != b->ok()) return a->ok();
      return a->final_r2 > b->final_r2;
    });
    for (std::size_t i = 0; i < cells.size(); ++i) cells[i]->rank = static_cast<int>(i + 1);
  }
  return results;
}

}  // namespace boostrp

#endif  // BOOSTRP_BENCHMARK_HPP
