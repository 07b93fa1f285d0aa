// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
//
// The benchmark criteria (2-4) draw friedman1 inputs from U[0, 1]; criterion 2
// is also reported on standard normal inputs as an informational line.

#include <chrono>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <string>

#include "boostrp/boostrp.hpp"
#include "properties.hpp"

using namespace boostrp;

namespace {

int failures = 0;

void report(int id, const char* title, const props::Outcome& o, double seconds) {
  std::printf("%s criterion %d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), seconds);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

void run(int id, const char* title, const std::function<props::Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  props::Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  report(id, title, o, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

BenchmarkOptions friedman(InputDistribution inputs) {
  BenchmarkOptions opt;
  opt.inputs = inputs;
  opt.threads = 1;
  opt.seed = RngSeed{2024};
  return opt;
}

/// Mean final macro-r2 per variant over repetitions.
std::map<Variant, double> mean_final(const std::vector<CellResult>& cells) {
  std::map<Variant, double> sum;
  std::map<Variant, int> count;
  for (const auto& c : cells) {
    if (!c.ok()) throw Error("benchmark cell failed: " + c.error);
    sum[c.variant] += c.final_r2;
    ++count[c.variant];
  }
  for (auto& [v, s] : sum) s /= count[v];
  return sum;
}

props::Outcome ind_ordering(InputDistribution inputs, Index repetitions) {
  auto opt = friedman(inputs);
  opt.families = {Family::ind};
  opt.variants = {Variant::single_target, Variant::gb_rpo, Variant::gbmo};
  opt.stages = 2000;
  opt.single_target_stages_per_output = true;
  opt.select_on_validation = true;
  opt.repetitions = repetitions;
  const auto r2 = mean_final(run_benchmark(opt));
  const double st = r2.at(Variant::single_target), rpo = r2.at(Variant::gb_rpo), mo = r2.at(Variant::gbmo);
  char buf[256];
  std::snprintf(buf, sizeof buf, "mean over %ld reps: single-target %.3f, gb-rpo %.3f, gbmo %.3f",
                static_cast<long>(repetitions), st, rpo, mo);
  return {st >= 0.78 && mo <= 0.72 && st > rpo && rpo > mo, buf};
}

props::Outcome chain_group_advantage() {
  auto opt = friedman(InputDistribution::uniform);
  opt.families = {Family::chain, Family::group};
  opt.variants = {Variant::single_target, Variant::gb_rpo};
  opt.stages = 1000;
  opt.repetitions = 5;
  const auto cells = run_benchmark(opt);
  std::map<std::pair<Family, Index>, std::map<Variant, double>> final;
  for (const auto& c : cells) {
    if (!c.ok()) throw Error("benchmark cell failed: " + c.error);
    final[{c.family, c.repetition}][c.variant] = c.final_r2;
  }
  std::map<Family, int> wins;
  for (const auto& [key, v] : final) wins[key.first] += v.at(Variant::gb_rpo) >= v.at(Variant::single_target);
  char buf[256];
  std::snprintf(buf, sizeof buf, "gb-rpo >= single-target after 1000 stages in %d/5 chain and %d/5 group reps",
                wins[Family::chain], wins[Family::group]);
  return {wins[Family::chain] >= 4 && wins[Family::group] >= 4, buf};
}

props::Outcome convergence_speed() {
  auto opt = friedman(InputDistribution::uniform);
  opt.families = {Family::chain, Family::group};
  opt.repetitions = 5;
  // Each driver gets a stage cap large enough to reach the level; only the
  // time of first arrival matters.
  opt.variants = {Variant::gb_rpo};
  opt.stages = 2000;
  const auto rpo = run_benchmark(opt);
  opt.variants = {Variant::single_target};
  opt.stages = 16000;
  const auto st = run_benchmark(opt);
  const double never = std::numeric_limits<double>::infinity();
  std::map<Family, int> faster;
  std::string times;
  for (std::size_t i = 0; i < rpo.size(); ++i) {
    const auto& a = rpo[i];
    const auto& b = st[i];
    if (!a.ok() || !b.ok()) throw Error("benchmark cell failed");
    const double level = a.family == Family::chain ? 0.55 : 0.80;
    const double ta = a.time_to_reach(level).value_or(never), tb = b.time_to_reach(level).value_or(never);
    faster[a.family] += ta < tb;
    char buf[96];
    std::snprintf(buf, sizeof buf, " %s%ld %.3g/%.3g", to_string(a.family), static_cast<long>(a.repetition), ta, tb);
    times += buf;
  }
  char buf[256];
  std::snprintf(buf, sizeof buf, "gb-rpo first to reach the level in %d/5 chain and %d/5 group reps; seconds gb-rpo/st:",
                faster[Family::chain], faster[Family::group]);
  return {faster[Family::chain] >= 4 && faster[Family::group] >= 4, buf + times};
}

}  // namespace

int main() {
  run(1, "training-loss monotonicity", [] { return props::loss_monotonicity({0.1, 1.0}); });
  run(2, "friedman1-ind ordering", [] { return ind_ordering(InputDistribution::uniform, 3); });
  {
    const auto t0 = std::chrono::steady_clock::now();
    props::Outcome o;
    try {
      o = ind_ordering(InputDistribution::normal, 1);
    } catch (const std::exception& e) {
      o = {false, e.what()};
    }
    std::printf("INFO criterion 2 on standard normal inputs (not gating): %s, bounds %s (%.1fs)\n", o.detail.c_str(),
                o.pass ? "met" : "not met",
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  run(3, "friedman1 chain/group advantage", chain_group_advantage);
  run(4, "convergence-speed direction", convergence_speed);
  run(5, "random projection distance and variance preservation", props::jl_property);
  run(6, "metric oracle equivalence", [] { return props::metric_oracles(); });
  run(7, "tree split optimality", [] { return props::split_optimality(); });
  run(8, "l2 closed-form step versus brent", [] { return props::rho_closed_form(); });
  run(9, "relabelled projections approach gbmo", [] { return props::relabel_limit(); });
  run(10, "model persistence round trip", [] { return props::model_roundtrip(); });
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
