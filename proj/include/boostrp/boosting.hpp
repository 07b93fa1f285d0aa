#ifndef BOOSTRP_BOOSTING_HPP
#define BOOSTRP_BOOSTING_HPP

#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "boostrp/data.hpp"
#include "boostrp/losses.hpp"
#include "boostrp/projections.hpp"
#include "boostrp/tree.hpp"

namespace boostrp {

/// Training drivers:
///  - single_target: one scalar tree per stage, outputs visited round-robin;
///  - gbmo: one vector-leaf tree fitted on the full gradient;
///  - gb_rpo: one scalar tree fitted on a fresh 1 x d projection of the
///    gradient, shared across outputs through per-output weights;
///  - gb_relabel_rpo: tree grown on a q x d projection, leaves relabelled with
///    the unprojected gradient.
enum class Variant { single_target, gbmo, gb_rpo, gb_relabel_rpo };

inline const char* to_string(Variant v) {
  switch (v) {
    case Variant::single_target: return "single-target";
    case Variant::gbmo: return "gbmo";
    case Variant::gb_rpo: return "gb-rpo";
    case Variant::gb_relabel_rpo: return "gb-relabel-rpo";
  }
  return "?";
}

inline Variant parse_variant(std::string_view s) {
  if (s == "single-target" || s == "single_target" || s == "st") return Variant::single_target;
  if (s == "gbmo" || s == "gb-mo") return Variant::gbmo;
  if (s == "gb-rpo" || s == "gb_rpo") return Variant::gb_rpo;
  if (s == "gb-relabel-rpo" || s == "gb_relabel_rpo") return Variant::gb_relabel_rpo;
  throw ConfigError("unknown variant '" + std::string(s) + "'");
}

struct BoostConfig {
  Variant variant = Variant::gbmo;
  LossKind loss = LossKind::l2;
  /// Maximum number of stages.
  Index n_stages = 100;
  double learning_rate = 0.1;
  ProjectionScheme projection = ProjectionScheme::subsample;
  /// Projected dimension for gb_relabel_rpo; must be 1 for gb_rpo.
  Index q = 1;
  TreeConfig tree{};
  RngSeed seed{};
  std::optional<double> time_budget_seconds;
  double rho_max = 1e3;
  BrentOptions brent{};
};

/// One fitted stage. `rho` already includes the learning rate.
struct Stage {
  RegressionTree tree;
  StepWeights rho;
  std::optional<ProjectionMatrix> projection;
  std::optional<Index> target_output;

  /// Scalar-leaf trees broadcast rho * g(x); vector-leaf trees use rho (.) g(x).
  bool scalar_leaves() const noexcept { return tree.n_outputs() == 1; }
};

namespace detail {

/// f += contribution of one stage, given that stage's tree output on the rows of f.
inline void add_stage(Matrix& f, const Stage& s, const Matrix& tree_out) {
  if (s.target_output) {
    const Index j = *s.target_output;
    f.col(j) += s.rho(j) * tree_out.col(0);
  } else if (s.scalar_leaves()) {
    for (Index j = 0; j < f.cols(); ++j) f.col(j) += s.rho(j) * tree_out.col(0);
  } else {
    for (Index j = 0; j < f.cols(); ++j) f.col(j) += s.rho(j) * tree_out.col(j);
  }
}

}  // namespace detail

/// rho_0 plus a sequence of stages.
struct BoostedEnsemble {
  Variant variant = Variant::gbmo;
  LossKind loss = LossKind::l2;
  Task task = Task::regression;
  double learning_rate = 1.0;
  Index n_features = 0;
  Vector rho0;
  std::vector<Stage> stages;

  Index n_outputs() const noexcept { return rho0.size(); }

  Matrix intercept(Index rows) const { return rho0.transpose().replicate(rows, 1); }

  void check_features(const Matrix& x) const {
    if (x.cols() != n_features)
      throw ShapeError("model expects " + std::to_string(n_features) + " features, got " + std::to_string(x.cols()));
  }

  /// Raw scores (regression values, or logistic half-log-odds).
  Matrix predict(const Matrix& x) const {
    check_features(x);
    Matrix f = intercept(x.rows());
    for (const auto& s : stages) detail::add_stage(f, s, s.tree.predict(x));
    return f;
  }

  /// 1 / (1 + exp(-2 score)), the inverse of the +-1 logistic link.
  Matrix predict_proba(const Matrix& x) const {
    if (loss != LossKind::logistic) throw ModeError("probabilities are only defined for logistic-loss models");
    return predict(x).unaryExpr([](double s) { return 1.0 / (1.0 + std::exp(-2.0 * s)); });
  }
};

struct FitResult {
  BoostedEnsemble model;
  /// Mean training loss after each prefix of stages; entry 0 is the intercept.
  std::vector<double> train_loss;
  /// Wall-clock seconds since fit start at the end of each prefix.
  std::vector<double> elapsed_seconds;
};

inline void validate(const BoostConfig& cfg, const Dataset& train) {
  if (!(cfg.learning_rate > 0.0 && cfg.learning_rate <= 1.0)) throw ConfigError("learning rate must lie in (0, 1]");
  if (cfg.n_stages < 0) throw ConfigError("number of stages must be nonnegative");
  if (cfg.q < 1) throw ConfigError("projection dimension q must be positive");
  if (cfg.variant == Variant::gb_rpo && cfg.q != 1) throw ConfigError("gb-rpo projects onto a single direction (q = 1)");
  if (cfg.loss == LossKind::logistic && train.task() != Task::multilabel)
    throw ConfigError("logistic loss requires a multilabel dataset");
  if (cfg.time_budget_seconds && !(*cfg.time_budget_seconds >= 0)) throw ConfigError("time budget must be nonnegative");
  if (!(cfg.rho_max > 0)) throw ConfigError("rho_max must be positive");
  if (cfg.variant == Variant::gb_relabel_rpo && cfg.projection == ProjectionScheme::subsample &&
      cfg.q > train.n_outputs())
    throw ConfigError("subsample projection needs q <= d");
  validate(cfg.tree, train.n_features());
}

inline FitResult fit(const Dataset& train, const BoostConfig& cfg) {
  validate(cfg, train);
  if (train.empty()) throw ShapeError("cannot fit on an empty dataset");
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  auto seconds = [&] { return std::chrono::duration<double>(clock::now() - t0).count(); };

  const Matrix& x = train.features();
  const Matrix& y = train.targets();
  const Index n = train.n_samples();
  const Index d = train.n_outputs();
  const Loss loss{cfg.loss, cfg.rho_max, cfg.brent};
  const SortedFeatures sorted(x);

  FitResult out;
  auto& model = out.model;
  model.variant = cfg.variant;
  model.loss = cfg.loss;
  model.task = train.task();
  model.learning_rate = cfg.learning_rate;
  model.n_features = train.n_features();
  model.rho0 = constant_minimizer(loss, y);

  Matrix f = model.intercept(n);
  out.train_loss.push_back(mean_loss(loss, y, f));
  out.elapsed_seconds.push_back(seconds());

  int zero_run = 0;
  for (Index m = 1; m <= cfg.n_stages; ++m) {
    if (cfg.time_budget_seconds && seconds() >= *cfg.time_budget_seconds) break;
    const auto counter = static_cast<std::uint64_t>(m);
    TreeConfig tree_cfg = cfg.tree;
    tree_cfg.seed = derive_seed(cfg.seed, SeedStream::tree, counter);
    const RngSeed proj_seed = derive_seed(cfg.seed, SeedStream::projection, counter);

    const Matrix grad = negative_gradient_matrix(loss, y, f);
    Stage stage;
    Matrix tree_out;
    switch (cfg.variant) {
      case Variant::single_target: {
        const Index j = (m - 1) % d;
        stage.target_output = j;
        stage.tree = fit_tree(x, grad.col(j), tree_cfg, sorted);
        tree_out = stage.tree.predict(x);
        stage.rho = StepWeights::Zero(d);
        stage.rho(j) = detail::fit_rho_column(loss, y.col(j), f.col(j), tree_out.col(0), static_cast<std::size_t>(j));
        break;
      }
      case Variant::gbmo: {
        stage.tree = fit_tree(x, grad, tree_cfg, sorted);
        tree_out = stage.tree.predict(x);
        stage.rho = fit_rho_per_output_vector_tree(loss, y, f, tree_out);
        break;
      }
      case Variant::gb_rpo: {
        stage.projection = draw_projection(cfg.projection, 1, d, proj_seed);
        stage.tree = fit_tree(x, project(*stage.projection, grad), tree_cfg, sorted);
        tree_out = stage.tree.predict(x);
        stage.rho = fit_rho_per_output_scalar_tree(loss, y, f, tree_out.col(0));
        break;
      }
      case Variant::gb_relabel_rpo: {
        stage.projection = draw_projection(cfg.projection, cfg.q, d, proj_seed);
        const auto grown = fit_tree(x, project(*stage.projection, grad), tree_cfg, sorted);
        stage.tree = relabel_leaves(grown, x, grad);
        tree_out = stage.tree.predict(x);
        stage.rho = fit_rho_per_output_vector_tree(loss, y, f, tree_out);
        break;
      }
    }
    const bool zero_stage = (stage.rho.array() == 0.0).all();
    stage.rho *= cfg.learning_rate;
    detail::add_stage(f, stage, tree_out);
    model.stages.push_back(std::move(stage));
    out.train_loss.push_back(mean_loss(loss, y, f));
    out.elapsed_seconds.push_back(seconds());

    zero_run = zero_stage ? zero_run + 1 : 0;
    if (zero_run >= 3) break;
  }
  return out;
}

inline Matrix predict(const BoostedEnsemble& model, const Matrix& x) { return model.predict(x); }
inline Matrix predict_proba(const BoostedEnsemble& model, const Matrix& x) { return model.predict_proba(x); }

using ScoreMetric = std::function<double(const Matrix& y_true, const Matrix& scores)>;

/// Metric after each prefix of stages (length = stages + 1), accumulated incrementally.
inline std::vector<double> staged_scores(const BoostedEnsemble& model, const Matrix& x, const Matrix& y_true,
                                         const ScoreMetric& metric) {
  model.check_features(x);
  if (y_true.rows() != x.rows() || y_true.cols() != model.n_outputs())
    throw ShapeError("staged_scores: target shape does not match inputs and model outputs");
  std::vector<double> trace;
  trace.reserve(model.stages.size() + 1);
  Matrix f = model.intercept(x.rows());
  trace.push_back(metric(y_true, f));
  for (const auto& s : model.stages) {
    detail::add_stage(f, s, s.tree.predict(x));
    trace.push_back(metric(y_true, f));
  }
  return trace;
}

/// The model truncated to its first `n` stages.
inline BoostedEnsemble truncated(const BoostedEnsemble& model, std::size_t n) {
  BoostedEnsemble m = model;
  if (n < m.stages.size()) m.stages.resize(n);
  return m;
}

}  // namespace boostrp

#endif  // BOOSTRP_BOOSTING_HPP
