#ifndef BOOSTRP_LOSSES_HPP
#define BOOSTRP_LOSSES_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "boostrp/brent.hpp"
#include "boostrp/data.hpp"

namespace boostrp {

enum class LossKind { l2, l1, logistic };

inline const char* to_string(LossKind k) {
  switch (k) {
    case LossKind::l2: return "l2";
    case LossKind::l1: return "l1";
    case LossKind::logistic: return "logistic";
  }
  return "?";
}

inline LossKind parse_loss(std::string_view s) {
  if (s == "l2" || s == "square") return LossKind::l2;
  if (s == "l1" || s == "absolute") return LossKind::l1;
  if (s == "logistic") return LossKind::logistic;
  throw ConfigError("unknown loss '" + std::string(s) + "'");
}

/// Per-output multipliers of one boosting stage.
using StepWeights = Vector;

/// Multi-output loss. All three kinds are sums of a scalar loss over outputs,
/// which is what lets step lengths be searched one output at a time.
struct Loss {
  LossKind kind = LossKind::l2;
  /// Clamp on |rho_j| for numeric line searches.
  double rho_max = 1e3;
  BrentOptions brent{};
};

namespace detail {

/// log(1 + exp(z)) without overflow.
inline double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

inline double scalar_loss(LossKind k, double y, double f) {
  switch (k) {
    case LossKind::l2: return 0.5 * (y - f) * (y - f);
    case LossKind::l1: return std::abs(y - f);
    case LossKind::logistic: return softplus(-2.0 * y * f);
  }
  return 0.0;
}

inline double scalar_negative_gradient(LossKind k, double y, double f) {
  switch (k) {
    case LossKind::l2: return y - f;
    case LossKind::l1: return static_cast<double>((y > f) - (y < f));
    case LossKind::logistic: return 2.0 * y / (1.0 + std::exp(2.0 * y * f));
  }
  return 0.0;
}

template <typename A, typename B>
void check_same_shape(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError(std::string(what) + ": shape " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                     " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
}

}  // namespace detail

/// l(y, y') for a single sample; works on row or column vectors.
template <typename A, typename B>
double loss_value(const Loss& loss, const Eigen::MatrixBase<A>& y, const Eigen::MatrixBase<B>& y_pred) {
  if (y.size() != y_pred.size())
    throw ShapeError("loss_value: " + std::to_string(y.size()) + " targets vs " + std::to_string(y_pred.size()) +
                     " predictions");
  double s = 0.0;
  for (Index j = 0; j < y.size(); ++j) s += detail::scalar_loss(loss.kind, y(j), y_pred(j));
  return s;
}

template <typename A, typename B>
Vector negative_gradient(const Loss& loss, const Eigen::MatrixBase<A>& y, const Eigen::MatrixBase<B>& y_pred) {
  if (y.size() != y_pred.size())
    throw ShapeError("negative_gradient: " + std::to_string(y.size()) + " targets vs " +
                     std::to_string(y_pred.size()) + " predictions");
  Vector g(y.size());
  for (Index j = 0; j < y.size(); ++j) g(j) = detail::scalar_negative_gradient(loss.kind, y(j), y_pred(j));
  return g;
}

/// Row-wise negative gradient for the whole training set (n x d).
inline Matrix negative_gradient_matrix(const Loss& loss, const Matrix& y, const Matrix& f) {
  detail::check_same_shape(y, f, "negative_gradient");
  if (loss.kind == LossKind::l2) return y - f;
  Matrix g(y.rows(), y.cols());
  for (Index j = 0; j < y.cols(); ++j)
    for (Index i = 0; i < y.rows(); ++i) g(i, j) = detail::scalar_negative_gradient(loss.kind, y(i, j), f(i, j));
  return g;
}

/// Sum of the loss over all samples.
inline double total_loss(const Loss& loss, const Matrix& y, const Matrix& f) {
  detail::check_same_shape(y, f, "total_loss");
  if (loss.kind == LossKind::l2) return 0.5 * (y - f).squaredNorm();
  if (loss.kind == LossKind::l1) return (y - f).cwiseAbs().sum();
  double s = 0.0;
  for (Index j = 0; j < y.cols(); ++j)
    for (Index i = 0; i < y.rows(); ++i) s += detail::softplus(-2.0 * y(i, j) * f(i, j));
  return s;
}

inline double mean_loss(const Loss& loss, const Matrix& y, const Matrix& f) {
  return y.rows() == 0 ? 0.0 : total_loss(loss, y, f) / static_cast<double>(y.rows());
}

/// Intercept rho_0: per-output mean (l2), lower median (l1), or
/// log(n_pos / n_neg) (logistic, the tabulated starting model as printed).
inline Vector constant_minimizer(const Loss& loss, const Matrix& targets) {
  const Index n = targets.rows();
  if (n < 1) throw ShapeError("constant_minimizer needs at least one sample");
  Vector rho(targets.cols());
  for (Index j = 0; j < targets.cols(); ++j) {
    switch (loss.kind) {
      case LossKind::l2: rho(j) = targets.col(j).mean(); break;
      case LossKind::l1: {
        std::vector<double> col(targets.col(j).data(), targets.col(j).data() + n);
        const auto mid = col.begin() + (n - 1) / 2;
        std::nth_element(col.begin(), mid, col.end());
        rho(j) = *mid;
        break;
      }
      case LossKind::logistic: {
        const auto pos = (targets.col(j).array() > 0).count();
        const auto neg = n - pos;
        if (pos == 0 || neg == 0)
          throw DegenerateOutputError("logistic intercept needs both classes", static_cast<std::size_t>(j));
        rho(j) = std::log(static_cast<double>(pos) / static_cast<double>(neg));
        break;
      }
    }
  }
  return rho;
}

namespace detail {

/// sum_i l(y_i, f_i + rho h_i) for one output column.
template <typename Y, typename F, typename H>
double column_objective(LossKind k, const Y& y, const F& f, const H& h, double rho) {
  double s = 0.0;
  for (Index i = 0; i < y.size(); ++i) s += scalar_loss(k, y(i), f(i) + rho * h(i));
  return s;
}

/// Optimal rho for one output along direction h.
template <typename Y, typename F, typename H>
double fit_rho_column(const Loss& loss, const Y& y, const F& f, const H& h, std::size_t output) {
  const double hh = h.squaredNorm();
  if (hh == 0.0) return 0.0;
  double rho = 0.0;
  if (loss.kind == LossKind::l2) {
    rho = (y - f).dot(h) / hh;
  } else {
    auto obj = [&](double r) { return column_objective(loss.kind, y, f, h, r); };
    try {
      rho = brent_minimize(obj, -loss.rho_max, loss.rho_max, loss.brent).x;
    } catch (const ConvergenceError& e) {
      throw LineSearchError(e.what(), output);
    }
  }
  // A step that does not beat rho = 0 is dropped; this keeps the training loss
  // non-increasing even when the line search stops short.
  if (!std::isfinite(rho) || column_objective(loss.kind, y, f, h, rho) > column_objective(loss.kind, y, f, h, 0.0))
    return 0.0;
  return rho;
}

}  // namespace detail

/// Step weights for a stage whose tree predicts one value per sample: rho_j
/// multiplies the same tree output for every output j.
inline StepWeights fit_rho_per_output_scalar_tree(const Loss& loss, const Matrix& targets, const Matrix& current_pred,
                                                  const Vector& tree_out) {
  detail::check_same_shape(targets, current_pred, "fit_rho");
  if (tree_out.size() != targets.rows())
    throw ShapeError("fit_rho: tree output has " + std::to_string(tree_out.size()) + " rows, targets have " +
                     std::to_string(targets.rows()));
  StepWeights rho(targets.cols());
  for (Index j = 0; j < targets.cols(); ++j)
    rho(j) = detail::fit_rho_column(loss, targets.col(j), current_pred.col(j), tree_out, static_cast<std::size_t>(j));
  return rho;
}

/// Step weights for a vector-leaf stage: rho_j scales tree output column j.
inline StepWeights fit_rho_per_output_vector_tree(const Loss& loss, const Matrix& targets, const Matrix& current_pred,
                                                  const Matrix& tree_out) {
  detail::check_same_shape(targets, current_pred, "fit_rho");
  detail::check_same_shape(targets, tree_out, "fit_rho");
  StepWeights rho(targets.cols());
  for (Index j = 0; j < targets.cols(); ++j)
    rho(j) = detail::fit_rho_column(loss, targets.col(j), current_pred.col(j), tree_out.col(j),
                                    static_cast<std::size_t>(j));
  return rho;
}

}  // namespace boostrp

#endif  // BOOSTRP_LOSSES_HPP
