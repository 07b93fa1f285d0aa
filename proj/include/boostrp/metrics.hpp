#ifndef BOOSTRP_METRICS_HPP
#define BOOSTRP_METRICS_HPP

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "boostrp/data.hpp"

namespace boostrp {

struct MetricReport {
  std::string name;
  double value = 0.0;
  /// Per-output components (macro-r2 only).
  std::optional<Vector> per_output;
  /// Rows left out of the average (LRAP rows without positive labels).
  Index excluded_rows = 0;
};

/// Label ranking average precision. Labels count as positive when > 0, so both
/// {0,1} and {-1,+1} encodings work. Ties count as ranked at or above, in both
/// numerator and denominator. Rows without positives are excluded.
inline MetricReport lrap(const Matrix& y_true, const Matrix& scores) {
  if (y_true.rows() != scores.rows() || y_true.cols() != scores.cols())
    throw ShapeError("lrap: label and score shapes differ");
  const Index n = y_true.rows();
  const Index d = y_true.cols();
  std::vector<Index> order(static_cast<std::size_t>(d));
  double total = 0.0;
  Index used = 0;
  for (Index i = 0; i < n; ++i) {
    const Index n_pos = (y_true.row(i).array() > 0).count();
    if (n_pos == 0) continue;
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(), [&](Index a, Index b) { return scores(i, a) > scores(i, b); });
    double row_sum = 0.0;
    Index pos_seen = 0;
    for (Index start = 0; start < d;) {
      Index end = start;
      Index pos_in_group = 0;
      while (end < d && scores(i, order[static_cast<std::size_t>(end)]) == scores(i, order[static_cast<std::size_t>(start)])) {
        if (y_true(i, order[static_cast<std::size_t>(end)]) > 0) ++pos_in_group;
        ++end;
      }
      pos_seen += pos_in_group;
      // Every label in the group sees `end` labels scored >= itself, `pos_seen` of them positive.
      row_sum += static_cast<double>(pos_in_group) * static_cast<double>(pos_seen) / static_cast<double>(end);
      start = end;
    }
    total += row_sum / static_cast<double>(n_pos);
    ++used;
  }
  if (used == 0) throw UndefinedMetricError("lrap: no row has a positive label");
  return MetricReport{"lrap", total / static_cast<double>(used), std::nullopt, n - used};
}

/// 1 - mean_j SSE_j / SST_j, with SST_j around the evaluation-set mean.
inline MetricReport macro_r2(const Matrix& y_true, const Matrix& y_pred) {
  if (y_true.rows() != y_pred.rows() || y_true.cols() != y_pred.cols())
    throw ShapeError("macro_r2: target and prediction shapes differ");
  if (y_true.rows() < 2) throw ShapeError("macro_r2 needs at least two samples");
  const Index d = y_true.cols();
  Vector r2(d);
  for (Index j = 0; j < d; ++j) {
    const double mean = y_true.col(j).mean();
    const double sst = (y_true.col(j).array() - mean).square().sum();
    if (!(sst > 0)) throw DegenerateOutputError("macro_r2: constant true output", static_cast<std::size_t>(j));
    const double sse = (y_true.col(j) - y_pred.col(j)).squaredNorm();
    r2(j) = 1.0 - sse / sst;
  }
  return MetricReport{"macro_r2", r2.mean(), r2, 0};
}

inline double lrap_score(const Matrix& y_true, const Matrix& scores) { return lrap(y_true, scores).value; }
inline double macro_r2_score(const Matrix& y_true, const Matrix& y_pred) { return macro_r2(y_true, y_pred).value; }

enum class MetricKind { lrap, macro_r2 };

inline MetricKind parse_metric(std::string_view s) {
  if (s == "lrap") return MetricKind::lrap;
  if (s == "macro-r2" || s == "macro_r2" || s == "r2") return MetricKind::macro_r2;
  throw ConfigError("unknown metric '" + std::string(s) + "'");
}

inline MetricReport evaluate(MetricKind kind, const Matrix& y_true, const Matrix& scores) {
  return kind == MetricKind::lrap ? lrap(y_true, scores) : macro_r2(y_true, scores);
}

}  // namespace boostrp

#endif  // BOOSTRP_METRICS_HPP
