// Independent reference implementations used as test oracles. They follow the
// textbook definitions directly and share no code with the library.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Matrix = Eigen::MatrixXd;

/// Sum over columns of the squared deviations from the column mean, on the given rows.
inline double sse(const Matrix& y, const std::vector<int>& rows) {
  if (rows.empty()) return 0.0;
  double total = 0.0;
  for (int j = 0; j < y.cols(); ++j) {
    double mean = 0.0;
    for (int i : rows) mean += y(i, j);
    mean /= static_cast<double>(rows.size());
    for (int i : rows) total += (y(i, j) - mean) * (y(i, j) - mean);
  }
  return total;
}

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double gain = -std::numeric_limits<double>::infinity();
};

/// Enumerates every (feature, midpoint threshold) and returns the best
/// variance reduction, with ties going to the lowest feature then threshold.
inline Split best_split(const Matrix& x, const Matrix& y, int min_leaf = 1) {
  std::vector<int> all(static_cast<std::size_t>(x.rows()));
  for (int i = 0; i < x.rows(); ++i) all[static_cast<std::size_t>(i)] = i;
  const double parent = sse(y, all);
  Split best;
  for (int f = 0; f < x.cols(); ++f) {
    std::set<double> values;
    for (int i = 0; i < x.rows(); ++i) values.insert(x(i, f));
    std::vector<double> v(values.begin(), values.end());
    for (std::size_t t = 0; t + 1 < v.size(); ++t) {
      const double thr = (v[t] + v[t + 1]) / 2.0;
      std::vector<int> l, r;
      for (int i = 0; i < x.rows(); ++i) (x(i, f) <= thr ? l : r).push_back(i);
      if (static_cast<int>(l.size()) < min_leaf || static_cast<int>(r.size()) < min_leaf) continue;
      const double gain = parent - sse(y, l) - sse(y, r);
      if (best.feature < 0 || gain > best.gain + 1e-12 * std::max(1.0, std::abs(best.gain))) best = Split{f, thr, gain};
    }
  }
  return best;
}

/// Gain of a given split, computed directly.
inline double split_gain(const Matrix& x, const Matrix& y, int f, double thr) {
  std::vector<int> all, l, r;
  for (int i = 0; i < x.rows(); ++i) {
    all.push_back(i);
    (x(i, f) <= thr ? l : r).push_back(i);
  }
  return sse(y, all) - sse(y, l) - sse(y, r);
}

/// LRAP straight from the definition: for each positive label j, the share of
/// positives among labels scored >= score_j.
inline double lrap(const Matrix& y, const Matrix& s) {
  double total = 0.0;
  int rows = 0;
  for (int i = 0; i < y.rows(); ++i) {
    int n_pos = 0;
    for (int j = 0; j < y.cols(); ++j) n_pos += y(i, j) > 0;
    if (n_pos == 0) continue;
    double row = 0.0;
    for (int j = 0; j < y.cols(); ++j) {
      if (y(i, j) <= 0) continue;
      int above = 0, pos_above = 0;
      for (int k = 0; k < y.cols(); ++k)
        if (s(i, k) >= s(i, j)) {
          ++above;
          pos_above += y(i, k) > 0;
        }
      row += static_cast<double>(pos_above) / above;
    }
    total += row / n_pos;
    ++rows;
  }
  return total / rows;
}

inline double macro_r2(const Matrix& y, const Matrix& p) {
  double sum = 0.0;
  for (int j = 0; j < y.cols(); ++j) {
    double mean = 0.0;
    for (int i = 0; i < y.rows(); ++i) mean += y(i, j);
    mean /= static_cast<double>(y.rows());
    double num = 0.0, den = 0.0;
    for (int i = 0; i < y.rows(); ++i) {
      num += (y(i, j) - p(i, j)) * (y(i, j) - p(i, j));
      den += (y(i, j) - mean) * (y(i, j) - mean);
    }
    sum += num / den;
  }
  return 1.0 - sum / static_cast<double>(y.cols());
}

/// Minimizes a convex function on [lo, hi] by a coarse grid followed by
/// ternary search around the best grid point.
inline double convex_argmin(const std::function<double(double)>& f, double lo, double hi) {
  const int grid = 2000;
  double best_x = lo, best_f = f(lo);
  for (int k = 1; k <= grid; ++k) {
    const double x = lo + (hi - lo) * k / grid;
    const double v = f(x);
    if (v < best_f) best_f = v, best_x = x;
  }
  const double step = (hi - lo) / grid;
  double a = std::max(lo, best_x - step), b = std::min(hi, best_x + step);
  for (int it = 0; it < 200; ++it) {
    const double m1 = a + (b - a) / 3, m2 = b - (b - a) / 3;
    if (f(m1) <= f(m2))
      b = m2;
    else
      a = m1;
  }
  return (a + b) / 2;
}

inline Matrix random_matrix(int rows, int cols, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = n(rng);
  return m;
}

inline Matrix random_labels(int rows, int cols, std::mt19937_64& rng) {
  std::bernoulli_distribution b(0.5);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = b(rng) ? 1.0 : -1.0;
  return m;
}

}  // namespace oracle
