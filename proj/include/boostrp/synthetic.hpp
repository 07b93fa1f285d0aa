#ifndef BOOSTRP_SYNTHETIC_HPP
#define BOOSTRP_SYNTHETIC_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "boostrp/data.hpp"

namespace boostrp {

/// Output correlation structures built on friedman1:
///  chain: y_1 = f(x) + e_1, y_j = y_{j-1} + e_j
///  group: y_j = f(x) + e_j
///  ind:   y_j = f(x[5(j-1) .. 5j-1]) + e_j   (disjoint feature blocks)
enum class Family { chain, group, ind };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::chain: return "chain";
    case Family::group: return "group";
    case Family::ind: return "ind";
  }
  return "?";
}

inline Family parse_family(std::string_view s) {
  if (s == "chain") return Family::chain;
  if (s == "group") return Family::group;
  if (s == "ind") return Family::ind;
  throw ConfigError("unknown synthetic family '" + std::string(s) + "'");
}

/// Law of the input features. `normal` is the default; `uniform` draws from
/// U[0, 1], the classical friedman1 design.
enum class InputDistribution { normal, uniform };

inline const char* to_string(InputDistribution d) { return d == InputDistribution::normal ? "normal" : "uniform"; }

inline InputDistribution parse_input_distribution(std::string_view s) {
  if (s == "normal") return InputDistribution::normal;
  if (s == "uniform") return InputDistribution::uniform;
  throw ConfigError("unknown input distribution '" + std::string(s) + "'");
}

struct SyntheticSpec {
  Family family = Family::group;
  Index n = 300;
  Index d = 16;
  double noise_sigma = 1.0;
  RngSeed seed{};
  /// Appends d outputs, each an independent row permutation of an original output.
  bool add_permuted_noise_outputs = false;
  InputDistribution inputs = InputDistribution::normal;
};

/// 10 sin(pi x1 x2) + 20 (x3 - 1/2)^2 + 10 x4 + 5 x5
template <typename V>
double friedman_base(const V& x) {
  return 10.0 * std::sin(std::numbers::pi * x[0] * x[1]) + 20.0 * (x[2] - 0.5) * (x[2] - 0.5) + 10.0 * x[3] +
         5.0 * x[4];
}

inline Index synthetic_feature_count(Family f, Index d) { return f == Family::ind ? 5 * d : 5; }

/// Inputs are standard normal (or U[0,1]); noise is N(0, sigma^2) per output.
inline Dataset generate(const SyntheticSpec& spec) {
  if (spec.n < 1 || spec.d < 1) throw ConfigError("synthetic data needs n >= 1 and d >= 1");
  if (!(spec.noise_sigma >= 0)) throw ConfigError("noise sigma must be nonnegative");
  const Index n = spec.n;
  const Index d = spec.d;
  const Index p = synthetic_feature_count(spec.family, d);
  auto rng = make_rng(derive_seed(spec.seed, SeedStream::synthetic, 0));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  Matrix x(n, p);
  Matrix y(n, spec.add_permuted_noise_outputs ? 2 * d : d);
  std::vector<double> row(static_cast<std::size_t>(p));
  for (Index i = 0; i < n; ++i) {
    for (Index f = 0; f < p; ++f) {
      row[static_cast<std::size_t>(f)] = spec.inputs == InputDistribution::normal ? normal(rng) : uniform(rng);
      x(i, f) = row[static_cast<std::size_t>(f)];
    }
    const double base = spec.family == Family::ind ? 0.0 : friedman_base(row);
    for (Index j = 0; j < d; ++j) {
      const double eps = spec.noise_sigma * normal(rng);
      switch (spec.family) {
        case Family::chain: y(i, j) = (j == 0 ? base : y(i, j - 1)) + eps; break;
        case Family::group: y(i, j) = base + eps; break;
        case Family::ind: y(i, j) = friedman_base(row.data() + 5 * j) + eps; break;
      }
    }
  }
  if (spec.add_permuted_noise_outputs) {
    auto prng = make_rng(derive_seed(spec.seed, SeedStream::permutation, 0));
    std::vector<Index> perm(static_cast<std::size_t>(n));
    for (Index j = 0; j < d; ++j) {
      std::iota(perm.begin(), perm.end(), Index{0});
      std::shuffle(perm.begin(), perm.end(), prng);
      for (Index i = 0; i < n; ++i) y(i, d + j) = y(perm[static_cast<std::size_t>(i)], j);
    }
  }

  std::vector<std::string> fnames, tnames;
  for (Index f = 0; f < p; ++f) fnames.push_back("x" + std::to_string(f + 1));
  for (Index j = 0; j < y.cols(); ++j) tnames.push_back("y" + std::to_string(j + 1));
  return Dataset(std::move(x), std::move(y), Task::regression, std::move(fnames), std::move(tnames));
}

}  // namespace boostrp

#endif  // BOOSTRP_SYNTHETIC_HPP
