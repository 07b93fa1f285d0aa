#ifndef BOOSTRP_PROJECTIONS_HPP
#define BOOSTRP_PROJECTIONS_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "boostrp/data.hpp"

namespace boostrp {

enum class ProjectionScheme { gaussian, achlioptas, sparse_rademacher, subsample };

inline const char* to_string(ProjectionScheme s) {
  switch (s) {
    case ProjectionScheme::gaussian: return "gaussian";
    case ProjectionScheme::achlioptas: return "achlioptas";
    case ProjectionScheme::sparse_rademacher: return "sparse_rademacher";
    case ProjectionScheme::subsample: return "subsample";
  }
  return "?";
}

inline ProjectionScheme parse_projection(std::string_view s) {
  if (s == "gaussian") return ProjectionScheme::gaussian;
  if (s == "achlioptas") return ProjectionScheme::achlioptas;
  if (s == "sparse_rademacher" || s == "sparse-rademacher" || s == "sparse") return ProjectionScheme::sparse_rademacher;
  if (s == "subsample") return ProjectionScheme::subsample;
  throw ConfigError("unknown projection scheme '" + std::string(s) + "'");
}

/// A q x d random linear map. Entries are materialized densely whatever the
/// scheme; `scheme` and `seed` are kept so the matrix can be regenerated.
struct ProjectionMatrix {
  ProjectionScheme scheme = ProjectionScheme::gaussian;
  RngSeed seed{};
  Matrix entries;

  Index q() const noexcept { return entries.rows(); }
  Index d() const noexcept { return entries.cols(); }
};

namespace detail {

/// Entries in {-sqrt(s/q), 0, +sqrt(s/q)} with probabilities {1/2s, 1-1/s, 1/2s}.
inline Matrix draw_rademacher(Index q, Index d, double s, Rng& rng) {
  const double mag = std::sqrt(s / static_cast<double>(q));
  const double half = 1.0 / (2.0 * s);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix m(q, d);
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i < q; ++i) {
      const double r = u(rng);
      m(i, j) = r < half ? -mag : (r < 2.0 * half ? mag : 0.0);
    }
  return m;
}

}  // namespace detail

inline ProjectionMatrix draw_projection(ProjectionScheme scheme, Index q, Index d, RngSeed seed) {
  if (q < 1 || d < 1) throw ConfigError("projection dimensions must be positive");
  auto rng = make_rng(seed);
  ProjectionMatrix phi{scheme, seed, Matrix()};
  switch (scheme) {
    case ProjectionScheme::gaussian: {
      std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(q)));
      phi.entries.resize(q, d);
      for (Index j = 0; j < d; ++j)
        for (Index i = 0; i < q; ++i) phi.entries(i, j) = normal(rng);
      break;
    }
    case ProjectionScheme::achlioptas:
      phi.entries = detail::draw_rademacher(q, d, 3.0, rng);
      break;
    case ProjectionScheme::sparse_rademacher:
      phi.entries = detail::draw_rademacher(q, d, std::sqrt(static_cast<double>(d)), rng);
      break;
    case ProjectionScheme::subsample: {
      if (q > d)
        throw ConfigError("subsample projection needs q <= d (q=" + std::to_string(q) + ", d=" + std::to_string(d) +
                          ")");
      // Partial Fisher-Yates: q distinct rows of the identity.
      std::vector<Index> idx(static_cast<std::size_t>(d));
      std::iota(idx.begin(), idx.end(), Index{0});
      for (Index i = 0; i < q; ++i) {
        std::uniform_int_distribution<Index> pick(i, d - 1);
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(pick(rng))]);
      }
      phi.entries = Matrix::Zero(q, d);
      for (Index i = 0; i < q; ++i) phi.entries(i, idx[static_cast<std::size_t>(i)]) = 1.0;
      break;
    }
  }
  return phi;
}

/// Row i of the result is phi * (row i of `vectors`).
inline Matrix project(const ProjectionMatrix& phi, const Matrix& vectors) {
  if (vectors.cols() != phi.d())
    throw ShapeError("project: input has " + std::to_string(vectors.cols()) + " columns, projection expects " +
                     std::to_string(phi.d()));
  if (phi.scheme == ProjectionScheme::subsample) {
    Matrix out(vectors.rows(), phi.q());
    for (Index r = 0; r < phi.q(); ++r) {
      Index col = 0;
      phi.entries.row(r).maxCoeff(&col);
      out.col(r) = vectors.col(col);
    }
    return out;
  }
  return vectors * phi.entries.transpose();
}

/// Index of the selected output for a one-row subsample projection.
inline Index subsampled_output(const ProjectionMatrix& phi) {
  Index col = 0;
  phi.entries.row(0).maxCoeff(&col);
  return col;
}

}  // namespace boostrp

#endif  // BOOSTRP_PROJECTIONS_HPP
