#include <cmath>

#include <gtest/gtest.h>

#include "boostrp/projections.hpp"
#include "properties.hpp"

using namespace boostrp;

TEST(Projection, SubsampleIsOneHot) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto phi = draw_projection(ProjectionScheme::subsample, 1, 3, RngSeed{s});
    EXPECT_EQ((phi.entries.array() == 1.0).count(), 1);
    EXPECT_EQ((phi.entries.array() == 0.0).count(), 2);
  }
}

TEST(Projection, SubsampleRowsAreDistinct) {
  const auto phi = draw_projection(ProjectionScheme::subsample, 6, 6, RngSeed{4});
  EXPECT_EQ(phi.entries.colwise().sum(), Eigen::RowVectorXd::Ones(6));
  EXPECT_EQ(phi.entries.rowwise().sum(), Vector::Ones(6));
}

TEST(Projection, SubsampleWithTooManyRowsIsConfigError) {
  EXPECT_THROW(draw_projection(ProjectionScheme::subsample, 4, 3, RngSeed{1}), ConfigError);
}

TEST(Projection, GaussianMoments) {
  const auto phi = draw_projection(ProjectionScheme::gaussian, 4, 10000, RngSeed{2});
  const double mean = phi.entries.mean();
  const double var = (phi.entries.array() - mean).square().mean();
  EXPECT_LT(std::abs(mean), 0.005);
  EXPECT_NEAR(var, 0.25, 0.25 * 0.05);
}

TEST(Projection, AchlioptasSupportAndSparsity) {
  const auto phi = draw_projection(ProjectionScheme::achlioptas, 2, 10000, RngSeed{3});
  const double mag = std::sqrt(1.5);
  Index zeros = 0;
  for (Index i = 0; i < phi.entries.size(); ++i) {
    const double v = phi.entries.data()[i];
    if (v == 0.0)
      ++zeros;
    else
      EXPECT_EQ(std::abs(v), mag);
  }
  EXPECT_NEAR(static_cast<double>(zeros) / static_cast<double>(phi.entries.size()), 2.0 / 3.0, 0.02);
}

TEST(Projection, SparseRademacherUsesSqrtD) {
  const Index q = 3, d = 400;
  const auto phi = draw_projection(ProjectionScheme::sparse_rademacher, q, d, RngSeed{4});
  const double s = std::sqrt(static_cast<double>(d));
  const double mag = std::sqrt(s / static_cast<double>(q));
  Index zeros = 0;
  for (Index i = 0; i < phi.entries.size(); ++i) {
    const double v = phi.entries.data()[i];
    if (v == 0.0)
      ++zeros;
    else
      EXPECT_EQ(std::abs(v), mag);
  }
  EXPECT_NEAR(static_cast<double>(zeros) / static_cast<double>(phi.entries.size()), 1.0 - 1.0 / s, 0.02);
}

TEST(Projection, Deterministic) {
  for (auto scheme : {ProjectionScheme::gaussian, ProjectionScheme::achlioptas, ProjectionScheme::sparse_rademacher,
                      ProjectionScheme::subsample}) {
    const auto a = draw_projection(scheme, 3, 9, RngSeed{77});
    const auto b = draw_projection(scheme, 3, 9, RngSeed{77});
    EXPECT_EQ(a.entries, b.entries);
  }
}

TEST(Project, SubsampleSelectsCoordinate) {
  ProjectionMatrix phi{ProjectionScheme::subsample, RngSeed{}, Matrix::Zero(1, 3)};
  phi.entries(0, 1) = 1.0;
  Matrix rows(2, 3);
  rows << 1, 2, 3, 4, 5, 6;
  const Matrix out = project(phi, rows);
  EXPECT_EQ(out(0, 0), 2.0);
  EXPECT_EQ(out(1, 0), 5.0);
  EXPECT_EQ(subsampled_output(phi), 1);
}

TEST(Project, ZeroAndIdentity) {
  const auto phi = draw_projection(ProjectionScheme::gaussian, 3, 3, RngSeed{1});
  EXPECT_EQ(project(phi, Matrix::Zero(4, 3)), Matrix::Zero(4, 3));
  ProjectionMatrix id{ProjectionScheme::gaussian, RngSeed{}, Matrix::Identity(3, 3)};
  std::mt19937_64 rng(1);
  const Matrix v = oracle::random_matrix(5, 3, rng);
  EXPECT_EQ(project(id, v), v);
}

TEST(Project, ShapeMismatch) {
  const auto phi = draw_projection(ProjectionScheme::gaussian, 2, 3, RngSeed{1});
  EXPECT_THROW(project(phi, Matrix::Zero(4, 2)), ShapeError);
}

TEST(Project, GeneralSchemeMatchesMatrixProduct) {
  std::mt19937_64 rng(2);
  const Matrix v = oracle::random_matrix(7, 5, rng);
  const auto phi = draw_projection(ProjectionScheme::achlioptas, 3, 5, RngSeed{8});
  const Matrix out = project(phi, v);
  for (Index i = 0; i < 7; ++i)
    for (Index r = 0; r < 3; ++r) {
      double s = 0;
      for (Index j = 0; j < 5; ++j) s += phi.entries(r, j) * v(i, j);
      EXPECT_NEAR(out(i, r), s, 1e-12);
    }
}

TEST(Projection, JohnsonLindenstraussAndVariance) {
  const auto r = props::jl_property();
  EXPECT_TRUE(r.pass) << r.detail;
}
