#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "boostrp/data.hpp"
#include "oracles.hpp"

using namespace boostrp;

namespace {

Dataset parse(const std::string& text, Index d, Task task) {
  std::istringstream in(text);
  return parse_csv(in, d, task);
}

Dataset random_dataset(Index n, Index p, Index d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return Dataset(oracle::random_matrix(static_cast<int>(n), static_cast<int>(p), rng),
                 oracle::random_matrix(static_cast<int>(n), static_cast<int>(d), rng), Task::regression);
}

}  // namespace

TEST(Csv, MultilabelZeroOneMapsToPlusMinusOne) {
  const auto ds = parse("1,2,0\n3,4,1\n5,6,1\n", 1, Task::multilabel);
  EXPECT_EQ(ds.n_samples(), 3);
  EXPECT_EQ(ds.n_features(), 2);
  EXPECT_EQ(ds.n_outputs(), 1);
  EXPECT_EQ(ds.targets()(0, 0), -1.0);
  EXPECT_EQ(ds.targets()(1, 0), 1.0);
  EXPECT_EQ(ds.targets()(2, 0), 1.0);
}

TEST(Csv, RegressionPassesTargetsThrough) {
  const auto ds = parse("1,2,0\n3,4,1\n5,6,1\n", 1, Task::regression);
  EXPECT_EQ(ds.targets()(0, 0), 0.0);
  EXPECT_EQ(ds.targets()(1, 0), 1.0);
  EXPECT_EQ(ds.features()(2, 1), 6.0);
}

TEST(Csv, TooFewColumnsIsShapeError) { EXPECT_THROW(parse("1,2\n", 2, Task::regression), ShapeError); }

TEST(Csv, HeaderPopulatesNames) {
  const auto ds = parse("a,b,y\n1,2,3\n", 1, Task::regression);
  EXPECT_EQ(ds.n_samples(), 1);
  EXPECT_EQ(ds.feature_names(), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(ds.target_names(), (std::vector<std::string>{"y"}));
}

TEST(Csv, MalformedRowReportsItsLine) {
  try {
    parse("1,2,3\n4,x,6\n", 1, Task::regression);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 2u);
  }
  EXPECT_THROW(parse("1,2,3\n4,5\n", 1, Task::regression), ParseError);
}

TEST(Csv, NonBinaryLabelIsValidationError) {
  EXPECT_THROW(parse("1,2,0.5\n", 1, Task::multilabel), ValidationError);
  EXPECT_THROW(parse("1,2,-1\n", 1, Task::multilabel), ValidationError);
}

TEST(Csv, NonFiniteValuesRejected) { EXPECT_THROW(parse("1,nan,3\n", 1, Task::regression), Error); }

TEST(Csv, SaveLoadRoundTrip) {
  const auto ds = random_dataset(25, 3, 2, 11);
  std::stringstream buf;
  write_csv(buf, ds);
  const auto back = parse_csv(buf, 2, Task::regression);
  ASSERT_EQ(back.n_samples(), ds.n_samples());
  EXPECT_LE((back.features() - ds.features()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((back.targets() - ds.targets()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Csv, MultilabelRoundTripKeepsLabels) {
  const auto ds = parse("1,2,0,1\n3,4,1,1\n", 2, Task::multilabel);
  std::stringstream buf;
  write_csv(buf, ds);
  const auto back = parse_csv(buf, 2, Task::multilabel);
  EXPECT_EQ(back.targets(), ds.targets());
}

TEST(DatasetInvariants, RejectsMismatchedRowsAndBadLabels) {
  EXPECT_THROW(Dataset(Matrix::Zero(3, 2), Matrix::Zero(2, 1), Task::regression), ShapeError);
  EXPECT_THROW(Dataset(Matrix::Zero(2, 2), Matrix::Zero(2, 1), Task::multilabel), ValidationError);
  EXPECT_THROW(Dataset(Matrix::Zero(2, 0), Matrix::Zero(2, 1), Task::regression), ShapeError);
}

TEST(Split, SizesFollowFloorWithRemainderToTrain) {
  const auto ds = random_dataset(10, 2, 1, 1);
  const auto s = split_dataset(ds, {0.4, 0.1, 0.5}, RngSeed{3});
  EXPECT_EQ(s.train.n_samples(), 4);
  EXPECT_EQ(s.validation.n_samples(), 1);
  EXPECT_EQ(s.test.n_samples(), 5);
}

TEST(Split, AllTrainIsAPermutedCopy) {
  const auto ds = random_dataset(10, 2, 1, 1);
  const auto s = split_dataset(ds, {1, 0, 0}, RngSeed{3});
  EXPECT_EQ(s.train.n_samples(), 10);
  EXPECT_TRUE(s.validation.empty());
  EXPECT_TRUE(s.test.empty());
  std::vector<double> a(ds.targets().data(), ds.targets().data() + 10);
  std::vector<double> b(s.train.targets().data(), s.train.targets().data() + 10);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  EXPECT_EQ(a, b);
}

TEST(Split, DeterministicUnderSeed) {
  const auto ds = random_dataset(30, 2, 1, 1);
  const auto a = split_dataset(ds, {0.5, 0.2, 0.3}, RngSeed{9});
  const auto b = split_dataset(ds, {0.5, 0.2, 0.3}, RngSeed{9});
  EXPECT_EQ(a.train.features(), b.train.features());
  EXPECT_EQ(a.test.features(), b.test.features());
}

TEST(Split, TooSmallPartitionIsSizingError) {
  const auto ds = random_dataset(3, 1, 1, 1);
  EXPECT_THROW(split_dataset(ds, {0.8, 0.1, 0.1}, RngSeed{1}), SizingError);
}

TEST(Split, PropertyDisjointAndCovering) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 5 + static_cast<Index>(rng() % 60);
    // Feature column 0 carries the row id so the partition can be traced.
    Matrix x(n, 1);
    for (Index i = 0; i < n; ++i) x(i, 0) = static_cast<double>(i);
    const Dataset ds(x, Matrix::Zero(n, 1), Task::regression);
    std::uniform_real_distribution<double> u(0.0, 0.4);
    const double v = u(rng), t = u(rng);
    Split s;
    try {
      s = split_dataset(ds, {1.0 - v - t, v, t}, RngSeed{rng()});
    } catch (const SizingError&) {
      continue;
    }
    std::multiset<double> seen;
    for (const auto* part : {&s.train, &s.validation, &s.test})
      for (Index i = 0; i < part->n_samples(); ++i) seen.insert(part->features()(i, 0));
    ASSERT_EQ(static_cast<Index>(seen.size()), n);
    Index expect = 0;
    for (double id : seen) EXPECT_EQ(id, static_cast<double>(expect++));
  }
}

TEST(Standardize, HandExample) {
  const Dataset ds(Matrix::Zero(2, 1), (Matrix(2, 1) << 1, 3).finished(), Task::regression);
  const auto [out, scaler] = standardize_targets(ds);
  EXPECT_DOUBLE_EQ(out.targets()(0, 0), -1.0);
  EXPECT_DOUBLE_EQ(out.targets()(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(scaler.mean(0), 2.0);
  EXPECT_DOUBLE_EQ(scaler.stddev(0), 1.0);
}

TEST(Standardize, MomentsIdempotenceAndInverse) {
  const auto ds = random_dataset(40, 2, 3, 21);
  const auto [out, scaler] = standardize_targets(ds);
  for (Index j = 0; j < 3; ++j) {
    const double mean = out.targets().col(j).mean();
    const double var = (out.targets().col(j).array() - mean).square().mean();
    EXPECT_LT(std::abs(mean), 1e-10);
    EXPECT_LT(std::abs(var - 1.0), 1e-8);
  }
  const auto [again, s2] = standardize_targets(out);
  EXPECT_LE((again.targets() - out.targets()).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE((scaler.inverse(out.targets()) - ds.targets()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Standardize, ConstantColumnNamesTheColumn) {
  Matrix y(3, 2);
  y << 1, 5, 2, 5, 3, 5;
  const Dataset ds(Matrix::Zero(3, 1), y, Task::regression);
  try {
    standardize_targets(ds);
    FAIL() << "expected a degenerate-output error";
  } catch (const DegenerateOutputError& e) {
    EXPECT_EQ(e.output(), 1u);
  }
}

TEST(Seeds, DerivedStreamsDifferAndRepeat) {
  const RngSeed s{42};
  EXPECT_EQ(derive_seed(s, SeedStream::tree, 3).value, derive_seed(s, SeedStream::tree, 3).value);
  EXPECT_NE(derive_seed(s, SeedStream::tree, 3).value, derive_seed(s, SeedStream::tree, 4).value);
  EXPECT_NE(derive_seed(s, SeedStream::tree, 3).value, derive_seed(s, SeedStream::projection, 3).value);
}
