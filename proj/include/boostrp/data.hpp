#ifndef BOOSTRP_DATA_HPP
#define BOOSTRP_DATA_HPP

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "boostrp/error.hpp"
#include "boostrp/random.hpp"

namespace boostrp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class Task { regression, multilabel };

inline const char* to_string(Task t) { return t == Task::regression ? "regression" : "multilabel"; }

inline Task parse_task(std::string_view s) {
  if (s == "regression") return Task::regression;
  if (s == "multilabel") return Task::multilabel;
  throw ConfigError("unknown task '" + std::string(s) + "'");
}

/// Dense features (n x p) and targets (n x d). Multilabel targets are stored
/// in {-1,+1}; the 0/1 encoding only exists at the CSV boundary.
class Dataset {
 public:
  Dataset() = default;

  Dataset(Matrix features, Matrix targets, Task task, std::vector<std::string> feature_names = {},
          std::vector<std::string> target_names = {})
      : features_(std::move(features)),
        targets_(std::move(targets)),
        task_(task),
        feature_names_(std::move(feature_names)),
        target_names_(std::move(target_names)) {
    validate();
  }

  const Matrix& features() const noexcept { return features_; }
  const Matrix& targets() const noexcept { return targets_; }
  Task task() const noexcept { return task_; }
  const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
  const std::vector<std::string>& target_names() const noexcept { return target_names_; }

  Index n_samples() const noexcept { return features_.rows(); }
  Index n_features() const noexcept { return features_.cols(); }
  Index n_outputs() const noexcept { return targets_.cols(); }
  bool empty() const noexcept { return features_.rows() == 0; }

  /// Rows selected by `rows`, in that order.
  Dataset subset(const std::vector<Index>& rows) const {
    Matrix x(static_cast<Index>(rows.size()), n_features());
    Matrix y(static_cast<Index>(rows.size()), n_outputs());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      x.row(static_cast<Index>(i)) = features_.row(rows[i]);
      y.row(static_cast<Index>(i)) = targets_.row(rows[i]);
    }
    return Dataset(std::move(x), std::move(y), task_, feature_names_, target_names_);
  }

 private:
  // Zero rows is tolerated so that empty split partitions stay representable;
  // consumers that need samples check n >= 1 themselves.
  void validate() const {
    if (features_.cols() < 1) throw ShapeError("dataset needs at least one feature column");
    if (targets_.cols() < 1) throw ShapeError("dataset needs at least one output column");
    if (features_.rows() != targets_.rows())
      throw ShapeError("features have " + std::to_string(features_.rows()) + " rows but targets have " +
                       std::to_string(targets_.rows()));
    if (!features_.allFinite()) throw ValidationError("non-finite feature value");
    if (!targets_.allFinite()) throw ValidationError("non-finite target value");
    if (task_ == Task::multilabel) {
      for (Index j = 0; j < targets_.cols(); ++j)
        for (Index i = 0; i < targets_.rows(); ++i) {
          const double v = targets_(i, j);
          if (v != 1.0 && v != -1.0)
            throw ValidationError("multilabel target at row " + std::to_string(i) + ", output " + std::to_string(j) +
                                  " is not in {-1,+1}");
        }
    }
    if (!feature_names_.empty() && feature_names_.size() != static_cast<std::size_t>(features_.cols()))
      throw ShapeError("feature name count does not match feature columns");
    if (!target_names_.empty() && target_names_.size() != static_cast<std::size_t>(targets_.cols()))
      throw ShapeError("target name count does not match output columns");
  }

  Matrix features_;
  Matrix targets_;
  Task task_ = Task::regression;
  std::vector<std::string> feature_names_;
  std::vector<std::string> target_names_;
};

// ---------------------------------------------------------------------------
// CSV

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      return cells;
    }
    cells.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
}

inline std::optional<double> parse_double(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

/// Shortest text that reads back to the same double.
inline std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

}  // namespace detail

/// Parses CSV text. The last `n_outputs` columns are targets. A first row with
/// any non-numeric cell is taken as the header.
inline Dataset parse_csv(std::istream& in, Index n_outputs, Task task) {
  if (n_outputs < 1) throw ConfigError("n_outputs must be positive");
  std::vector<std::vector<double>> rows;
  std::vector<std::string> header;
  std::size_t width = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    auto cells = detail::split_commas(line);
    std::vector<double> values;
    values.reserve(cells.size());
    bool numeric = true;
    for (auto c : cells) {
      auto v = detail::parse_double(c);
      if (!v) {
        numeric = false;
        break;
      }
      values.push_back(*v);
    }
    if (!numeric) {
      if (rows.empty() && header.empty()) {
        for (auto c : cells) header.emplace_back(c);
        width = cells.size();
        continue;
      }
      throw ParseError("non-numeric cell", line_no);
    }
    if (width == 0) width = values.size();
    if (values.size() != width)
      throw ParseError("expected " + std::to_string(width) + " columns, found " + std::to_string(values.size()),
                       line_no);
    rows.push_back(std::move(values));
  }
  if (width < static_cast<std::size_t>(n_outputs) + 1)
    throw ShapeError("need at least " + std::to_string(n_outputs + 1) + " columns for " + std::to_string(n_outputs) +
                     " outputs, found " + std::to_string(width));
  if (rows.empty()) throw ShapeError("CSV contains no data rows");

  const auto n = static_cast<Index>(rows.size());
  const auto d = n_outputs;
  const auto p = static_cast<Index>(width) - d;
  Matrix x(n, p);
  Matrix y(n, d);
  for (Index i = 0; i < n; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    for (Index j = 0; j < p; ++j) x(i, j) = r[static_cast<std::size_t>(j)];
    for (Index j = 0; j < d; ++j) {
      double v = r[static_cast<std::size_t>(p + j)];
      if (task == Task::multilabel) {
        if (v == 0.0)
          v = -1.0;
        else if (v != 1.0)
          throw ValidationError("label " + detail::format_double(v) + " at data row " + std::to_string(i + 1) +
                                " is not 0 or 1");
      }
      y(i, j) = v;
    }
  }
  std::vector<std::string> fnames, tnames;
  if (!header.empty()) {
    fnames.assign(header.begin(), header.begin() + p);
    tnames.assign(header.begin() + p, header.end());
  }
  return Dataset(std::move(x), std::move(y), task, std::move(fnames), std::move(tnames));
}

inline Dataset load_csv(const std::string& path, Index n_outputs, Task task) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return parse_csv(in, n_outputs, task);
}

/// Writes features then targets; multilabel targets go back to 0/1.
inline void write_csv(std::ostream& out, const Dataset& ds) {
  if (!ds.feature_names().empty() && !ds.target_names().empty()) {
    bool first = true;
    for (const auto& s : ds.feature_names()) {
      out << (first ? "" : ",") << s;
      first = false;
    }
    for (const auto& s : ds.target_names()) out << ',' << s;
    out << '\n';
  }
  const auto& x = ds.features();
  const auto& y = ds.targets();
  const bool labels = ds.task() == Task::multilabel;
  for (Index i = 0; i < ds.n_samples(); ++i) {
    for (Index j = 0; j < x.cols(); ++j) out << (j ? "," : "") << detail::format_double(x(i, j));
    for (Index j = 0; j < y.cols(); ++j) {
      out << ',';
      if (labels)
        out << (y(i, j) > 0 ? '1' : '0');
      else
        out << detail::format_double(y(i, j));
    }
    out << '\n';
  }
}

inline void save_csv(const std::string& path, const Dataset& ds) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  write_csv(out, ds);
  if (!out) throw Error("write to '" + path + "' failed");
}

// ---------------------------------------------------------------------------
// Splitting and standardization

struct Split {
  Dataset train;
  Dataset validation;
  Dataset test;
};

struct SplitFractions {
  double train = 1.0;
  double validation = 0.0;
  double test = 0.0;
};

/// Shuffles rows then cuts contiguous blocks. Validation and test sizes are
/// floor(n * fraction); the remainder goes to train.
inline Split split_dataset(const Dataset& ds, SplitFractions f, RngSeed seed) {
  if (f.train < 0 || f.validation < 0 || f.test < 0) throw ConfigError("split fractions must be nonnegative");
  if (std::abs(f.train + f.validation + f.test - 1.0) > 1e-9) throw ConfigError("split fractions must sum to 1");
  const Index n = ds.n_samples();
  const auto nd = static_cast<double>(n);
  const auto n_val = static_cast<Index>(std::floor(nd * f.validation + 1e-9));
  const auto n_test = static_cast<Index>(std::floor(nd * f.test + 1e-9));
  const Index n_train = n - n_val - n_test;
  auto check = [](double frac, Index size, const char* name) {
    if (frac > 0 && size == 0) throw SizingError(std::string(name) + " partition would be empty");
  };
  check(f.train, n_train, "train");
  check(f.validation, n_val, "validation");
  check(f.test, n_test, "test");

  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  auto rng = make_rng(derive_seed(seed, SeedStream::split, 0));
  std::shuffle(perm.begin(), perm.end(), rng);

  auto slice = [&](Index from, Index count) {
    return std::vector<Index>(perm.begin() + from, perm.begin() + from + count);
  };
  return Split{ds.subset(slice(0, n_train)), ds.subset(slice(n_train, n_val)),
               ds.subset(slice(n_train + n_val, n_test))};
}

/// Per-output affine map y -> (y - mean) / std with population std.
struct TargetScaler {
  Vector mean;
  Vector stddev;

  Matrix apply(const Matrix& y) const {
    return ((y.rowwise() - mean.transpose()).array().rowwise() / stddev.transpose().array()).matrix();
  }
  Matrix inverse(const Matrix& y) const {
    return ((y.array().rowwise() * stddev.transpose().array()).rowwise() + mean.transpose().array()).matrix();
  }
};

inline std::pair<Dataset, TargetScaler> standardize_targets(const Dataset& ds) {
  if (ds.task() != Task::regression) throw ConfigError("target standardization applies to regression only");
  if (ds.empty()) throw ShapeError("cannot standardize an empty dataset");
  const Matrix& y = ds.targets();
  TargetScaler s{y.colwise().mean().transpose(), Vector(y.cols())};
  for (Index j = 0; j < y.cols(); ++j) {
    const double var = (y.col(j).array() - s.mean(j)).square().mean();
    if (!(var > 0)) throw DegenerateOutputError("constant output column cannot be standardized", static_cast<std::size_t>(j));
    s.stddev(j) = std::sqrt(var);
  }
  Dataset out(ds.features(), s.apply(y), ds.task(), ds.feature_names(), ds.target_names());
  return {std::move(out), std::move(s)};
}

}  // namespace boostrp

#endif  // BOOSTRP_DATA_HPP
