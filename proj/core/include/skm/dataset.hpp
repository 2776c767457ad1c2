#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace skm {

using Index = std::size_t;

/// Row-major so that a point is a contiguous span of d doubles.
using PointMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// A sample of n points in R^d. Every coordinate is finite and n, d >= 1.
class DataSet {
 public:
  DataSet() = default;
  explicit DataSet(PointMatrix points, std::string name = {});

  std::size_t n() const noexcept { return static_cast<std::size_t>(points_.rows()); }
  std::size_t d() const noexcept { return static_cast<std::size_t>(points_.cols()); }
  const std::string& name() const noexcept { return name_; }
  const PointMatrix& points() const noexcept { return points_; }

  std::span<const double> row(Index i) const noexcept {
    return {points_.data() + i * d(), d()};
  }

  /// Rows selected by `indices`, in that order.
  DataSet subset(std::span<const Index> indices, std::string name = {}) const;

  /// Stacks `parts` vertically; all parts must share d.
  static DataSet concat(std::span<const DataSet> parts, std::string name = {});

  friend bool operator==(const DataSet& a, const DataSet& b) {
    return a.points_.rows() == b.points_.rows() &&
           a.points_.cols() == b.points_.cols() && a.points_ == b.points_;
  }

 private:
  PointMatrix points_;
  std::string name_;
};

/// Even rows (0, 2, ...) and odd rows (1, 3, ...). Used for estimate/evaluate splits.
struct InterleavedSplit {
  DataSet even;
  DataSet odd;
};
InterleavedSplit split_even_odd(const DataSet& data);

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept;

}  // namespace skm
