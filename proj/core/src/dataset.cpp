#include "skm/dataset.hpp"

#include <cmath>
#include <string>

#include "skm/errors.hpp"

namespace skm {

DataSet::DataSet(PointMatrix points, std::string name)
    : points_(std::move(points)), name_(std::move(name)) {
  if (points_.rows() < 1) throw DataError("data set '" + name_ + "': no rows");
  if (points_.cols() < 1) throw DataError("data set '" + name_ + "': no columns");
  for (Eigen::Index i = 0; i < points_.rows(); ++i) {
    for (Eigen::Index j = 0; j < points_.cols(); ++j) {
      if (!std::isfinite(points_(i, j))) {
        throw DataError("data set '" + name_ + "': non-finite value at row " +
                        std::to_string(i + 1) + ", column " + std::to_string(j + 1));
      }
    }
  }
}

DataSet DataSet::subset(std::span<const Index> indices, std::string name) const {
  PointMatrix out(static_cast<Eigen::Index>(indices.size()), points_.cols());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    if (indices[r] >= n()) throw std::out_of_range("DataSet::subset: row index out of range");
    out.row(static_cast<Eigen::Index>(r)) = points_.row(static_cast<Eigen::Index>(indices[r]));
  }
  return DataSet(std::move(out), name.empty() ? name_ : std::move(name));
}

DataSet DataSet::concat(std::span<const DataSet> parts, std::string name) {
  if (parts.empty()) throw DataError("DataSet::concat: nothing to concatenate");
  const auto d = parts.front().points_.cols();
  Eigen::Index rows = 0;
  for (const auto& p : parts) {
    if (p.points_.cols() != d) throw DataError("DataSet::concat: dimension mismatch");
    rows += p.points_.rows();
  }
  PointMatrix out(rows, d);
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    out.middleRows(at, p.points_.rows()) = p.points_;
    at += p.points_.rows();
  }
  return DataSet(std::move(out), std::move(name));
}

InterleavedSplit split_even_odd(const DataSet& data) {
  if (data.n() < 2) throw DataError("split_even_odd: need at least two rows");
  std::vector<Index> even, odd;
  for (Index i = 0; i < data.n(); ++i) (i % 2 == 0 ? even : odd).push_back(i);
  return {data.subset(even, data.name() + ".even"), data.subset(odd, data.name() + ".odd")};
}

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return s;
}

}  // namespace skm
