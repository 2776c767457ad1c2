#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "skm/dataset.hpp"
#include "skm/kernels.hpp"
#include "skm/sparse_mean.hpp"

namespace skm {

enum class ShiftBackend { full, skm };

struct ShiftOptions {
  double gamma = 0.0;  ///< 0 selects 1e-3 * sigma
  std::size_t max_iter = 500;
};

struct PointShift {
  Eigen::VectorXd point;
  std::size_t iterations = 0;
  bool converged = false;
  bool underflow = false;  ///< every weight vanished; returned the last iterate
};

/// Gaussian mean-shift fixed point: x <- sum_i w_i x_i / sum_i w_i with
/// w_i = alpha_i exp(-|x - x_i|^2 / 2 sigma^2), until the step is below gamma.
/// The backend must be a gaussian kernel mean with nonnegative weights.
PointShift shift_point(std::span<const double> x0, const SparseKernelMean& backend,
                       const ShiftOptions& options, EvalCounter* counter = nullptr);

/// Shifted points satisfy |last step| < gamma unless max_iter was reached.
struct ShiftResult {
  PointMatrix shifted;
  std::vector<std::size_t> iterations;
  std::size_t unconverged = 0;
  std::size_t underflows = 0;
  ShiftBackend backend = ShiftBackend::full;
};

ShiftResult mean_shift_all(const DataSet& data, const SparseKernelMean& backend,
                           ShiftBackend kind, const ShiftOptions& options,
                           EvalCounter* counter = nullptr);

/// Labels in [0, clusters) with every cluster nonempty; ids follow first
/// appearance in row order.
struct Clustering {
  std::vector<std::size_t> labels;
  PointMatrix modes;  ///< mean of the shifted points of each cluster

  std::size_t n() const noexcept { return labels.size(); }
  std::size_t cluster_count() const noexcept { return static_cast<std::size_t>(modes.rows()); }
};

/// Single-linkage union of points closer than merge_dist.
Clustering cluster_modes(const PointMatrix& shifted, double merge_dist);

/// Fraction of aligned rows whose positions differ by more than delta.
double discrepancy_index(const PointMatrix& a, const PointMatrix& b, double delta);

/// max of the directed max-min symmetric-difference masses under the empirical
/// measure on the n shared points.
double hausdorff_clustering_distance(const Clustering& a, const Clustering& b);
double hausdorff_clustering_distance(std::span<const std::size_t> labels_a,
                                     std::span<const std::size_t> labels_b);

}  // namespace skm
