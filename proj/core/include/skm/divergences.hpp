#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "skm/dataset.hpp"
#include "skm/kernels.hpp"
#include "skm/sparse_mean.hpp"

namespace skm {

enum class DistanceMode { rkhs, sym_kl };

DistanceMode parse_distance_mode(std::string_view text);
std::string to_string(DistanceMode mode);

/// Default floor applied to density values before taking logs.
inline constexpr double kDensityFloor = 1e-300;

/// |Psi_a - Psi_b| in the RKHS of the shared kernel, from the three weighted
/// double sums. Costs k_a^2 + k_a k_b + k_b^2 kernel evaluations.
double rkhs_distance(const SparseKernelMean& a, const SparseKernelMean& b,
                     EvalCounter* counter = nullptr);

/// (1/m) sum_w log(p(w) / q(w)) over the evaluation points, both densities
/// floored at `floor`.
double kl_divergence(const SparseKernelMean& p, const SparseKernelMean& q,
                     const PointMatrix& eval_points, double floor = kDensityFloor);

/// D(p || q) on eval_p plus D(q || p) on eval_q.
double symmetrized_kl(const SparseKernelMean& p, const SparseKernelMean& q,
                      const PointMatrix& eval_p, const PointMatrix& eval_q,
                      double floor = kDensityFloor);

struct DistanceOptions {
  DistanceMode mode = DistanceMode::rkhs;
  bool sparse = true;
  /// Per-sample sparsity budget; 0 means default_k_max(n_l).
  std::size_t k_max = 0;
  double epsilon = 1e-10;
  FirstCenter first = FirstCenter::seeded(0);
  double floor = kDensityFloor;
};

struct DistanceMatrix {
  Eigen::MatrixXd values;
  std::vector<std::string> labels;
  DistanceMode mode = DistanceMode::rkhs;
  std::vector<std::size_t> support_sizes;  ///< k0 per sample (n_l when full)
  double fit_seconds = 0.0;
  double fill_seconds = 0.0;
};

/// Fits one kernel mean per sample, then fills all pairs. In sym_kl mode each
/// sample is split into even rows (estimation) and odd rows (evaluation), the
/// kernel is forced to density normalization and sparse means are projected
/// onto the simplex.
DistanceMatrix distance_matrix(const std::vector<DataSet>& samples, const KernelSpec& spec,
                               const DistanceOptions& options);

/// |D - D0|_F / |D|_F.
double relative_frobenius_error(const Eigen::MatrixXd& reference, const Eigen::MatrixXd& approx);

}  // namespace skm
