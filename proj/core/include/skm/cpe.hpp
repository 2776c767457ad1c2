#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "skm/dataset.hpp"
#include "skm/kernels.hpp"
#include "skm/sparse_mean.hpp"

namespace skm {

/// Mixture weights of a test distribution over N training distributions.
/// pi_hat sums to one; when was_projected it also lies on the simplex.
struct ProportionEstimate {
  Eigen::VectorXd pi_hat;
  bool was_projected = false;
  /// |P0 - sum_i pi_i P_i|^2 at pi_hat.
  double residual = 0.0;
};

/// Reciprocal condition estimate below which the reduced system is singular.
inline constexpr double kCpeSingularRcond = 1e-12;

/// Least-squares proportions from already-built kernel means: solves
/// D pi_- = e with D_ij = <P_i - P_N, P_j - P_N>, e_i = <P_i - P_N, P_0 - P_N>,
/// appends 1 - sum(pi_-), and projects onto the simplex when any entry is
/// negative.
ProportionEstimate estimate_proportions(const std::vector<SparseKernelMean>& train,
                                        const SparseKernelMean& test);

struct CpeOptions {
  bool sparse = true;
  std::size_t k_max = 0;  ///< 0 selects default_k_max per class
  double epsilon = 1e-8;
  FirstCenter first = FirstCenter::seeded(0);
};

/// Builds (sparse or full) KMEs for every class and for the test sample.
/// The test sample is always represented by its full empirical mean.
ProportionEstimate estimate_proportions(const std::vector<DataSet>& train, const DataSet& test,
                                        const RadialKernel& kernel, const CpeOptions& options);

double l1_error(const Eigen::VectorXd& pi_true, const Eigen::VectorXd& pi_hat);

/// Symmetric Dirichlet(omega) draw on the N-simplex via normalized gammas.
Eigen::VectorXd dirichlet_sample(std::size_t n, double omega, std::uint64_t seed);

/// Class supports selected once; alpha is re-solved for each bandwidth.
class ProportionModel {
 public:
  ProportionModel(std::vector<DataSet> train, KernelSpec spec, const CpeOptions& options);

  ProportionEstimate estimate(const DataSet& test, double bandwidth) const;
  ProportionEstimate estimate(const SparseKernelMean& test_mean, double bandwidth) const;

  /// Class means at a bandwidth, reusing the cached supports.
  std::vector<SparseKernelMean> class_means(double bandwidth) const;

  const std::vector<std::vector<Index>>& supports() const noexcept { return supports_; }
  std::size_t dim() const noexcept { return train_.front().d(); }

 private:
  std::vector<DataSet> train_;
  KernelSpec spec_;
  bool sparse_;
  std::vector<std::vector<Index>> supports_;
};

struct BandwidthSearchResult {
  double bandwidth = 0.0;
  double l1 = 0.0;
  std::size_t evaluations = 0;
};

/// Golden-section search over log(bandwidth) in [lo, hi] minimizing the l1
/// error of held-out proportions.
BandwidthSearchResult search_bandwidth(const ProportionModel& model, const DataSet& validation,
                                       const Eigen::VectorXd& validation_pi, double lo, double hi,
                                       std::size_t max_iter = 40);

}  // namespace skm
