#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "skm/coefficients.hpp"
#include "skm/dataset.hpp"
#include "skm/kcenter.hpp"
#include "skm/kernels.hpp"

namespace skm {

struct FitDiagnostics {
  std::vector<double> error_trace;   ///< E_1 .. E_k0 over accepted support points
  std::vector<double> radius_trace;  ///< coverage radius after each selection step
  std::vector<Index> skipped;        ///< selected rows rejected as near-singular
  std::size_t k_max = 0;
  double epsilon = 0.0;
  bool density_projected = false;
  bool stopped_early = false;        ///< stop rule fired before k_max
};

/// sum_i alpha_i phi(., support_i). A full kernel mean is the special case
/// with every row of the sample and alpha = 1/n.
struct SparseKernelMean {
  RadialKernel kernel;
  PointMatrix support;
  Eigen::VectorXd alpha;
  std::vector<Index> support_indices;  ///< rows of the training sample
  FitDiagnostics diagnostics;

  std::size_t size() const noexcept { return static_cast<std::size_t>(alpha.size()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(support.cols()); }
  std::span<const double> point(Index i) const noexcept {
    return {support.data() + i * dim(), dim()};
  }
};

struct FitOptions {
  std::size_t k_max = 0;  ///< 0 selects default_k_max(n)
  double epsilon = 1e-8;
  bool density_mode = false;
  FirstCenter first = FirstCenter::seeded(0);
};

/// floor(3 sqrt(n)), clamped to [1, n].
std::size_t default_k_max(std::size_t n);

/// Greedy k-center selection and incremental coefficients in lockstep,
/// stopping at the first k0 <= k_max that passes stop_rule. Selection also
/// stops once every row is covered at zero radius. In density mode alpha is
/// projected onto the simplex at the end.
SparseKernelMean fit(const DataSet& data, const RadialKernel& kernel, const FitOptions& options,
                     EvalCounter* counter = nullptr);

/// alpha = K_I^{-1} kappa_I on a given support via solve_direct.
SparseKernelMean fit_on_support(const DataSet& data, const RadialKernel& kernel,
                                std::span<const Index> support, bool density_mode);

/// Uniformly sampled support of size k (seeded), coefficients as in fit but
/// without early stopping.
SparseKernelMean random_selection_fit(const DataSet& data, const RadialKernel& kernel,
                                      std::size_t k, std::uint64_t seed,
                                      bool density_mode = false);

/// All n rows with alpha = 1/n.
SparseKernelMean full_mean(const DataSet& data, const RadialKernel& kernel);

/// Same support with explicit weights, e.g. a mixture of several samples.
SparseKernelMean weighted_mean(const DataSet& data, const RadialKernel& kernel,
                               Eigen::VectorXd weights);

/// v_j = sum_i alpha_i phi(q_j, support_i).
Eigen::VectorXd evaluate(const SparseKernelMean& mean, const PointMatrix& queries,
                         EvalCounter* counter = nullptr);
double evaluate_at(const SparseKernelMean& mean, std::span<const double> query,
                   EvalCounter* counter = nullptr);

/// (1/n) sum_i phi(q_j, x_i).
Eigen::VectorXd evaluate_full(const DataSet& data, const RadialKernel& kernel,
                              const PointMatrix& queries);

/// sum_i sum_j a_i b_j <z_i, w_j>; the inner product of two kernel means in
/// the kernel's space.
double mean_inner(const SparseKernelMean& a, const SparseKernelMean& b,
                  EvalCounter* counter = nullptr);

/// nu_I = min_{j not in I} max_{i in I} <z_i, z_j>, through g(W(X_I)).
double incoherence(const DataSet& data, const RadialKernel& kernel,
                   std::span<const Index> support);
/// Same quantity from a selection's distance table in O(n).
double incoherence(const Selection& sel, const RadialKernel& kernel);

/// (1 - |I|/n) sqrt((C^2 - nu^2) / C). Throws when nu > C.
double bound_value(std::size_t n, std::size_t support_size, double c, double nu);

/// Largest n accepted by the O(n^2) audit helpers below.
inline constexpr std::size_t kAuditMaxN = 20000;

/// |z_bar|^2 = (1/n^2) sum_ij <z_i, z_j>.
double mean_norm_sq(const DataSet& data, const RadialKernel& kernel);

/// |z_bar - sum_i alpha_i z_{support_i}|^2 as a quadratic form in the
/// weight difference over all n rows, which avoids cancellation.
double residual_norm_sq(const DataSet& data, const RadialKernel& kernel,
                        std::span<const Index> support, const Eigen::VectorXd& alpha);

}  // namespace skm
