#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "skm/dataset.hpp"
#include "skm/kernels.hpp"

namespace skm {

/// Incremental least-squares state for a growing support set I.
///
/// gram is K_I = (<z_i, z_j>)_{i,j in I} and inv_gram its inverse; kappa_l is
/// (1/n) sum_j <z_j, z_l>; alpha solves K_I alpha = kappa (inv_gram * kappa
/// plus one refinement step against gram); error_trace[t-1] holds
/// E_t = -alpha_t' kappa_t, which is nonincreasing in t.
struct CoeffState {
  std::vector<Index> support;
  Eigen::MatrixXd gram;
  Eigen::MatrixXd inv_gram;
  Eigen::VectorXd kappa;
  Eigen::VectorXd alpha;
  std::vector<double> error_trace;

  std::size_t size() const noexcept { return support.size(); }
};

/// Relative tolerance on the Schur complement q0 denominator: a new support
/// point is rejected when g(0) - b' K^{-1} b <= kSingularTolerance * g(0).
inline constexpr double kSingularTolerance = 1e-12;

/// (1/n) sum_l <phi(., x_l), phi(., x_j)>, summed in fixed blocks so the
/// result does not depend on the thread count.
double kappa_entry(const DataSet& data, const RadialKernel& kernel, Index j,
                   EvalCounter* counter = nullptr);

CoeffState init_state(const DataSet& data, const RadialKernel& kernel, Index first,
                      EvalCounter* counter = nullptr);

/// Adds `new_index` to the support with the bordered-inverse update. Throws
/// SingularError when the Schur complement is below tolerance.
CoeffState extend_state(CoeffState state, const DataSet& data, const RadialKernel& kernel,
                        Index new_index, EvalCounter* counter = nullptr);

/// In-place variant; returns false and leaves `state` untouched when the new
/// point is numerically dependent on the current support.
bool try_extend_state(CoeffState& state, const DataSet& data, const RadialKernel& kernel,
                      Index new_index, EvalCounter* counter = nullptr);

/// |E_{k-1} - E_k| / |E_1 - E_k| <= epsilon, with the ratio taken as 0 when
/// E_1 == E_k. Requires at least two entries.
bool stop_rule(std::span<const double> error_trace, double epsilon);
double stop_ratio(std::span<const double> error_trace);

struct SolveReport {
  Eigen::VectorXd alpha;
  std::size_t iterations = 0;
  double relative_residual = 0.0;
  bool used_dense_fallback = false;
};

/// Jacobi-preconditioned conjugate gradients on K alpha = kappa, stopping at
/// |K alpha - kappa| <= tol |kappa|. When CG stalls and m <= 64 a dense LDLT
/// solve is used instead; otherwise ConvergenceError carries the residual.
SolveReport solve_direct(const Eigen::MatrixXd& gram, const Eigen::VectorXd& kappa,
                         double tol = 1e-10, std::size_t max_iter = 0);

/// Euclidean projection onto the probability simplex (sort-based, O(k log k)).
Eigen::VectorXd project_simplex(const Eigen::VectorXd& v);

/// Dense support Gram matrix and kappa vector, for direct solves and checks.
Eigen::MatrixXd support_gram(const DataSet& data, const RadialKernel& kernel,
                             std::span<const Index> support);
Eigen::VectorXd support_kappa(const DataSet& data, const RadialKernel& kernel,
                              std::span<const Index> support);

}  // namespace skm
