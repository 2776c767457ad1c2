#pragma once

#include <cstdint>
#include <vector>

#include "skm/dataset.hpp"
#include "skm/kernels.hpp"
#include "skm/sparse_mean.hpp"

namespace skm {

struct BenchOptions {
  std::size_t k_max = 0;  ///< 0 selects default_k_max(n)
  double epsilon = 0.0;   ///< stop rule for the greedy fit; 0 runs to k_max
  std::size_t seeds = 20;
  std::uint64_t base_seed = 0;
  FirstCenter first = FirstCenter::index(0);
  std::size_t kl_samples = 2000;  ///< Monte Carlo draws per KL estimate
};

struct KlPair {
  double full_to_sparse = 0.0;  ///< D(full || sparse)
  double sparse_to_full = 0.0;  ///< D(sparse || full)
};

/// Error-indicator curves and KL divergences of greedy and random supports.
/// Curves are padded with their last value up to k_max.
struct BenchReport {
  std::vector<double> greedy_curve;
  std::vector<double> random_curve;  ///< averaged over seeds
  std::size_t greedy_k0 = 0;
  double random_mean_k = 0.0;  ///< size of the random supports behind random_kl
  KlPair greedy_kl;  ///< averaged over the Monte Carlo seeds
  KlPair random_kl;  ///< averaged over seeds
};

/// Both methods use a density-normalized gaussian and simplex-projected
/// coefficients. The random curve always runs to k_max; random KL terms use
/// supports of the greedy size k0. KL terms are Monte Carlo estimates from
/// draws of the first argument's mixture.
BenchReport bench_compare(const DataSet& data, const RadialKernel& kernel,
                          const BenchOptions& options);

/// Draws from sum_i alpha_i N(support_i, sigma^2 I); alpha must be on the simplex.
PointMatrix sample_gaussian_mixture(const SparseKernelMean& mean, std::size_t count,
                                    std::uint64_t seed);

KlPair kl_pair(const SparseKernelMean& full, const SparseKernelMean& sparse,
               std::size_t samples, std::uint64_t seed);

}  // namespace skm
