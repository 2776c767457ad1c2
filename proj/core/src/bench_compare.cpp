#include "skm/bench_compare.hpp"

#include <cmath>
#include <random>
#include <string>
#include <stdexcept>

#include "skm/divergences.hpp"

namespace skm {
namespace {

void require_gaussian_density(const RadialKernel& kernel, const char* who) {
  const auto& spec = kernel.spec();
  if (spec.family != KernelFamily::gaussian || spec.normalization != Normalization::density) {
    throw std::invalid_argument(std::string(who) + ": needs a density-normalized gaussian kernel");
  }
}

std::vector<double> padded(std::vector<double> curve, std::size_t length) {
  if (curve.empty()) throw std::logic_error("bench_compare: empty error trace");
  curve.resize(std::max(length, curve.size()), curve.back());
  return curve;
}

double mean_log_ratio(const SparseKernelMean& p, const SparseKernelMean& q, const PointMatrix& x) {
  const Eigen::VectorXd pv = evaluate(p, x);
  const Eigen::VectorXd qv = evaluate(q, x);
  double total = 0.0;
  for (Eigen::Index i = 0; i < pv.size(); ++i) {
    total += std::log(std::max(pv(i), kDensityFloor)) - std::log(std::max(qv(i), kDensityFloor));
  }
  return total / static_cast<double>(pv.size());
}

}  // namespace

PointMatrix sample_gaussian_mixture(const SparseKernelMean& mean, std::size_t count,
                                    std::uint64_t seed) {
  if (mean.kernel.spec().family != KernelFamily::gaussian) {
    throw std::invalid_argument("sample_gaussian_mixture: needs a gaussian kernel");
  }
  if ((mean.alpha.array() < 0.0).any() || std::abs(mean.alpha.sum() - 1.0) > 1e-9) {
    throw std::invalid_argument("sample_gaussian_mixture: weights are not on the simplex");
  }
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> pick(mean.alpha.data(), mean.alpha.data() + mean.alpha.size());
  std::normal_distribution<double> noise(0.0, mean.kernel.spec().sigma);
  PointMatrix out(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(mean.dim()));
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const auto centre = mean.point(pick(rng));
    for (Eigen::Index j = 0; j < out.cols(); ++j) out(i, j) = centre[static_cast<std::size_t>(j)] + noise(rng);
  }
  return out;
}

KlPair kl_pair(const SparseKernelMean& full, const SparseKernelMean& sparse, std::size_t samples,
               std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("kl_pair: need at least one sample");
  KlPair out;
  out.full_to_sparse = mean_log_ratio(full, sparse, sample_gaussian_mixture(full, samples, seed));
  out.sparse_to_full = mean_log_ratio(sparse, full, sample_gaussian_mixture(sparse, samples, seed + 1));
  return out;
}

BenchReport bench_compare(const DataSet& data, const RadialKernel& kernel, const BenchOptions& options) {
  require_gaussian_density(kernel, "bench_compare");
  const std::size_t k_max = options.k_max == 0 ? default_k_max(data.n()) : options.k_max;
  if (k_max > data.n()) throw std::invalid_argument("bench_compare: k_max exceeds n");
  if (options.seeds == 0) throw std::invalid_argument("bench_compare: need at least one seed");

  BenchReport report;
  const SparseKernelMean full = full_mean(data, kernel);

  FitOptions fo;
  fo.k_max = k_max;
  fo.epsilon = options.epsilon;
  fo.density_mode = true;
  fo.first = options.first;
  const SparseKernelMean greedy = fit(data, kernel, fo);
  report.greedy_curve = padded(greedy.diagnostics.error_trace, k_max);
  report.greedy_k0 = greedy.size();

  report.random_curve.assign(k_max, 0.0);
  const double inv = 1.0 / static_cast<double>(options.seeds);
  for (std::size_t s = 0; s < options.seeds; ++s) {
    const std::uint64_t seed = options.base_seed + s;
    const SparseKernelMean random = random_selection_fit(data, kernel, k_max, seed, true);
    const auto curve = padded(random.diagnostics.error_trace, k_max);
    for (std::size_t m = 0; m < k_max; ++m) report.random_curve[m] += inv * curve[m];

    // KL terms compare supports of equal size.
    const SparseKernelMean matched = greedy.size() == k_max
                                         ? random
                                         : random_selection_fit(data, kernel, greedy.size(), seed, true);
    report.random_mean_k += inv * static_cast<double>(matched.size());

    const KlPair g = kl_pair(full, greedy, options.kl_samples, 2 * seed);
    const KlPair r = kl_pair(full, matched, options.kl_samples, 2 * seed);
    report.greedy_kl.full_to_sparse += inv * g.full_to_sparse;
    report.greedy_kl.sparse_to_full += inv * g.sparse_to_full;
    report.random_kl.full_to_sparse += inv * r.full_to_sparse;
    report.random_kl.sparse_to_full += inv * r.sparse_to_full;
  }
  return report;
}

}  // namespace skm
