#include "skm/divergences.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "skm/parallel.hpp"

namespace skm {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void require_density(const SparseKernelMean& m, const char* who) {
  if (m.kernel.spec().normalization != Normalization::density) {
    throw std::invalid_argument(std::string(who) + ": kernel mean is not density-normalized");
  }
  if ((m.alpha.array() < 0.0).any() || std::abs(m.alpha.sum() - 1.0) > 1e-9) {
    throw std::invalid_argument(std::string(who) + ": coefficients are not on the simplex");
  }
}

}  // namespace

DistanceMode parse_distance_mode(std::string_view text) {
  if (text == "rkhs") return DistanceMode::rkhs;
  if (text == "symkl" || text == "sym_kl") return DistanceMode::sym_kl;
  throw std::invalid_argument("unknown distance mode '" + std::string(text) + "' (rkhs|symkl)");
}

std::string to_string(DistanceMode mode) { return mode == DistanceMode::rkhs ? "rkhs" : "symkl"; }

double rkhs_distance(const SparseKernelMean& a, const SparseKernelMean& b, EvalCounter* counter) {
  if (a.kernel.spec().space != InnerSpace::rkhs || b.kernel.spec().space != InnerSpace::rkhs) {
    throw std::invalid_argument("rkhs_distance: kernel means must use the rkhs space");
  }
  const double aa = mean_inner(a, a, counter);
  const double ab = mean_inner(a, b, counter);
  const double bb = mean_inner(b, b, counter);
  return std::sqrt(std::max(0.0, aa - 2.0 * ab + bb));
}

double kl_divergence(const SparseKernelMean& p, const SparseKernelMean& q,
                     const PointMatrix& eval_points, double floor) {
  require_density(p, "kl_divergence");
  require_density(q, "kl_divergence");
  if (eval_points.rows() == 0) throw std::invalid_argument("kl_divergence: empty evaluation set");
  if (!(floor > 0.0)) throw std::invalid_argument("kl_divergence: floor must be positive");
  const Eigen::VectorXd pv = evaluate(p, eval_points);
  const Eigen::VectorXd qv = evaluate(q, eval_points);
  double total = 0.0;
  for (Eigen::Index i = 0; i < pv.size(); ++i) {
    total += std::log(std::max(pv(i), floor)) - std::log(std::max(qv(i), floor));
  }
  return total / static_cast<double>(pv.size());
}

double symmetrized_kl(const SparseKernelMean& p, const SparseKernelMean& q,
                      const PointMatrix& eval_p, const PointMatrix& eval_q, double floor) {
  return kl_divergence(p, q, eval_p, floor) + kl_divergence(q, p, eval_q, floor);
}

DistanceMatrix distance_matrix(const std::vector<DataSet>& samples, const KernelSpec& spec,
                               const DistanceOptions& options) {
  const std::size_t count = samples.size();
  if (count < 2) throw std::invalid_argument("distance_matrix: need at least two samples");
  const std::size_t d = samples.front().d();
  for (const auto& s : samples) {
    if (s.d() != d) throw std::invalid_argument("distance_matrix: samples differ in dimension");
  }

  KernelSpec effective = spec;
  const bool kl = options.mode == DistanceMode::sym_kl;
  if (kl) {
    effective.normalization = Normalization::density;
  } else if (spec.space != InnerSpace::rkhs) {
    throw std::invalid_argument("distance_matrix: rkhs mode needs an rkhs kernel");
  }
  const RadialKernel kernel(effective, d);

  DistanceMatrix out;
  out.mode = options.mode;
  out.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(count));
  out.support_sizes.resize(count);
  for (const auto& s : samples) out.labels.push_back(s.name());

  std::vector<SparseKernelMean> means;
  std::vector<PointMatrix> holdout;
  means.reserve(count);
  const auto t_fit = Clock::now();
  for (const auto& s : samples) {
    const DataSet* estimation = &s;
    InterleavedSplit split;
    if (kl) {
      split = split_even_odd(s);
      estimation = &split.even;
      holdout.push_back(split.odd.points());
    }
    if (options.sparse) {
      FitOptions fo;
      const std::size_t n = estimation->n();
      fo.k_max = options.k_max == 0 ? default_k_max(n) : std::min(options.k_max, n);
      fo.epsilon = options.epsilon;
      fo.density_mode = kl;
      fo.first = options.first;
      means.push_back(fit(*estimation, kernel, fo));
    } else {
      means.push_back(full_mean(*estimation, kernel));
    }
  }
  for (std::size_t i = 0; i < count; ++i) out.support_sizes[i] = means[i].size();
  out.fit_seconds = seconds_since(t_fit);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = kl ? i : i + 1; j < count; ++j) pairs.emplace_back(i, j);
  }
  const auto t_fill = Clock::now();
  std::vector<double> values(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    values[p] = kl ? symmetrized_kl(means[i], means[j], holdout[i], holdout[j], options.floor)
                   : rkhs_distance(means[i], means[j]);
  });
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [i, j] = pairs[p];
    out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values[p];
    out.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = values[p];
  }
  out.fill_seconds = seconds_since(t_fill);
  return out;
}

double relative_frobenius_error(const Eigen::MatrixXd& reference, const Eigen::MatrixXd& approx) {
  if (reference.rows() != approx.rows() || reference.cols() != approx.cols()) {
    throw std::invalid_argument("relative_frobenius_error: shape mismatch");
  }
  const double denom = reference.norm();
  if (denom == 0.0) throw std::invalid_argument("relative_frobenius_error: reference is zero");
  return (reference - approx).norm() / denom;
}

}  // namespace skm
