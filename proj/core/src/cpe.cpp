#include "skm/cpe.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/SVD>

#include "skm/coefficients.hpp"
#include "skm/errors.hpp"
#include "skm/parallel.hpp"

namespace skm {
namespace {

// Squared RKHS distance between means i and j of a Gram matrix.
double gram_distance_sq(const Eigen::MatrixXd& g, Eigen::Index i, Eigen::Index j) {
  return g(i, i) + g(j, j) - 2.0 * g(i, j);
}

[[noreturn]] void report_singular(const Eigen::MatrixXd& g, std::size_t n_train, double rcond) {
  // Look for the pair of training means that collapsed onto each other.
  std::size_t best_i = 0, best_j = 1;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_train; ++i) {
    for (std::size_t j = i + 1; j < n_train; ++j) {
      const double d2 = gram_distance_sq(g, static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (d2 < best) {
        best = d2;
        best_i = i;
        best_j = j;
      }
    }
  }
  throw SingularError("estimate_proportions: proportion system is singular (rcond " +
                      std::to_string(rcond) + "); closest training pair is " +
                      std::to_string(best_i) + " and " + std::to_string(best_j) +
                      " with squared distance " + std::to_string(best));
}

SparseKernelMean class_mean(const DataSet& data, const RadialKernel& kernel,
                            const CpeOptions& options) {
  if (!options.sparse) return full_mean(data, kernel);
  FitOptions fo;
  fo.k_max = options.k_max == 0 ? default_k_max(data.n()) : std::min(options.k_max, data.n());
  fo.epsilon = options.epsilon;
  fo.first = options.first;
  return fit(data, kernel, fo);
}

}  // namespace

ProportionEstimate estimate_proportions(const std::vector<SparseKernelMean>& train,
                                        const SparseKernelMean& test) {
  const std::size_t n = train.size();
  if (n < 2) throw std::invalid_argument("estimate_proportions: need at least two training means");

  // Gram of all N + 1 means; index N is the test mean.
  std::vector<const SparseKernelMean*> all;
  for (const auto& m : train) all.push_back(&m);
  all.push_back(&test);
  const auto total = static_cast<Eigen::Index>(all.size());
  Eigen::MatrixXd g(total, total);
  for (Eigen::Index i = 0; i < total; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      g(i, j) = g(j, i) = mean_inner(*all[static_cast<std::size_t>(i)], *all[static_cast<std::size_t>(j)]);
    }
  }

  const auto last = static_cast<Eigen::Index>(n - 1);
  const Eigen::Index t = total - 1;
  Eigen::MatrixXd dmat(last, last);
  Eigen::VectorXd e(last);
  for (Eigen::Index i = 0; i < last; ++i) {
    for (Eigen::Index j = 0; j < last; ++j) {
      dmat(i, j) = g(i, j) - g(i, last) - g(j, last) + g(last, last);
    }
    e(i) = g(i, t) - g(i, last) - g(t, last) + g(last, last);
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(dmat, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double rcond = sv(0) > 0.0 ? sv(sv.size() - 1) / sv(0) : 0.0;
  if (!(rcond >= kCpeSingularRcond)) report_singular(g, n, rcond);
  const Eigen::VectorXd head = svd.solve(e);

  ProportionEstimate out;
  out.pi_hat.resize(static_cast<Eigen::Index>(n));
  out.pi_hat.head(last) = head;
  out.pi_hat(last) = 1.0 - head.sum();
  if ((out.pi_hat.array() < 0.0).any()) {
    out.pi_hat = project_simplex(out.pi_hat);
    out.was_projected = true;
  }
  const Eigen::MatrixXd gt = g.topLeftCorner(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const Eigen::VectorXd gx = g.col(t).head(static_cast<Eigen::Index>(n));
  out.residual = std::max(0.0, out.pi_hat.dot(gt * out.pi_hat) - 2.0 * out.pi_hat.dot(gx) + g(t, t));
  return out;
}

ProportionEstimate estimate_proportions(const std::vector<DataSet>& train, const DataSet& test,
                                        const RadialKernel& kernel, const CpeOptions& options) {
  if (train.size() < 2) throw std::invalid_argument("estimate_proportions: need at least two classes");
  std::vector<SparseKernelMean> means;
  means.reserve(train.size());
  for (const auto& sample : train) means.push_back(class_mean(sample, kernel, options));
  return estimate_proportions(means, full_mean(test, kernel));
}

double l1_error(const Eigen::VectorXd& pi_true, const Eigen::VectorXd& pi_hat) {
  if (pi_true.size() != pi_hat.size()) throw std::invalid_argument("l1_error: length mismatch");
  return (pi_true - pi_hat).cwiseAbs().sum();
}

Eigen::VectorXd dirichlet_sample(std::size_t n, double omega, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("dirichlet_sample: need at least one component");
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw std::invalid_argument("dirichlet_sample: omega must be positive");
  }
  std::mt19937_64 rng(seed);
  std::gamma_distribution<double> draw(omega, 1.0);
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  // Tiny omega can underflow every gamma draw; redraw until something survives.
  double sum = 0.0;
  while (!(sum > 0.0)) {
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = draw(rng);
    sum = v.sum();
  }
  return v / sum;
}

ProportionModel::ProportionModel(std::vector<DataSet> train, KernelSpec spec, const CpeOptions& options)
    : train_(std::move(train)), spec_(spec), sparse_(options.sparse) {
  if (train_.size() < 2) throw std::invalid_argument("ProportionModel: need at least two classes");
  for (const auto& s : train_) {
    if (s.d() != train_.front().d()) {
      throw std::invalid_argument("ProportionModel: classes differ in dimension");
    }
  }
  supports_.resize(train_.size());
  if (!sparse_) return;
  const RadialKernel kernel(spec_, dim());
  parallel_for(train_.size(), [&](std::size_t c) {
    supports_[c] = class_mean(train_[c], kernel, options).support_indices;
  });
}

std::vector<SparseKernelMean> ProportionModel::class_means(double bandwidth) const {
  const RadialKernel kernel(spec_.with_bandwidth(bandwidth), dim());
  std::vector<SparseKernelMean> out;
  out.reserve(train_.size());
  for (std::size_t c = 0; c < train_.size(); ++c) {
    out.push_back(sparse_ ? fit_on_support(train_[c], kernel, supports_[c], false)
                          : full_mean(train_[c], kernel));
  }
  return out;
}

ProportionEstimate ProportionModel::estimate(const DataSet& test, double bandwidth) const {
  if (test.d() != dim()) throw std::invalid_argument("ProportionModel: test dimension mismatch");
  const RadialKernel kernel(spec_.with_bandwidth(bandwidth), dim());
  return estimate_proportions(class_means(bandwidth), full_mean(test, kernel));
}

ProportionEstimate ProportionModel::estimate(const SparseKernelMean& test_mean, double bandwidth) const {
  if (test_mean.kernel.spec() != spec_.with_bandwidth(bandwidth)) {
    throw std::invalid_argument("ProportionModel: test mean uses a different kernel");
  }
  return estimate_proportions(class_means(bandwidth), test_mean);
}

BandwidthSearchResult search_bandwidth(const ProportionModel& model, const DataSet& validation,
                                       const Eigen::VectorXd& validation_pi, double lo, double hi,
                                       std::size_t max_iter) {
  if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi)) {
    throw std::invalid_argument("search_bandwidth: need 0 < lo < hi");
  }
  BandwidthSearchResult best;
  best.l1 = std::numeric_limits<double>::infinity();
  auto score = [&](double log_bw) {
    const double bw = std::exp(log_bw);
    const double l1 = l1_error(validation_pi, model.estimate(validation, bw).pi_hat);
    ++best.evaluations;
    if (l1 < best.l1) {
      best.l1 = l1;
      best.bandwidth = bw;
    }
    return l1;
  };

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::log(lo), b = std::log(hi);
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = score(x1), f2 = score(x2);
  for (std::size_t it = 0; it < max_iter; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = score(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = score(x2);
    }
  }
  return best;
}

}  // namespace skm
