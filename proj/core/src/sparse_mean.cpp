#include "skm/sparse_mean.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "skm/errors.hpp"
#include "skm/parallel.hpp"

namespace skm {
namespace {

PointMatrix gather_rows(const DataSet& data, std::span<const Index> rows) {
  PointMatrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(data.d()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.row(static_cast<Eigen::Index>(r)) = data.points().row(static_cast<Eigen::Index>(rows[r]));
  }
  return out;
}

void check_kernel_dim(const DataSet& data, const RadialKernel& kernel) {
  if (kernel.dim() != data.d()) {
    throw std::invalid_argument("kernel dimension " + std::to_string(kernel.dim()) +
                                " does not match data dimension " + std::to_string(data.d()));
  }
}

std::vector<Index> sample_without_replacement(std::size_t n, std::size_t k, std::uint64_t seed) {
  std::vector<Index> rows(n);
  std::iota(rows.begin(), rows.end(), Index{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(rows[i], rows[pick(rng)]);
  }
  rows.resize(k);
  return rows;
}

SparseKernelMean assemble(const DataSet& data, const RadialKernel& kernel, const CoeffState& state,
                          FitDiagnostics diag) {
  SparseKernelMean out{kernel, gather_rows(data, state.support), state.alpha, state.support,
                       std::move(diag)};
  out.diagnostics.error_trace = state.error_trace;
  if (out.diagnostics.density_projected) out.alpha = project_simplex(out.alpha);
  return out;
}

}  // namespace

std::size_t default_k_max(std::size_t n) {
  const auto k = static_cast<std::size_t>(std::floor(3.0 * std::sqrt(static_cast<double>(n))));
  return std::clamp<std::size_t>(k, 1, std::max<std::size_t>(n, 1));
}

SparseKernelMean fit(const DataSet& data, const RadialKernel& kernel, const FitOptions& options,
                     EvalCounter* counter) {
  check_kernel_dim(data, kernel);
  const std::size_t n = data.n();
  const std::size_t k_max = options.k_max == 0 ? default_k_max(n) : options.k_max;
  if (k_max > n) {
    throw std::invalid_argument("fit: k_max = " + std::to_string(k_max) + " exceeds n = " +
                                std::to_string(n));
  }
  if (!(options.epsilon >= 0.0)) throw std::invalid_argument("fit: epsilon must be nonnegative");

  FitDiagnostics diag;
  diag.k_max = k_max;
  diag.epsilon = options.epsilon;
  diag.density_projected = options.density_mode;

  const Index first = options.first.resolve(n);
  Selection sel = start_selection(data, first);
  CoeffState state = init_state(data, kernel, first, counter);

  while (state.size() < k_max) {
    // Every remaining row duplicates a center; nothing left to represent.
    if (sel.complete() || sel.radius() == 0.0) break;
    extend_selection_in_place(sel, data);
    const Index j = sel.order.back();
    if (!try_extend_state(state, data, kernel, j, counter)) {
      diag.skipped.push_back(j);
      continue;
    }
    if (stop_rule(state.error_trace, options.epsilon)) {
      diag.stopped_early = state.size() < k_max;
      break;
    }
  }
  diag.radius_trace = sel.radius_trace;
  return assemble(data, kernel, state, std::move(diag));
}

SparseKernelMean fit_on_support(const DataSet& data, const RadialKernel& kernel,
                                std::span<const Index> support, bool density_mode) {
  check_kernel_dim(data, kernel);
  if (support.empty()) throw std::invalid_argument("fit_on_support: empty support");
  const Eigen::MatrixXd gram = support_gram(data, kernel, support);
  const Eigen::VectorXd kappa = support_kappa(data, kernel, support);
  SolveReport solved = solve_direct(gram, kappa);

  SparseKernelMean out{kernel, gather_rows(data, support), std::move(solved.alpha),
                       std::vector<Index>(support.begin(), support.end()), {}};
  out.diagnostics.k_max = support.size();
  out.diagnostics.error_trace = {-out.alpha.dot(kappa)};
  out.diagnostics.density_projected = density_mode;
  if (density_mode) out.alpha = project_simplex(out.alpha);
  return out;
}

SparseKernelMean random_selection_fit(const DataSet& data, const RadialKernel& kernel,
                                      std::size_t k, std::uint64_t seed, bool density_mode) {
  check_kernel_dim(data, kernel);
  if (k < 1 || k > data.n()) throw std::invalid_argument("random_selection_fit: need 1 <= k <= n");
  const auto rows = sample_without_replacement(data.n(), k, seed);

  FitDiagnostics diag;
  diag.k_max = k;
  diag.density_projected = density_mode;
  CoeffState state = init_state(data, kernel, rows.front());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!try_extend_state(state, data, kernel, rows[i])) diag.skipped.push_back(rows[i]);
  }
  return assemble(data, kernel, state, std::move(diag));
}

SparseKernelMean full_mean(const DataSet& data, const RadialKernel& kernel) {
  return weighted_mean(data, kernel,
                       Eigen::VectorXd::Constant(static_cast<Eigen::Index>(data.n()),
                                                 1.0 / static_cast<double>(data.n())));
}

SparseKernelMean weighted_mean(const DataSet& data, const RadialKernel& kernel,
                               Eigen::VectorXd weights) {
  check_kernel_dim(data, kernel);
  if (static_cast<std::size_t>(weights.size()) != data.n()) {
    throw std::invalid_argument("weighted_mean: one weight per row required");
  }
  std::vector<Index> rows(data.n());
  std::iota(rows.begin(), rows.end(), Index{0});
  SparseKernelMean out{kernel, data.points(), std::move(weights), std::move(rows), {}};
  out.diagnostics.k_max = data.n();
  return out;
}

double evaluate_at(const SparseKernelMean& mean, std::span<const double> query,
                   EvalCounter* counter) {
  if (query.size() != mean.dim()) {
    throw std::invalid_argument("evaluate: query dimension " + std::to_string(query.size()) +
                                " does not match model dimension " + std::to_string(mean.dim()));
  }
  double v = 0.0;
  for (std::size_t i = 0; i < mean.size(); ++i) {
    v += mean.alpha(static_cast<Eigen::Index>(i)) *
         mean.kernel.eval_sq(squared_distance(query, mean.point(i)));
  }
  if (counter) counter->add(mean.size());
  return v;
}

Eigen::VectorXd evaluate(const SparseKernelMean& mean, const PointMatrix& queries,
                         EvalCounter* counter) {
  if (static_cast<std::size_t>(queries.cols()) != mean.dim()) {
    throw std::invalid_argument("evaluate: query dimension " + std::to_string(queries.cols()) +
                                " does not match model dimension " + std::to_string(mean.dim()));
  }
  Eigen::VectorXd out(queries.rows());
  const auto d = static_cast<std::size_t>(queries.cols());
  parallel_for(static_cast<std::size_t>(queries.rows()), [&](std::size_t q) {
    out(static_cast<Eigen::Index>(q)) =
        evaluate_at(mean, {queries.data() + q * d, d}, counter);
  });
  return out;
}

Eigen::VectorXd evaluate_full(const DataSet& data, const RadialKernel& kernel,
                              const PointMatrix& queries) {
  check_kernel_dim(data, kernel);
  if (static_cast<std::size_t>(queries.cols()) != data.d()) {
    throw std::invalid_argument("evaluate_full: query dimension does not match data dimension");
  }
  const std::size_t d = data.d();
  const double inv_n = 1.0 / static_cast<double>(data.n());
  Eigen::VectorXd out(queries.rows());
  parallel_for(static_cast<std::size_t>(queries.rows()), [&](std::size_t q) {
    const std::span<const double> query{queries.data() + q * d, d};
    double v = 0.0;
    for (std::size_t i = 0; i < data.n(); ++i) v += kernel.eval_sq(squared_distance(query, data.row(i)));
    out(static_cast<Eigen::Index>(q)) = v * inv_n;
  });
  return out;
}

double mean_inner(const SparseKernelMean& a, const SparseKernelMean& b, EvalCounter* counter) {
  if (!(a.kernel == b.kernel)) {
    throw std::invalid_argument("mean_inner: kernel mismatch (" + a.kernel.spec().to_string() +
                                " vs " + b.kernel.spec().to_string() + ")");
  }
  std::vector<double> rows(a.size(), 0.0);
  parallel_for(a.size(), [&](std::size_t i) {
    double s = 0.0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      s += b.alpha(static_cast<Eigen::Index>(j)) *
           a.kernel.inner_sq(squared_distance(a.point(i), b.point(j)));
    }
    rows[i] = a.alpha(static_cast<Eigen::Index>(i)) * s;
  });
  if (counter) counter->add(static_cast<std::uint64_t>(a.size()) * b.size());
  double total = 0.0;
  for (const double r : rows) total += r;
  return total;
}

double incoherence(const DataSet& data, const RadialKernel& kernel, std::span<const Index> support) {
  check_kernel_dim(data, kernel);
  if (support.empty()) throw std::invalid_argument("incoherence: empty support");
  std::vector<bool> in(data.n(), false);
  for (const Index i : support) {
    if (i >= data.n()) throw std::invalid_argument("incoherence: support index out of range");
    in[i] = true;
  }
  const auto dist = distances_to_set(data, support);
  double w = -1.0;
  for (std::size_t j = 0; j < data.n(); ++j) {
    if (!in[j]) w = std::max(w, dist[j]);
  }
  if (w < 0.0) throw std::invalid_argument("incoherence: support covers every index");
  return kernel.inner_at(w);
}

double incoherence(const Selection& sel, const RadialKernel& kernel) {
  if (sel.order.empty()) throw std::invalid_argument("incoherence: empty selection");
  if (sel.complete()) throw std::invalid_argument("incoherence: selection covers every index");
  return kernel.inner_at(sel.radius());
}

double bound_value(std::size_t n, std::size_t support_size, double c, double nu) {
  if (n == 0 || support_size > n) throw std::invalid_argument("bound_value: need |I| <= n");
  if (!(c > 0.0)) throw std::invalid_argument("bound_value: C must be positive");
  if (nu < 0.0) throw std::invalid_argument("bound_value: nu must be nonnegative");
  if (nu > c) throw NumericError("bound_value: nu exceeds C; inner products are inconsistent");
  const double frac = 1.0 - static_cast<double>(support_size) / static_cast<double>(n);
  return frac * std::sqrt((c * c - nu * nu) / c);
}

double mean_norm_sq(const DataSet& data, const RadialKernel& kernel) {
  check_kernel_dim(data, kernel);
  const std::size_t n = data.n();
  if (n > kAuditMaxN) throw std::invalid_argument("mean_norm_sq: n exceeds the audit size guard");
  std::vector<double> rows(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += kernel.inner_sq(squared_distance(data.row(i), data.row(j)));
    rows[i] = s;
  });
  double total = 0.0;
  for (const double r : rows) total += r;
  return total / (static_cast<double>(n) * static_cast<double>(n));
}

double residual_norm_sq(const DataSet& data, const RadialKernel& kernel,
                        std::span<const Index> support, const Eigen::VectorXd& alpha) {
  check_kernel_dim(data, kernel);
  const std::size_t n = data.n();
  if (n > kAuditMaxN) throw std::invalid_argument("residual_norm_sq: n exceeds the audit size guard");
  if (static_cast<std::size_t>(alpha.size()) != support.size()) {
    throw std::invalid_argument("residual_norm_sq: alpha length differs from support size");
  }
  Eigen::VectorXd w = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), 1.0 / static_cast<double>(n));
  for (std::size_t i = 0; i < support.size(); ++i) {
    w(static_cast<Eigen::Index>(support[i])) -= alpha(static_cast<Eigen::Index>(i));
  }
  std::vector<double> rows(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      s += w(static_cast<Eigen::Index>(j)) * kernel.inner_sq(squared_distance(data.row(i), data.row(j)));
    }
    rows[i] = w(static_cast<Eigen::Index>(i)) * s;
  });
  double total = 0.0;
  for (const double r : rows) total += r;
  return std::max(total, 0.0);
}

}  // namespace skm
