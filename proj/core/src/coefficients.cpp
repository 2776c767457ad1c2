#include "skm/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>

#include "skm/errors.hpp"
#include "skm/parallel.hpp"

namespace skm {

double kappa_entry(const DataSet& data, const RadialKernel& kernel, Index j, EvalCounter* counter) {
  if (j >= data.n()) throw std::invalid_argument("kappa_entry: index out of range");
  const std::size_t n = data.n();
  const auto xj = data.row(j);
  std::vector<double> partial(block_count(n), 0.0);
  for_each_block(n, [&](std::size_t b, std::size_t begin, std::size_t end) {
    double s = 0.0;
    for (std::size_t l = begin; l < end; ++l) s += kernel.inner_sq(squared_distance(data.row(l), xj));
    partial[b] = s;
  });
  double total = 0.0;
  for (const double p : partial) total += p;
  if (counter) counter->add(n);
  return total / static_cast<double>(n);
}

CoeffState init_state(const DataSet& data, const RadialKernel& kernel, Index first,
                      EvalCounter* counter) {
  if (first >= data.n()) throw std::invalid_argument("init_state: index out of range");
  const double c = kernel.g_zero();
  if (!(c > 0.0)) throw NumericError("init_state: g(0) must be positive");
  CoeffState s;
  s.support = {first};
  s.gram = Eigen::MatrixXd::Constant(1, 1, c);
  s.inv_gram = Eigen::MatrixXd::Constant(1, 1, 1.0 / c);
  s.kappa = Eigen::VectorXd::Constant(1, kappa_entry(data, kernel, first, counter));
  s.alpha = s.inv_gram * s.kappa;
  s.error_trace = {-s.alpha.dot(s.kappa)};
  return s;
}

bool try_extend_state(CoeffState& state, const DataSet& data, const RadialKernel& kernel,
                      Index new_index, EvalCounter* counter) {
  if (new_index >= data.n()) throw std::invalid_argument("extend_state: index out of range");
  if (std::find(state.support.begin(), state.support.end(), new_index) != state.support.end()) {
    throw std::invalid_argument("extend_state: index " + std::to_string(new_index) +
                                " is already in the support");
  }
  const auto m = static_cast<Eigen::Index>(state.support.size());
  const auto xn = data.row(new_index);
  const double c = kernel.g_zero();

  Eigen::VectorXd b(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    b(i) = kernel.inner_sq(squared_distance(data.row(state.support[static_cast<std::size_t>(i)]), xn));
  }
  if (counter) counter->add(static_cast<std::uint64_t>(m));

  const Eigen::VectorXd kb = state.inv_gram * b;
  const double schur = c - b.dot(kb);
  if (!(schur > kSingularTolerance * c)) return false;
  const double q0 = 1.0 / schur;

  const double kappa_new = kappa_entry(data, kernel, new_index, counter);

  Eigen::MatrixXd inv(m + 1, m + 1);
  inv.topLeftCorner(m, m) = state.inv_gram + q0 * kb * kb.transpose();
  inv.topRightCorner(m, 1) = -q0 * kb;
  inv.bottomLeftCorner(1, m) = -q0 * kb.transpose();
  inv(m, m) = q0;

  // q' kappa with q = [-K^{-1} b; 1]
  const double gain = kappa_new - kb.dot(state.kappa);

  state.gram.conservativeResize(m + 1, m + 1);
  state.gram.topRightCorner(m, 1) = b;
  state.gram.bottomLeftCorner(1, m) = b.transpose();
  state.gram(m, m) = c;
  state.inv_gram = std::move(inv);
  state.kappa.conservativeResize(m + 1);
  state.kappa(m) = kappa_new;
  state.alpha = state.inv_gram * state.kappa;
  // The bordered inverse drifts by about cond(K_I) * eps; one refinement step
  // against K_I itself recovers most of that in alpha.
  state.alpha += state.inv_gram * (state.kappa - state.gram * state.alpha);
  // E_{m+1} = E_m - q0 (q' kappa)^2, which equals -alpha' kappa and never increases.
  state.error_trace.push_back(state.error_trace.back() - q0 * gain * gain);
  state.support.push_back(new_index);
  return true;
}

CoeffState extend_state(CoeffState state, const DataSet& data, const RadialKernel& kernel,
                        Index new_index, EvalCounter* counter) {
  if (!try_extend_state(state, data, kernel, new_index, counter)) {
    throw SingularError("extend_state: support Gram matrix is singular after adding row " +
                        std::to_string(new_index));
  }
  return state;
}

double stop_ratio(std::span<const double> e) {
  if (e.size() < 2) throw std::invalid_argument("stop rule needs at least two error values");
  const double last = e.back();
  const double denom = std::abs(e.front() - last);
  if (denom == 0.0) return 0.0;
  return std::abs(e[e.size() - 2] - last) / denom;
}

bool stop_rule(std::span<const double> error_trace, double epsilon) {
  if (!(epsilon >= 0.0)) throw std::invalid_argument("stop rule epsilon must be nonnegative");
  return stop_ratio(error_trace) <= epsilon;
}

SolveReport solve_direct(const Eigen::MatrixXd& gram, const Eigen::VectorXd& kappa, double tol,
                         std::size_t max_iter) {
  const Eigen::Index m = gram.rows();
  if (gram.cols() != m || kappa.size() != m) {
    throw std::invalid_argument("solve_direct: dimension mismatch");
  }
  const double scale = gram.cwiseAbs().maxCoeff();
  if ((gram - gram.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("solve_direct: matrix is not symmetric");
  }
  if (max_iter == 0) max_iter = 10 * static_cast<std::size_t>(m);

  SolveReport report;
  report.alpha = Eigen::VectorXd::Zero(m);
  const double target = tol * kappa.norm();
  if (kappa.norm() == 0.0) return report;

  const Eigen::VectorXd diag = gram.diagonal();
  const bool jacobi = (diag.array() > 0.0).all();
  auto precondition = [&](const Eigen::VectorXd& r) -> Eigen::VectorXd {
    return jacobi ? Eigen::VectorXd(r.cwiseQuotient(diag)) : r;
  };

  Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd r = kappa;
  Eigen::VectorXd z = precondition(r);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  std::size_t it = 0;
  double res = r.norm();
  while (res > target && it < max_iter) {
    const Eigen::VectorXd kp = gram * p;
    const double pkp = p.dot(kp);
    if (!(pkp > 0.0)) break;
    const double step = rz / pkp;
    x += step * p;
    r -= step * kp;
    ++it;
    res = r.norm();
    if (res <= target) break;
    z = precondition(r);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  // Recompute the true residual; the recurrence drifts on ill-conditioned systems.
  res = (gram * x - kappa).norm();
  report.iterations = it;
  if (res <= target) {
    report.alpha = std::move(x);
    report.relative_residual = res / kappa.norm();
    return report;
  }
  if (m <= 64) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    Eigen::VectorXd dense = ldlt.solve(kappa);
    const double dense_res = (gram * dense - kappa).norm();
    if (ldlt.info() == Eigen::Success && std::isfinite(dense_res)) {
      report.alpha = std::move(dense);
      report.relative_residual = dense_res / kappa.norm();
      report.used_dense_fallback = true;
      return report;
    }
  }
  throw ConvergenceError("solve_direct: conjugate gradients did not converge in " +
                             std::to_string(max_iter) + " iterations (relative residual " +
                             std::to_string(res / kappa.norm()) + ")",
                         res / kappa.norm());
}

Eigen::VectorXd project_simplex(const Eigen::VectorXd& v) {
  const Eigen::Index k = v.size();
  if (k == 0) throw std::invalid_argument("project_simplex: empty vector");
  if (!v.allFinite()) throw std::invalid_argument("project_simplex: non-finite entry");
  std::vector<double> u(v.data(), v.data() + k);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (Eigen::Index j = 0; j < k; ++j) {
    cumulative += u[static_cast<std::size_t>(j)];
    const double t = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (u[static_cast<std::size_t>(j)] - t > 0.0) theta = t;
  }
  Eigen::VectorXd w = (v.array() - theta).cwiseMax(0.0);
  // Absorb rounding so the sum is one to working precision.
  const double sum = w.sum();
  if (sum > 0.0) w /= sum;
  return w;
}

Eigen::MatrixXd support_gram(const DataSet& data, const RadialKernel& kernel,
                             std::span<const Index> support) {
  const auto m = static_cast<Eigen::Index>(support.size());
  Eigen::MatrixXd k(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    k(i, i) = kernel.g_zero();
    for (Eigen::Index j = 0; j < i; ++j) {
      const double v = kernel.inner_sq(squared_distance(data.row(support[static_cast<std::size_t>(i)]),
                                                        data.row(support[static_cast<std::size_t>(j)])));
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

Eigen::VectorXd support_kappa(const DataSet& data, const RadialKernel& kernel,
                              std::span<const Index> support) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(support.size()));
  for (std::size_t i = 0; i < support.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = kappa_entry(data, kernel, support[i]);
  }
  return out;
}

}  // namespace skm
