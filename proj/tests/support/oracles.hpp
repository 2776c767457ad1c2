#pragma once

// Independent reference computations for tests. Nothing here calls into the
// library's numerics; kernels are re-derived from their formulas.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "skm/dataset.hpp"

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Composite Simpson on [a, b] with `panels` (even) subintervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// Composite midpoint rule; never touches the endpoints.
inline double midpoint(const std::function<double(double)>& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double s = 0.0;
  for (int i = 0; i < panels; ++i) s += f(a + (i + 0.5) * h);
  return s * h;
}

/// Integral over the whole real line via t = tan(theta). Heavy tails leave a
/// nonzero integrand at theta = +-pi/2, so the open midpoint rule is used.
inline double integrate_line(const std::function<double(double)>& f, int panels) {
  const double edge = std::numbers::pi / 2.0;
  return midpoint(
      [&](double th) {
        const double c = std::cos(th);
        return f(std::tan(th)) / (c * c);
      },
      -edge, edge, panels);
}

inline double sq_dist(const double* a, const double* b, std::size_t d) {
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

/// exp(-r^2 / 2 s^2), no normalization.
inline double gauss(double r2, double sigma) { return std::exp(-r2 / (2.0 * sigma * sigma)); }

/// Full Gram matrix of a unit gaussian over all rows.
inline Matrix gauss_gram(const skm::PointMatrix& x, double sigma) {
  const auto n = x.rows();
  const auto d = static_cast<std::size_t>(x.cols());
  Matrix k(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) k(i, j) = gauss(sq_dist(&x(i, 0), &x(j, 0), d), sigma);
  return k;
}

/// |mean - sum_i alpha_i z_{I_i}|^2 expanded from a full Gram matrix.
inline double residual_sq(const Matrix& k, const std::vector<std::size_t>& support, const Vector& alpha) {
  const auto n = static_cast<double>(k.rows());
  const double full = k.sum() / (n * n);
  double cross = 0.0, self = 0.0;
  for (std::size_t a = 0; a < support.size(); ++a) {
    cross += alpha(static_cast<Eigen::Index>(a)) * k.row(static_cast<Eigen::Index>(support[a])).sum() / n;
    for (std::size_t b = 0; b < support.size(); ++b) {
      self += alpha(static_cast<Eigen::Index>(a)) * alpha(static_cast<Eigen::Index>(b)) *
              k(static_cast<Eigen::Index>(support[a]), static_cast<Eigen::Index>(support[b]));
    }
  }
  return full - 2.0 * cross + self;
}

/// Coverage radius of `centers` by brute force.
inline double coverage(const skm::PointMatrix& x, const std::vector<std::size_t>& centers) {
  const auto d = static_cast<std::size_t>(x.cols());
  double w = 0.0;
  for (Eigen::Index j = 0; j < x.rows(); ++j) {
    double best = INFINITY;
    for (const auto c : centers)
      best = std::min(best, std::sqrt(sq_dist(&x(j, 0), &x(static_cast<Eigen::Index>(c), 0), d)));
    w = std::max(w, best);
  }
  return w;
}

inline skm::PointMatrix random_points(std::size_t n, std::size_t d, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, scale);
  skm::PointMatrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = g(rng);
  return x;
}

inline skm::DataSet random_data(std::size_t n, std::size_t d, std::uint64_t seed, double scale = 1.0) {
  return skm::DataSet(random_points(n, d, seed, scale));
}

inline skm::DataSet column(std::initializer_list<double> values) {
  skm::PointMatrix x(static_cast<Eigen::Index>(values.size()), 1);
  Eigen::Index i = 0;
  for (const double v : values) x(i++, 0) = v;
  return skm::DataSet(std::move(x));
}

}  // namespace oracle
