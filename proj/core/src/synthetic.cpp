#include "skm/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace skm::synthetic {
namespace {

void require_plane(std::size_t d, std::string_view shape) {
  if (d != 2) throw std::invalid_argument(std::string(shape) + " data is two-dimensional");
}

// Point i goes to center i mod k.
DataSet round_robin_blobs(const PointMatrix& centers, std::size_t n, double stddev,
                          std::uint64_t seed, std::string name) {
  if (centers.rows() == 0 || n == 0) throw std::invalid_argument("gaussian_blobs: nothing to draw");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, stddev);
  PointMatrix pts(static_cast<Eigen::Index>(n), centers.cols());
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    const Eigen::Index c = i % centers.rows();
    for (Eigen::Index j = 0; j < pts.cols(); ++j) pts(i, j) = centers(c, j) + noise(rng);
  }
  return DataSet(std::move(pts), std::move(name));
}

}  // namespace

DataSet gaussian_blobs(const PointMatrix& centers, std::size_t per_center, double stddev,
                       std::uint64_t seed) {
  if (!(stddev >= 0.0)) throw std::invalid_argument("gaussian_blobs: stddev must be nonnegative");
  return round_robin_blobs(centers, per_center * static_cast<std::size_t>(centers.rows()), stddev, seed,
                           "blobs");
}

DataSet banana(std::size_t n, std::uint64_t seed, double noise) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> t(-2.0, 2.0);
  std::normal_distribution<double> eps(0.0, noise);
  PointMatrix pts(static_cast<Eigen::Index>(n), 2);
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    const double u = t(rng);
    pts(i, 0) = u + eps(rng);
    pts(i, 1) = 0.5 * u * u - 1.0 + eps(rng);
  }
  return DataSet(std::move(pts), "banana");
}

DataSet two_moons(std::size_t n, std::uint64_t seed, double noise) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
  std::normal_distribution<double> eps(0.0, noise);
  PointMatrix pts(static_cast<Eigen::Index>(n), 2);
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    const double a = angle(rng);
    if (i % 2 == 0) {
      pts(i, 0) = std::cos(a);
      pts(i, 1) = std::sin(a);
    } else {
      pts(i, 0) = 1.0 - std::cos(a);
      pts(i, 1) = 0.5 - std::sin(a);
    }
    pts(i, 0) += eps(rng);
    pts(i, 1) += eps(rng);
  }
  return DataSet(std::move(pts), "moons");
}

DataSet ring(std::size_t n, std::uint64_t seed, double noise) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> eps(0.0, noise);
  PointMatrix pts(static_cast<Eigen::Index>(n), 2);
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    const double a = angle(rng);
    const double r = 1.0 + eps(rng);
    pts(i, 0) = r * std::cos(a);
    pts(i, 1) = r * std::sin(a);
  }
  return DataSet(std::move(pts), "ring");
}

DataSet gaussian(std::size_t n, std::size_t d, std::uint64_t seed, double stddev) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> draw(0.0, stddev);
  PointMatrix pts(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < pts.size(); ++i) pts.data()[i] = draw(rng);
  return DataSet(std::move(pts), "gaussian");
}

DataSet generate(std::string_view shape, std::size_t n, std::size_t d, std::uint64_t seed) {
  if (n == 0 || d == 0) throw std::invalid_argument("generate: n and d must be positive");
  if (shape == "blobs") {
    // Three centers drawn from the seed, unit spread.
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> where(-5.0, 5.0);
    PointMatrix centers(3, static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < centers.size(); ++i) centers.data()[i] = where(rng);
    return round_robin_blobs(centers, n, 1.0, seed, "blobs");
  }
  if (shape == "gaussian") return gaussian(n, d, seed);
  if (shape == "banana") {
    require_plane(d, shape);
    return banana(n, seed);
  }
  if (shape == "moons") {
    require_plane(d, shape);
    return two_moons(n, seed);
  }
  if (shape == "ring") {
    require_plane(d, shape);
    return ring(n, seed);
  }
  throw std::invalid_argument("unknown synthetic shape '" + std::string(shape) +
                              "' (blobs|banana|moons|ring|gaussian)");
}

}  // namespace skm::synthetic
