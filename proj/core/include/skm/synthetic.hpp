#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "skm/dataset.hpp"

namespace skm::synthetic {

/// Isotropic gaussian blobs, `per_center` points around each row of `centers`.
DataSet gaussian_blobs(const PointMatrix& centers, std::size_t per_center, double stddev,
                       std::uint64_t seed);

/// Two-dimensional banana: a noisy parabolic arc.
DataSet banana(std::size_t n, std::uint64_t seed, double noise = 0.25);

/// Two interleaved half circles in the plane.
DataSet two_moons(std::size_t n, std::uint64_t seed, double noise = 0.1);

/// Noisy ring of unit radius.
DataSet ring(std::size_t n, std::uint64_t seed, double noise = 0.1);

/// Standard normal points in d dimensions.
DataSet gaussian(std::size_t n, std::size_t d, std::uint64_t seed, double stddev = 1.0);

/// Dispatch by name: blobs, banana, moons, ring, gaussian.
DataSet generate(std::string_view shape, std::size_t n, std::size_t d, std::uint64_t seed);

}  // namespace skm::synthetic
