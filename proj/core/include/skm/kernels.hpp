#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "skm/dataset.hpp"

namespace skm {

enum class KernelFamily { gaussian, laplacian, student };
enum class Normalization { unit, density };
enum class InnerSpace { rkhs, l2 };

/// Family, parameters and modes of a radial kernel, independent of dimension.
///
/// String grammar (see docs/cli.md):
///   family[:p=v[,p=v]][:unit|density][:rkhs|l2]
/// with families `gaussian` (sigma), `laplacian` (gamma), `student` (alpha, beta)
/// and `cauchy` (beta; student with alpha = (1+d)/2 once bound to a dimension).
/// Normalization defaults to unit and the space to rkhs.
struct KernelSpec {
  KernelFamily family = KernelFamily::gaussian;
  double sigma = 1.0;  ///< gaussian
  double gamma = 1.0;  ///< laplacian
  double alpha = 1.0;  ///< student exponent
  double beta = 1.0;   ///< student scale
  bool cauchy = false; ///< student with alpha tied to the dimension
  Normalization normalization = Normalization::unit;
  InnerSpace space = InnerSpace::rkhs;

  static KernelSpec parse(std::string_view text);
  std::string to_string() const;

  /// Same family and modes with the scale parameter replaced.
  KernelSpec with_bandwidth(double bandwidth) const;
  double bandwidth() const noexcept;

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

/// Thread-safe tally of kernel evaluations, for cost accounting in tests and
/// the CLI. Passing nullptr wherever a counter is accepted disables counting.
class EvalCounter {
 public:
  void add(std::uint64_t k) noexcept { count_.fetch_add(k, std::memory_order_relaxed); }
  std::uint64_t count() const noexcept { return count_.load(std::memory_order_relaxed); }
  void reset() noexcept { count_.store(0, std::memory_order_relaxed); }

 private:
  std::atomic<std::uint64_t> count_{0};
};

/// A KernelSpec bound to a dimension d, with its normalization constant fixed.
///
/// kernel_eval: phi(x, x') = c * shape(|x - x'|).
/// gram_inner: <phi(., x), phi(., x')> in the chosen space. In rkhs this is
/// phi itself; in l2 it has a closed form only for the gaussian and for the
/// cauchy member of the student family. Both are radial: the inner product is
/// g(|x - x'|) with g strictly decreasing and g(0) = C > 0.
class RadialKernel {
 public:
  RadialKernel(KernelSpec spec, std::size_t dim);

  const KernelSpec& spec() const noexcept { return spec_; }
  std::size_t dim() const noexcept { return dim_; }
  double normalization_constant() const noexcept { return c_; }
  /// Student exponent in effect; (1+d)/2 for the cauchy member.
  double student_alpha() const noexcept { return alpha_; }

  double eval(std::span<const double> x, std::span<const double> y) const;
  double inner(std::span<const double> x, std::span<const double> y) const;

  /// phi as a function of the squared distance.
  double eval_sq(double r2) const noexcept;
  /// g as a function of the squared distance.
  double inner_sq(double r2) const noexcept;
  /// g(r) for a distance r >= 0.
  double inner_at(double r) const noexcept { return inner_sq(r * r); }

  /// C = g(0).
  double g_zero() const noexcept { return inner_sq(0.0); }

  friend bool operator==(const RadialKernel& a, const RadialKernel& b) {
    return a.spec_ == b.spec_ && a.dim_ == b.dim_;
  }

 private:
  void check_dims(std::span<const double> x, std::span<const double> y) const;

  KernelSpec spec_;
  std::size_t dim_;
  double alpha_;    // student exponent in effect (tied to d for cauchy)
  double c_;        // normalization of phi
  double inner_c_;  // leading constant of g
  double inner_s_;  // scale of g: sigma^2 (gaussian) or beta (cauchy) in l2 mode
};

/// Closed-form constant making phi(., x') integrate to one over R^d.
double density_constant(const KernelSpec& spec, std::size_t dim);

/// Mean over dimensions of the type-7 interquartile range, divided by 1.35.
double bandwidth_iqr(const DataSet& data);

/// Median pairwise Euclidean distance over a seeded subsample of at most
/// `subsample_cap` points.
double bandwidth_jaakkola(const DataSet& data, std::size_t subsample_cap = 2000,
                          std::uint64_t seed = 0);

/// Type-7 (linear interpolation) sample quantile of `values`, p in [0, 1].
double quantile_type7(std::span<const double> values, double p);

}  // namespace skm
