#include "skm/kernels.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "skm/dataio.hpp"

namespace skm {
namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_positive(std::string_view key, std::string_view value) {
  double v = 0.0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
    throw std::invalid_argument("kernel parameter " + std::string(key) + ": '" +
                                std::string(value) + "' is not a number");
  }
  if (v <= 0.0) {
    throw std::invalid_argument("kernel parameter " + std::string(key) + " must be positive");
  }
  return v;
}

bool is_cauchy_exponent(double alpha, std::size_t dim) {
  const double target = 0.5 * (1.0 + static_cast<double>(dim));
  return std::abs(alpha - target) <= 1e-12 * target;
}

// Student density constant Gamma(a) / ((pi b)^{d/2} Gamma(a - d/2)).
double student_density_constant(double alpha, double beta, double d) {
  if (alpha <= 0.5 * d) {
    throw std::invalid_argument(
        "student kernel: density normalization needs alpha > d/2 to be integrable");
  }
  return std::exp(std::lgamma(alpha) - std::lgamma(alpha - 0.5 * d) -
                  0.5 * d * std::log(std::numbers::pi * beta));
}

}  // namespace

KernelSpec KernelSpec::parse(std::string_view text) {
  const auto tokens = split(text, ':');
  KernelSpec spec;
  const auto family = tokens.front();
  if (family == "gaussian") {
    spec.family = KernelFamily::gaussian;
  } else if (family == "laplacian") {
    spec.family = KernelFamily::laplacian;
  } else if (family == "student") {
    spec.family = KernelFamily::student;
  } else if (family == "cauchy") {
    spec.family = KernelFamily::student;
    spec.cauchy = true;
  } else {
    throw std::invalid_argument("unknown kernel family '" + std::string(family) + "'");
  }

  bool saw_norm = false, saw_space = false;
  for (std::size_t t = 1; t < tokens.size(); ++t) {
    const auto tok = tokens[t];
    if (tok.find('=') != std::string_view::npos) {
      for (const auto kv : split(tok, ',')) {
        const auto eq = kv.find('=');
        if (eq == std::string_view::npos) {
          throw std::invalid_argument("kernel parameter '" + std::string(kv) + "' lacks '='");
        }
        const auto key = kv.substr(0, eq);
        const auto value = kv.substr(eq + 1);
        const bool gauss = spec.family == KernelFamily::gaussian;
        const bool lap = spec.family == KernelFamily::laplacian;
        const bool stud = spec.family == KernelFamily::student;
        if (gauss && key == "sigma") {
          spec.sigma = parse_positive(key, value);
        } else if (lap && key == "gamma") {
          spec.gamma = parse_positive(key, value);
        } else if (stud && !spec.cauchy && key == "alpha") {
          spec.alpha = parse_positive(key, value);
        } else if (stud && key == "beta") {
          spec.beta = parse_positive(key, value);
        } else {
          throw std::invalid_argument("kernel parameter '" + std::string(key) +
                                      "' does not apply to " + std::string(family));
        }
      }
    } else if (tok == "unit" || tok == "density") {
      if (saw_norm) throw std::invalid_argument("kernel spec names the normalization twice");
      saw_norm = true;
      spec.normalization = tok == "unit" ? Normalization::unit : Normalization::density;
    } else if (tok == "rkhs" || tok == "l2") {
      if (saw_space) throw std::invalid_argument("kernel spec names the space twice");
      saw_space = true;
      spec.space = tok == "rkhs" ? InnerSpace::rkhs : InnerSpace::l2;
    } else {
      throw std::invalid_argument("unrecognized kernel spec token '" + std::string(tok) + "'");
    }
  }
  return spec;
}

std::string KernelSpec::to_string() const {
  std::string out;
  switch (family) {
    case KernelFamily::gaussian:
      out = "gaussian:sigma=" + format_double(sigma);
      break;
    case KernelFamily::laplacian:
      out = "laplacian:gamma=" + format_double(gamma);
      break;
    case KernelFamily::student:
      out = cauchy ? "cauchy:beta=" + format_double(beta)
                   : "student:alpha=" + format_double(alpha) + ",beta=" + format_double(beta);
      break;
  }
  out += normalization == Normalization::unit ? ":unit" : ":density";
  out += space == InnerSpace::rkhs ? ":rkhs" : ":l2";
  return out;
}

KernelSpec KernelSpec::with_bandwidth(double bandwidth) const {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw std::invalid_argument("bandwidth must be positive and finite");
  }
  KernelSpec out = *this;
  switch (family) {
    case KernelFamily::gaussian: out.sigma = bandwidth; break;
    case KernelFamily::laplacian: out.gamma = bandwidth; break;
    case KernelFamily::student: out.beta = bandwidth; break;
  }
  return out;
}

double KernelSpec::bandwidth() const noexcept {
  switch (family) {
    case KernelFamily::gaussian: return sigma;
    case KernelFamily::laplacian: return gamma;
    case KernelFamily::student: return beta;
  }
  return sigma;
}

double density_constant(const KernelSpec& spec, std::size_t dim) {
  const double d = static_cast<double>(dim);
  switch (spec.family) {
    case KernelFamily::gaussian:
      return std::pow(2.0 * std::numbers::pi * spec.sigma * spec.sigma, -0.5 * d);
    case KernelFamily::laplacian:
      // 1 / (surface(S^{d-1}) * gamma^d * Gamma(d))
      return std::exp(std::lgamma(0.5 * d) - std::log(2.0) - 0.5 * d * std::log(std::numbers::pi) -
                      d * std::log(spec.gamma) - std::lgamma(d));
    case KernelFamily::student: {
      const double alpha = spec.cauchy ? 0.5 * (1.0 + d) : spec.alpha;
      return student_density_constant(alpha, spec.beta, d);
    }
  }
  return 1.0;
}

RadialKernel::RadialKernel(KernelSpec spec, std::size_t dim)
    : spec_(spec), dim_(dim), alpha_(spec.alpha), c_(1.0), inner_c_(1.0), inner_s_(1.0) {
  if (dim_ < 1) throw std::invalid_argument("kernel dimension must be at least 1");
  const bool positive = spec_.sigma > 0 && spec_.gamma > 0 && spec_.alpha > 0 && spec_.beta > 0;
  const bool finite = std::isfinite(spec_.sigma) && std::isfinite(spec_.gamma) &&
                      std::isfinite(spec_.alpha) && std::isfinite(spec_.beta);
  if (!positive || !finite) throw std::invalid_argument("kernel parameters must be positive");
  if (spec_.cauchy) alpha_ = 0.5 * (1.0 + static_cast<double>(dim_));

  if (spec_.normalization == Normalization::density) c_ = density_constant(spec_, dim_);

  if (spec_.space == InnerSpace::l2) {
    const double d = static_cast<double>(dim_);
    switch (spec_.family) {
      case KernelFamily::gaussian: {
        // int exp(-|t-x|^2/2s^2) exp(-|t-y|^2/2s^2) dt = (pi s^2)^{d/2} exp(-|x-y|^2/4s^2)
        const double s2 = spec_.sigma * spec_.sigma;
        inner_c_ = c_ * c_ * std::pow(std::numbers::pi * s2, 0.5 * d);
        inner_s_ = 4.0 * s2;
        break;
      }
      case KernelFamily::student: {
        if (!is_cauchy_exponent(alpha_, dim_)) {
          throw std::invalid_argument(
              "l2 space is only available for the student kernel with alpha = (1+d)/2");
        }
        // Cauchy densities convolve to a Cauchy density of twice the scale,
        // i.e. four times beta.
        const double base = student_density_constant(alpha_, spec_.beta, d);
        const double wide = student_density_constant(alpha_, 4.0 * spec_.beta, d);
        inner_c_ = c_ * c_ * wide / (base * base);
        inner_s_ = 4.0 * spec_.beta;
        break;
      }
      case KernelFamily::laplacian:
        throw std::invalid_argument("l2 space is unsupported for the laplacian kernel");
    }
  }
}

void RadialKernel::check_dims(std::span<const double> x, std::span<const double> y) const {
  if (x.size() != dim_ || y.size() != dim_) {
    throw std::invalid_argument("kernel evaluation: point dimension " +
                                std::to_string(x.size() != dim_ ? x.size() : y.size()) +
                                " does not match kernel dimension " + std::to_string(dim_));
  }
}

double RadialKernel::eval(std::span<const double> x, std::span<const double> y) const {
  check_dims(x, y);
  return eval_sq(squared_distance(x, y));
}

double RadialKernel::inner(std::span<const double> x, std::span<const double> y) const {
  check_dims(x, y);
  return inner_sq(squared_distance(x, y));
}

double RadialKernel::eval_sq(double r2) const noexcept {
  switch (spec_.family) {
    case KernelFamily::gaussian:
      return c_ * std::exp(-r2 / (2.0 * spec_.sigma * spec_.sigma));
    case KernelFamily::laplacian:
      return c_ * std::exp(-std::sqrt(r2) / spec_.gamma);
    case KernelFamily::student:
      return c_ * std::pow(1.0 + r2 / spec_.beta, -alpha_);
  }
  return 0.0;
}

double RadialKernel::inner_sq(double r2) const noexcept {
  if (spec_.space == InnerSpace::rkhs) return eval_sq(r2);
  if (spec_.family == KernelFamily::gaussian) return inner_c_ * std::exp(-r2 / inner_s_);
  return inner_c_ * std::pow(1.0 + r2 / inner_s_, -alpha_);
}

}  // namespace skm
