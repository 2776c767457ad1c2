#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "skm/errors.hpp"
#include "skm/kernels.hpp"

namespace skm {

double quantile_type7(std::span<const double> values, double p) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile level outside [0, 1]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

double bandwidth_iqr(const DataSet& data) {
  if (data.n() < 2) throw DataError("bandwidth_iqr: need at least two points");
  double total = 0.0;
  std::vector<double> column(data.n());
  for (std::size_t j = 0; j < data.d(); ++j) {
    for (std::size_t i = 0; i < data.n(); ++i) column[i] = data.row(i)[j];
    total += quantile_type7(column, 0.75) - quantile_type7(column, 0.25);
  }
  const double h = total / static_cast<double>(data.d()) / 1.35;
  if (!(h > 0.0)) throw NumericError("bandwidth_iqr: zero interquartile range (degenerate data)");
  return h;
}

double bandwidth_jaakkola(const DataSet& data, std::size_t subsample_cap, std::uint64_t seed) {
  if (data.n() < 2) throw DataError("bandwidth_jaakkola: need at least two points");
  if (subsample_cap < 2) throw std::invalid_argument("bandwidth_jaakkola: cap must be >= 2");

  std::vector<Index> rows(data.n());
  std::iota(rows.begin(), rows.end(), Index{0});
  if (rows.size() > subsample_cap) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < subsample_cap; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, rows.size() - 1);
      std::swap(rows[i], rows[pick(rng)]);
    }
    rows.resize(subsample_cap);
  }

  std::vector<double> dist;
  dist.reserve(rows.size() * (rows.size() - 1) / 2);
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = a + 1; b < rows.size(); ++b) {
      dist.push_back(std::sqrt(squared_distance(data.row(rows[a]), data.row(rows[b]))));
    }
  }
  const std::size_t mid = dist.size() / 2;
  std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(mid), dist.end());
  double median = dist[mid];
  if (dist.size() % 2 == 0) {
    const double lower = *std::max_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(mid));
    median = 0.5 * (median + lower);
  }
  if (!(median > 0.0)) throw NumericError("bandwidth_jaakkola: zero median distance (degenerate data)");
  return median;
}

}  // namespace skm
