#include "skm/meanshift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "skm/parallel.hpp"

namespace skm {
namespace {

void check_backend(const SparseKernelMean& backend) {
  if (backend.kernel.spec().family != KernelFamily::gaussian) {
    throw std::invalid_argument("mean-shift needs a gaussian kernel");
  }
  if (backend.size() == 0) throw std::invalid_argument("mean-shift: empty backend");
  if ((backend.alpha.array() < 0.0).any()) {
    throw std::invalid_argument("mean-shift needs nonnegative weights (fit in density mode)");
  }
}

double resolve_gamma(const SparseKernelMean& backend, const ShiftOptions& options) {
  if (options.gamma < 0.0 || !std::isfinite(options.gamma)) {
    throw std::invalid_argument("mean-shift: gamma must be positive");
  }
  return options.gamma == 0.0 ? 1e-3 * backend.kernel.spec().sigma : options.gamma;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

PointShift shift_point(std::span<const double> x0, const SparseKernelMean& backend,
                       const ShiftOptions& options, EvalCounter* counter) {
  check_backend(backend);
  const double gamma = resolve_gamma(backend, options);
  const std::size_t d = backend.dim();
  if (x0.size() != d) throw std::invalid_argument("shift_point: dimension mismatch");
  const double sigma = backend.kernel.spec().sigma;
  const double inv_two_s2 = 1.0 / (2.0 * sigma * sigma);

  PointShift out;
  out.point = Eigen::Map<const Eigen::VectorXd>(x0.data(), static_cast<Eigen::Index>(d));
  Eigen::VectorXd next(static_cast<Eigen::Index>(d));
  while (out.iterations < options.max_iter) {
    next.setZero();
    double wsum = 0.0;
    const std::span<const double> x{out.point.data(), d};
    for (std::size_t i = 0; i < backend.size(); ++i) {
      const auto xi = backend.point(i);
      const double w = backend.alpha(static_cast<Eigen::Index>(i)) *
                       std::exp(-squared_distance(x, xi) * inv_two_s2);
      if (w == 0.0) continue;
      wsum += w;
      for (std::size_t c = 0; c < d; ++c) next(static_cast<Eigen::Index>(c)) += w * xi[c];
    }
    if (counter) counter->add(backend.size());
    ++out.iterations;
    if (!(wsum > 0.0)) {
      out.underflow = true;
      return out;
    }
    next /= wsum;
    const double step = (next - out.point).norm();
    out.point = next;
    if (step < gamma) {
      out.converged = true;
      break;
    }
  }
  return out;
}

ShiftResult mean_shift_all(const DataSet& data, const SparseKernelMean& backend, ShiftBackend kind,
                           const ShiftOptions& options, EvalCounter* counter) {
  check_backend(backend);
  if (data.d() != backend.dim()) throw std::invalid_argument("mean_shift_all: dimension mismatch");
  resolve_gamma(backend, options);
  const std::size_t n = data.n();
  ShiftResult out;
  out.backend = kind;
  out.shifted.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(data.d()));
  out.iterations.assign(n, 0);
  std::vector<char> converged(n, 0), underflow(n, 0);
  parallel_for(n, [&](std::size_t i) {
    const PointShift s = shift_point(data.row(i), backend, options, counter);
    out.shifted.row(static_cast<Eigen::Index>(i)) = s.point.transpose();
    out.iterations[i] = s.iterations;
    converged[i] = s.converged;
    underflow[i] = s.underflow;
  });
  for (std::size_t i = 0; i < n; ++i) {
    if (underflow[i]) {
      ++out.underflows;
    } else if (!converged[i]) {
      ++out.unconverged;
    }
  }
  return out;
}

Clustering cluster_modes(const PointMatrix& shifted, double merge_dist) {
  if (!(merge_dist > 0.0) || !std::isfinite(merge_dist)) {
    throw std::invalid_argument("cluster_modes: merge distance must be positive");
  }
  const auto n = static_cast<std::size_t>(shifted.rows());
  const auto d = static_cast<std::size_t>(shifted.cols());
  const double limit = merge_dist * merge_dist;
  auto row = [&](std::size_t i) { return std::span<const double>(shifted.data() + i * d, d); };
  UnionFind uf(n);

  const double neighbours = std::pow(3.0, static_cast<double>(d));
  if (neighbours >= static_cast<double>(n)) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (squared_distance(row(i), row(j)) < limit) uf.unite(i, j);
      }
    }
  } else {
    // Cells of side merge_dist; any pair closer than that sits in adjacent cells.
    std::map<std::vector<long long>, std::vector<std::size_t>> grid;
    std::vector<std::vector<long long>> cell_of(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<long long> cell(d);
      for (std::size_t c = 0; c < d; ++c) {
        cell[c] = static_cast<long long>(std::floor(row(i)[c] / merge_dist));
      }
      grid[cell].push_back(i);
      cell_of[i] = std::move(cell);
    }
    const auto offsets = static_cast<std::size_t>(neighbours);
    std::vector<long long> probe(d);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t o = 0; o < offsets; ++o) {
        std::size_t code = o;
        for (std::size_t c = 0; c < d; ++c) {
          probe[c] = cell_of[i][c] + static_cast<long long>(code % 3) - 1;
          code /= 3;
        }
        const auto it = grid.find(probe);
        if (it == grid.end()) continue;
        for (const std::size_t j : it->second) {
          if (j < i && squared_distance(row(i), row(j)) < limit) uf.unite(i, j);
        }
      }
    }
  }

  Clustering out;
  out.labels.resize(n);
  std::unordered_map<std::size_t, std::size_t> id_of_root;
  std::vector<std::size_t> counts;
  for (std::size_t i = 0; i < n; ++i) {
    const auto [it, fresh] = id_of_root.try_emplace(uf.find(i), id_of_root.size());
    if (fresh) counts.push_back(0);
    out.labels[i] = it->second;
    ++counts[it->second];
  }
  out.modes = PointMatrix::Zero(static_cast<Eigen::Index>(counts.size()), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i) {
    out.modes.row(static_cast<Eigen::Index>(out.labels[i])) += shifted.row(static_cast<Eigen::Index>(i));
  }
  for (std::size_t c = 0; c < counts.size(); ++c) {
    out.modes.row(static_cast<Eigen::Index>(c)) /= static_cast<double>(counts[c]);
  }
  return out;
}

double discrepancy_index(const PointMatrix& a, const PointMatrix& b, double delta) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("discrepancy_index: shifted sets differ in shape");
  }
  if (a.rows() == 0) throw std::invalid_argument("discrepancy_index: no points");
  if (!(delta >= 0.0)) throw std::invalid_argument("discrepancy_index: delta must be nonnegative");
  std::size_t far = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    if ((a.row(i) - b.row(i)).norm() > delta) ++far;
  }
  return static_cast<double>(far) / static_cast<double>(a.rows());
}

namespace {

// max over clusters a of min over clusters b of |a sym-diff b|, in points.
std::size_t directed_hausdorff(const std::vector<std::size_t>& size_a,
                               const std::vector<std::size_t>& size_b,
                               const std::vector<std::map<std::size_t, std::size_t>>& overlap) {
  std::vector<std::size_t> by_size;
  for (std::size_t b = 0; b < size_b.size(); ++b) {
    if (size_b[b] > 0) by_size.push_back(b);
  }
  std::stable_sort(by_size.begin(), by_size.end(),
                   [&](std::size_t x, std::size_t y) { return size_b[x] < size_b[y]; });
  std::size_t worst = 0;
  for (std::size_t a = 0; a < size_a.size(); ++a) {
    if (size_a[a] == 0) continue;
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (const auto& [b, shared] : overlap[a]) {
      best = std::min(best, size_a[a] + size_b[b] - 2 * shared);
    }
    // Smallest cluster of B disjoint from a.
    for (const std::size_t b : by_size) {
      if (!overlap[a].contains(b)) {
        best = std::min(best, size_a[a] + size_b[b]);
        break;
      }
    }
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

double hausdorff_clustering_distance(std::span<const std::size_t> labels_a,
                                     std::span<const std::size_t> labels_b) {
  if (labels_a.size() != labels_b.size()) {
    throw std::invalid_argument("hausdorff_clustering_distance: clusterings cover different point counts");
  }
  const std::size_t n = labels_a.size();
  if (n == 0) throw std::invalid_argument("hausdorff_clustering_distance: no points");
  const std::size_t ka = *std::max_element(labels_a.begin(), labels_a.end()) + 1;
  const std::size_t kb = *std::max_element(labels_b.begin(), labels_b.end()) + 1;
  std::vector<std::size_t> size_a(ka, 0), size_b(kb, 0);
  std::vector<std::map<std::size_t, std::size_t>> ab(ka), ba(kb);
  for (std::size_t i = 0; i < n; ++i) {
    ++size_a[labels_a[i]];
    ++size_b[labels_b[i]];
    ++ab[labels_a[i]][labels_b[i]];
    ++ba[labels_b[i]][labels_a[i]];
  }
  const std::size_t h = std::max(directed_hausdorff(size_a, size_b, ab),
                                 directed_hausdorff(size_b, size_a, ba));
  return static_cast<double>(h) / static_cast<double>(n);
}

double hausdorff_clustering_distance(const Clustering& a, const Clustering& b) {
  return hausdorff_clustering_distance(a.labels, b.labels);
}

}  // namespace skm
