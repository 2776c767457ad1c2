#include "skm/kcenter.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "skm/parallel.hpp"

namespace skm {
namespace {

struct BlockMax {
  double value = -1.0;
  Index index = 0;
};

// Lowers dist_to_set against `center` and finds the farthest unchosen row.
// Blocks are reduced in order with a strict comparison, so the lowest index
// wins ties whatever the thread count.
void refresh(Selection& sel, const DataSet& data, Index center) {
  const std::size_t n = data.n();
  const auto c = data.row(center);
  std::vector<BlockMax> partial(block_count(n));
  for_each_block(n, [&](std::size_t b, std::size_t begin, std::size_t end) {
    BlockMax best;
    for (std::size_t i = begin; i < end; ++i) {
      if (sel.chosen[i]) continue;
      const double dn = std::sqrt(squared_distance(data.row(i), c));
      double& di = sel.dist_to_set[i];
      di = std::min(di, dn);
      if (di > best.value) best = {di, i};
    }
    partial[b] = best;
  });
  BlockMax best;
  for (const auto& p : partial) {
    if (p.value > best.value) best = p;
  }
  sel.farthest = best.index;
  sel.radius_trace.push_back(best.value < 0.0 ? 0.0 : best.value);
}

void add_center(Selection& sel, const DataSet& data, Index center) {
  sel.order.push_back(center);
  sel.chosen[center] = true;
  sel.dist_to_set[center] = 0.0;
  refresh(sel, data, center);
}

}  // namespace

FirstCenter FirstCenter::parse(std::string_view text) {
  auto parse_u64 = [](std::string_view s) {
    std::uint64_t v = 0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end || s.empty()) {
      throw std::invalid_argument("first center: '" + std::string(s) + "' is not a nonnegative integer");
    }
    return v;
  };
  constexpr std::string_view prefix = "seed:";
  if (text.starts_with(prefix)) return seeded(parse_u64(text.substr(prefix.size())));
  return index(static_cast<Index>(parse_u64(text)));
}

Index FirstCenter::resolve(std::size_t n) const {
  if (n == 0) throw std::invalid_argument("first center: empty data");
  if (seeded_) {
    std::mt19937_64 rng(seed_);
    return static_cast<Index>(rng() % n);
  }
  if (index_ >= n) {
    throw std::invalid_argument("first center index " + std::to_string(index_) +
                                " out of range for n = " + std::to_string(n));
  }
  return index_;
}

Selection start_selection(const DataSet& data, Index first) {
  if (first >= data.n()) throw std::invalid_argument("start_selection: first index out of range");
  Selection sel;
  sel.dist_to_set.assign(data.n(), std::numeric_limits<double>::infinity());
  sel.chosen.assign(data.n(), false);
  add_center(sel, data, first);
  return sel;
}

std::optional<Index> next_center(const Selection& sel) {
  if (sel.complete()) return std::nullopt;
  return sel.farthest;
}

void extend_selection_in_place(Selection& sel, const DataSet& data) {
  if (sel.dist_to_set.size() != data.n()) {
    throw std::invalid_argument("extend_selection: selection was built on different data");
  }
  const auto next = next_center(sel);
  if (!next) throw std::invalid_argument("extend_selection: every point is already a center");
  if (sel.radius() == 0.0) sel.zero_radius_additions = true;
  add_center(sel, data, *next);
}

Selection extend_selection(Selection sel, const DataSet& data) {
  extend_selection_in_place(sel, data);
  return sel;
}

Selection kcenter_greedy(const DataSet& data, std::size_t k, FirstCenter first) {
  if (k < 1) throw std::invalid_argument("kcenter_greedy: k must be at least 1");
  if (k > data.n()) {
    throw std::invalid_argument("kcenter_greedy: k = " + std::to_string(k) + " exceeds n = " +
                                std::to_string(data.n()));
  }
  Selection sel = start_selection(data, first.resolve(data.n()));
  while (sel.size() < k) extend_selection_in_place(sel, data);
  return sel;
}

std::vector<double> distances_to_set(const DataSet& data, std::span<const Index> centers) {
  if (centers.empty()) throw std::invalid_argument("distances_to_set: empty center set");
  std::vector<double> out(data.n(), std::numeric_limits<double>::infinity());
  parallel_for(data.n(), [&](std::size_t j) {
    double best = std::numeric_limits<double>::infinity();
    for (const Index c : centers) best = std::min(best, squared_distance(data.row(j), data.row(c)));
    out[j] = std::sqrt(best);
  });
  return out;
}

double coverage_radius(const DataSet& data, std::span<const Index> centers) {
  const auto d = distances_to_set(data, centers);
  return *std::max_element(d.begin(), d.end());
}

KCenterOptimum kcenter_brute(const DataSet& data, std::size_t k) {
  const std::size_t n = data.n();
  if (k < 1 || k > n) throw std::invalid_argument("kcenter_brute: need 1 <= k <= n");
  double subsets = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    subsets = subsets * static_cast<double>(n - i) / static_cast<double>(i + 1);
  }
  if (subsets > 1e6) {
    throw std::invalid_argument("kcenter_brute: C(n, k) exceeds 10^6 subsets");
  }

  std::vector<double> dist(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = std::sqrt(squared_distance(data.row(i), data.row(j)));
  }

  KCenterOptimum best;
  best.radius = std::numeric_limits<double>::infinity();
  std::vector<Index> combo(k);
  for (std::size_t i = 0; i < k; ++i) combo[i] = i;
  while (true) {
    double w = 0.0;
    for (std::size_t j = 0; j < n && w < best.radius; ++j) {
      double dj = std::numeric_limits<double>::infinity();
      for (const Index c : combo) dj = std::min(dj, dist[c * n + j]);
      w = std::max(w, dj);
    }
    if (w < best.radius) best = {combo, w};

    // Next k-combination in lexicographic order.
    std::size_t pos = k;
    while (pos > 0 && combo[pos - 1] == n - k + pos - 1) --pos;
    if (pos == 0) break;
    ++combo[pos - 1];
    for (std::size_t i = pos; i < k; ++i) combo[i] = combo[i - 1] + 1;
  }
  return best;
}

}  // namespace skm
