#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <span>
#include <utility>
#include <vector>

#include "skm/dataset.hpp"

namespace skm {

/// How the first center is picked: a fixed row index, or uniformly from a seed.
class FirstCenter {
 public:
  static FirstCenter index(Index i) { return FirstCenter(i, 0, false); }
  static FirstCenter seeded(std::uint64_t seed) { return FirstCenter(0, seed, true); }

  /// Parses "<idx>" or "seed:<s>".
  static FirstCenter parse(std::string_view text);

  Index resolve(std::size_t n) const;

 private:
  FirstCenter(Index i, std::uint64_t seed, bool seeded)
      : index_(i), seed_(seed), seeded_(seeded) {}
  Index index_;
  std::uint64_t seed_;
  bool seeded_;
};

/// Farthest-first traversal state.
///
/// Invariants: `order` holds distinct row indices; dist_to_set[i] is the
/// Euclidean distance from row i to the nearest chosen row and is exactly 0 for
/// chosen rows; radius_trace[m-1] is the coverage radius W after m centers and
/// is nonincreasing.
struct Selection {
  std::vector<Index> order;
  std::vector<double> dist_to_set;
  std::vector<double> radius_trace;
  std::vector<bool> chosen;
  /// Unchosen row at distance radius() with the lowest index; meaningless
  /// once complete().
  Index farthest = 0;
  /// Set once a center had to be added at zero distance (k exceeded the
  /// number of distinct points).
  bool zero_radius_additions = false;

  std::size_t size() const noexcept { return order.size(); }
  double radius() const noexcept { return radius_trace.empty() ? 0.0 : radius_trace.back(); }
  bool complete() const noexcept { return order.size() == dist_to_set.size(); }
};

/// One-center selection seeded at `first`.
Selection start_selection(const DataSet& data, Index first);

/// Appends the point farthest from the current centers (lowest index on ties)
/// and refreshes dist_to_set with one O(nd) pass.
Selection extend_selection(Selection sel, const DataSet& data);
void extend_selection_in_place(Selection& sel, const DataSet& data);

/// Greedy 2-approximation to k-center.
Selection kcenter_greedy(const DataSet& data, std::size_t k, FirstCenter first);

/// Row that extend_selection would add next, or nullopt when every row is chosen.
std::optional<Index> next_center(const Selection& sel);

/// Distance from every row to the nearest row of `centers`, O(n |centers| d).
std::vector<double> distances_to_set(const DataSet& data, std::span<const Index> centers);

/// Coverage radius max_j d(x_j, X_I) of an arbitrary index set.
double coverage_radius(const DataSet& data, std::span<const Index> centers);

struct KCenterOptimum {
  std::vector<Index> centers;
  double radius = 0.0;
};

/// Exact k-center by enumeration of all C(n, k) subsets. Guarded at 10^6
/// subsets; meant as a reference for small instances.
KCenterOptimum kcenter_brute(const DataSet& data, std::size_t k);

}  // namespace skm
