#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>

// Shared arithmetic for every path that evaluates set modularity, so that
// incremental and direct evaluations of the same tallies agree bit for bit.

namespace mlx::detail {

/// 1 / sum of degrees, or 0 for an edgeless layer.
inline double inverse_total(std::int64_t degree_total) {
  return degree_total > 0 ? 1.0 / static_cast<double>(degree_total) : 0.0;
}

/// Sum over unordered pairs in B of d(u) d(v).
inline std::int64_t degree_pair_sum(std::int64_t deg_sum, std::int64_t deg_sq_sum) {
  return (deg_sum * deg_sum - deg_sq_sum) / 2;
}

/// Observed minus expected intra-set edges.
inline double excess(double intra, double pair_sum, double inv_total) {
  return intra - pair_sum * inv_total;
}

/// 1 / (n sqrt(C(size, 2))), or 0 when size < 2.
inline double modularity_norm(std::size_t n, std::size_t size) {
  if (size < 2) return 0.0;
  const double pairs = static_cast<double>(size) * static_cast<double>(size - 1) / 2.0;
  return 1.0 / (static_cast<double>(n) * std::sqrt(pairs));
}

inline double positive_part(double x) { return x > 0.0 ? x : 0.0; }

}  // namespace mlx::detail
