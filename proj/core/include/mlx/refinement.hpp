#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "mlx/extraction.hpp"

namespace mlx {

/// Generalized Jaccard overlap of two communities: the mean of the vertex-set
/// and layer-set Jaccard indices.
double jaccard_match(const Community& a, const Community& b);

/// Greedy overlap-controlled selection. Candidates are ranked by
/// community_order; the best is kept, then every later candidate whose
/// overlap with all kept communities is at most `beta`. Identical (B, L) pairs
/// count once.
std::vector<Community> refine(std::span<const Community> candidates, double beta);

struct BetaPoint {
  double beta = 0.0;
  std::size_t count = 0;
};

struct RefinementResult {
  std::vector<Community> kept;
  double beta_used = 0.0;
  std::vector<BetaPoint> beta_profile;
};

/// Number of grid points in the beta sweep (0.00, 0.01, ..., 1.00).
inline constexpr std::size_t kBetaGridSize = 101;
inline double beta_grid_value(std::size_t i) { return static_cast<double>(i) / 100.0; }

/// Index into `counts` of the default beta: the first grid point whose count
/// equals the most frequent count. When several counts are equally frequent
/// the one with the longest consecutive run wins, then the smaller count.
std::size_t stable_window_index(std::span<const std::size_t> counts);

/// Sweeps the beta grid and refines at the automatically chosen value.
/// Throws ParameterError on empty input.
RefinementResult default_beta(std::span<const Community> candidates, std::size_t workers = 1);

/// Refines at a fixed beta; beta_profile stays empty.
RefinementResult refine_at(std::span<const Community> candidates, double beta);

/// `beta\tk` rows with a header line.
void write_beta_profile(std::ostream& out, std::span<const BetaPoint> profile);

}  // namespace mlx
