#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlx/error.hpp"
#include "mlx/network.hpp"
#include "mlx/scoring.hpp"
#include "mlx/types.hpp"

namespace mlx {

/// A vertex-layer community (B, L) and its score H(B, L).
struct Community {
  VertexSet vertices;
  LayerSet layers;
  double score = 0.0;

  friend bool operator==(const Community&, const Community&) = default;
};

/// Output order: score descending, then |B| ascending, then B and L lexicographically.
bool community_order(const Community& a, const Community& b);

enum class SeedPolicy {
  all_neighborhoods,
  /// A reproducible random subset of the neighborhood seeds.
  sampled,
};

struct ExtractionConfig {
  ScalingPolicy scaling = ScalingPolicy::linear;
  SeedPolicy seed_policy = SeedPolicy::all_neighborhoods;
  std::size_t sample_count = 0;
  std::uint64_t rng_seed = 0;
  /// Toggle limit per vertex search; 0 means 10 * n.
  std::size_t max_iterations = 0;
  std::size_t worker_count = 1;
  /// Only score toggles of B and its neighbors within L. Produces the same
  /// result as the full scan.
  bool frontier_only = false;
};

/// Raised when a vertex search exceeds its toggle budget. Carries the state
/// reached so far.
class IterationLimitError : public Error {
public:
  IterationLimitError(VertexSet vertices, LayerSet layers)
      : Error("vertex search exceeded its iteration limit"),
        vertices_(std::move(vertices)),
        layers_(std::move(layers)) {}

  const VertexSet& vertices() const noexcept { return vertices_; }
  const LayerSet& layers() const noexcept { return layers_; }

private:
  VertexSet vertices_;
  LayerSet layers_;
};

/// Closed neighborhoods N(u, l) + {u} for every (l, u), in (l, u) order of first
/// occurrence, without duplicates or sets smaller than two.
std::vector<VertexSet> seed_sets(const MultilayerNetwork& net, const ExtractionConfig& config = {});

/// The proposal step of the layer search: layers ranked by modularity
/// (ties by id), cut at the shortest prefix whose score the next layer does
/// not improve. Result is sorted by id.
LayerSet propose_layers(std::span<const double> modularities, ScalingPolicy scaling = ScalingPolicy::linear);

/// Greedy layer-set update for a fixed vertex set: propose_layers() on the
/// current modularities, kept only if it beats `previous` (always when
/// `previous` is empty).
LayerSet layer_set_search(const MultilayerNetwork& net, std::span<const VertexId> vertices,
                          std::span<const LayerId> previous,
                          ScalingPolicy scaling = ScalingPolicy::linear);
LayerSet layer_set_search(const ScoreState& state, std::span<const LayerId> previous,
                          ScalingPolicy scaling = ScalingPolicy::linear);

/// Scores after each accepted toggle, starting with the initial score.
struct SearchTrace {
  std::vector<double> scores;
  std::vector<VertexId> toggled;
};

/// Best-improvement single-vertex toggling until no toggle raises H(B, L).
/// Never shrinks B below two vertices.
VertexSet vertex_set_search(const MultilayerNetwork& net, std::span<const VertexId> vertices,
                            std::span<const LayerId> layers, const ExtractionConfig& config = {},
                            SearchTrace* trace = nullptr);
/// In-place variant; returns the number of accepted toggles.
std::size_t vertex_set_search(ScoreState& state, std::span<const LayerId> layers,
                              const ExtractionConfig& config, SearchTrace* trace = nullptr);

/// Alternates layer and vertex searches from `seed` until (B, L) is stable.
/// Returns nothing when the local maximum has zero score.
std::optional<Community> extract(const MultilayerNetwork& net, std::span<const VertexId> seed,
                                 const ExtractionConfig& config = {});

struct ExtractionReport {
  std::size_t seeds = 0;
  std::size_t extracted = 0;
  std::size_t degenerate = 0;
  std::size_t failed = 0;
  std::size_t unique = 0;
  std::vector<std::string> warnings;
};

/// Runs extract() from every seed and returns the distinct communities in
/// community_order. Output does not depend on worker_count.
std::vector<Community> extract_all(const MultilayerNetwork& net, const ExtractionConfig& config = {},
                                   ExtractionReport* report = nullptr);

}  // namespace mlx
