#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "mlx/network.hpp"
#include "mlx/types.hpp"

namespace mlx {

/// Layer-count penalty gamma(|L|) dividing the squared modularity sum.
enum class ScalingPolicy {
  constant,   // gamma = 1
  linear,     // gamma = |L|   (default)
  quadratic,  // gamma = |L|^2
};

double scaling_factor(ScalingPolicy policy, std::size_t layer_count);
std::string_view to_string(ScalingPolicy policy);
/// Parses "constant", "linear" or "quadratic"; throws ParameterError otherwise.
ScalingPolicy parse_scaling(std::string_view name);

/// Normalized set modularity Q_l(B) of `vertices` in `layer`.
///
/// Observed minus configuration-model expected intra-set edges, divided by
/// n * sqrt(C(|B|, 2)). Sets with fewer than two vertices score 0, and a layer
/// with no edges contributes no expected term. `vertices` need not be sorted
/// but must be duplicate-free.
double set_modularity(const MultilayerNetwork& net, std::span<const VertexId> vertices, LayerId layer);

/// H(B, L) = (sum over L of max(Q_l, 0))^2 / gamma(|L|).
double multilayer_score(const MultilayerNetwork& net, std::span<const VertexId> vertices,
                        std::span<const LayerId> layers,
                        ScalingPolicy scaling = ScalingPolicy::linear);

/// Same score from precomputed per-layer modularities.
double score_from_modularities(std::span<const double> modularities,
                               ScalingPolicy scaling = ScalingPolicy::linear);

/// Incrementally maintained tallies for one vertex set B.
///
/// Holds, for every layer, the intra-set edge count, the degree sum and the
/// squared-degree sum over B, plus the number of B-neighbors of every vertex.
/// Toggling a vertex costs O(sum of its degrees); scoring any toggle
/// candidate afterwards is O(|L|).
///
/// The state refers to the network it was built from, which must outlive it.
class ScoreState {
public:
  explicit ScoreState(const MultilayerNetwork& net);
  ScoreState(const MultilayerNetwork& net, std::span<const VertexId> vertices);

  /// Replaces B. Costs O(n*m + sum of degrees of the new members).
  void assign(std::span<const VertexId> vertices);
  /// Removes u if present, adds it otherwise.
  void toggle(VertexId u);

  const MultilayerNetwork& network() const noexcept { return *net_; }
  bool contains(VertexId u) const { return member_[u] != 0; }
  std::size_t size() const noexcept { return size_; }
  VertexSet vertices() const;

  std::int64_t intra_edges(LayerId layer) const { return intra_[layer]; }
  std::int64_t degree_sum(LayerId layer) const { return deg_sum_[layer]; }
  std::int64_t degree_square_sum(LayerId layer) const { return deg_sq_sum_[layer]; }
  std::int64_t neighbors_in_set(LayerId layer, VertexId u) const {
    return static_cast<std::int64_t>(nbr_in_set_[layer * n_ + u]);
  }

  /// Q_l(B) for the current set.
  double layer_modularity(LayerId layer) const;
  std::vector<double> layer_modularities() const;
  double score(std::span<const LayerId> layers, ScalingPolicy scaling) const;
  /// H(B xor {u}, L) without mutating the state.
  double toggled_score(VertexId u, std::span<const LayerId> layers, ScalingPolicy scaling) const;

  /// Best single toggle over all vertices (or, with `frontier_only`, over B and
  /// vertices adjacent to B in some layer of L; both give the same winner).
  /// Toggles that would leave fewer than `min_size` vertices are skipped.
  /// Ties go to the smallest id. Returns n when no candidate exists.
  struct Move {
    VertexId vertex = 0;
    double score = 0.0;
  };
  Move best_toggle(std::span<const LayerId> layers, ScalingPolicy scaling, std::size_t min_size,
                   bool frontier_only = false) const;

  /// Test hook: true when every tally equals a from-scratch recount.
  bool consistent() const;

private:
  double excess(LayerId layer) const;
  double norm(std::size_t size) const;

  const MultilayerNetwork* net_;
  std::size_t n_;
  std::size_t m_;
  std::vector<std::uint8_t> member_;
  std::size_t size_ = 0;
  std::vector<std::int64_t> intra_;
  std::vector<std::int64_t> deg_sum_;
  std::vector<std::int64_t> deg_sq_sum_;
  std::vector<double> inv_total_;
  // Layer-major [layer * n + u]. Integral values held as doubles.
  std::vector<double> nbr_in_set_;
  mutable std::vector<double> scratch_;
};

/// H(B xor {u}, L) - H(B, L).
double score_delta(const ScoreState& state, std::span<const LayerId> layers, VertexId u,
                   ScalingPolicy scaling = ScalingPolicy::linear);

/// k x k symmetric connection-probability matrix, row-major.
class BlockMatrix {
public:
  BlockMatrix() = default;
  BlockMatrix(std::size_t k, std::vector<double> entries);
  /// diagonal on the diagonal, off_diagonal elsewhere.
  static BlockMatrix uniform(std::size_t k, double diagonal, double off_diagonal);

  std::size_t size() const noexcept { return k_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * k_ + j]; }

private:
  std::size_t k_ = 0;
  std::vector<double> entries_;
};

/// Multilayer stochastic block model parameters: block proportions and one
/// probability matrix per layer.
struct MsbmParams {
  std::vector<double> proportions;
  std::vector<BlockMatrix> layers;

  std::size_t num_blocks() const noexcept { return proportions.size(); }
  std::size_t num_layers() const noexcept { return layers.size(); }

  /// Throws ParameterError unless proportions are positive and sum to 1 and
  /// every matrix is k x k, symmetric, with entries in (0, 1).
  void validate() const;

  /// det P_l (two-block models only).
  double determinant(LayerId layer) const;
  /// kappa_l = pi' P_l pi.
  double kappa(LayerId layer) const;
};

/// Population modularity q_l of a set occupying fraction `size_fraction` of
/// the vertices, a fraction `rho` of which lie in block 1. Two-block closed
/// form: (s / sqrt 2) (pi_1 - rho)^2 det P_l / kappa_l.
double population_modularity(const MsbmParams& params, LayerId layer, double size_fraction,
                             double rho);
/// The same quantity from the quadratic form
/// (s / sqrt 2) (v' P v - (v' P pi)^2 / kappa), v = (rho, 1 - rho).
double population_modularity_quadratic(const MsbmParams& params, LayerId layer,
                                       double size_fraction, double rho);

/// H_*(B, L) = (sum over L of q_l)^2 / gamma(|L|).
double population_score(const MsbmParams& params, double size_fraction, double rho,
                        std::span<const LayerId> layers,
                        ScalingPolicy scaling = ScalingPolicy::linear);

}  // namespace mlx
