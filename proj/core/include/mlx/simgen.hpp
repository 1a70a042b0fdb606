#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "mlx/metrics.hpp"
#include "mlx/network.hpp"
#include "mlx/scoring.hpp"
#include "mlx/types.hpp"

namespace mlx {

/// A planted vertex-layer community.
struct PlantedCommunity {
  VertexSet vertices;
  LayerSet layers;

  friend bool operator==(const PlantedCommunity&, const PlantedCommunity&) = default;
};

struct GroundTruth {
  std::vector<PlantedCommunity> communities;
  /// Block id per vertex for block models; empty otherwise.
  std::vector<int> labels;

  VertexFamily vertex_family() const;
};

struct Simulation {
  MultilayerNetwork network;
  GroundTruth truth;
};

/// Uniform [0, 1) draw keyed on (seed, layer, u, v). Pair order matters, so
/// callers pass u < v.
double pair_uniform(std::uint64_t seed, LayerId layer, VertexId u, VertexId v);

/// Block sizes for proportions `pi`: block i ends at ceil(n * (pi_1 + ... + pi_i)),
/// so block 1 has ceil(pi_1 n) vertices and the last block takes the rest.
std::vector<std::size_t> block_sizes(std::size_t n, std::span<const double> proportions);

/// Proportions used by the block-model experiments: (0.4, 0.6) for k = 2,
/// (0.2, 0.1, 0.2, 0.1, 0.4) for k = 5, uniform otherwise.
std::vector<double> standard_proportions(std::size_t k);

/// k-block parameters with P(i, i) = r + 0.05 and P(i, j) = 0.05 in all m layers.
MsbmParams standard_msbm_params(std::size_t k, double r, std::size_t m);

/// Multilayer stochastic block model. Vertices are labeled by id order
/// according to block_sizes(). `params` holds either one matrix per layer or a
/// single matrix reused for all m layers. Ground truth lists each block with
/// every layer.
Simulation generate_msbm(std::size_t n, std::size_t m, const MsbmParams& params, std::uint64_t seed);

/// The first round(tau * m) layers follow a k-block model with
/// P(i, i) = 0.15, P(i, j) = 0.05; the rest are Erdos-Renyi with p = 0.10.
/// Ground truth layer sets contain the structured layers only.
Simulation generate_persistence(std::size_t n, std::size_t m, double tau, std::size_t k,
                                std::uint64_t seed);

/// One community of round(fraction * n) vertices (ids 0, 1, ...) planted in
/// every layer: internal pairs connect with p = 0.15, all other pairs with 0.05.
Simulation generate_embedded(std::size_t n, std::size_t m, double fraction, std::uint64_t seed);

enum class TestbedCase {
  disjoint,        // I
  overlapping,     // II
  persistent,      // III
  nonpersistent,   // IV
  hierarchical_a,  // V
  hierarchical_b,  // VI
};

/// Accepts roman numerals (I..VI) or the enumerator names.
TestbedCase parse_testbed_case(std::string_view name);
std::string_view to_string(TestbedCase c);

/// Planted rectangles for a testbed case, scaled to n vertices and m layers.
std::vector<PlantedCommunity> testbed_layout(TestbedCase c, std::size_t n, std::size_t m);

/// Pairs sharing s >= 1 planted communities active in a layer connect with
/// probability 1 - 0.85^s (0.15 for a single community); all other pairs 0.05.
Simulation generate_testbed(TestbedCase c, std::size_t n, std::size_t m, std::uint64_t seed);

}  // namespace mlx
