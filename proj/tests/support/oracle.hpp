#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mlx/extraction.hpp"
#include "mlx/network.hpp"
#include "mlx/scoring.hpp"

namespace mlx::testing {

/// Set modularity by direct enumeration of vertex pairs.
double brute_set_modularity(const MultilayerNetwork& net, const VertexSet& vertices, LayerId layer);
double brute_score(const MultilayerNetwork& net, const VertexSet& vertices, const LayerSet& layers,
                   ScalingPolicy scaling = ScalingPolicy::linear);

/// Global maximum of H over every (B, L) with |B| >= 2 and L non-empty.
/// Only for tiny networks (n <= 16, m <= 4).
Community exhaustive_maximum(const MultilayerNetwork& net, ScalingPolicy scaling = ScalingPolicy::linear);

/// Every layer an independent G(n, p).
MultilayerNetwork random_network(std::size_t n, std::size_t m, double p, std::mt19937_64& rng);
VertexSet random_subset(std::size_t n, double p, std::mt19937_64& rng);

MultilayerNetwork triangle_plus_isolated();
MultilayerNetwork complete_graph(std::size_t n);

}  // namespace mlx::testing
