#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mlx/extraction.hpp"
#include "mlx/types.hpp"

namespace mlx {

/// A family of vertex sets (each sorted and non-empty).
using VertexFamily = std::vector<VertexSet>;

/// |a ∩ b| for sorted ranges.
std::size_t intersection_size(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b);
/// |a ∩ b| / |a ∪ b| for sorted ranges; 0 when both are empty.
double jaccard(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b);

/// Co(B; C): mean over B of the best Jaccard against any member of C.
double coverage(const VertexFamily& covered, const VertexFamily& by);

/// Symmetrized coverage: (Co(B; C) + Co(C; B)) / 2.
double match_score(const VertexFamily& a, const VertexFamily& b);

/// Misclassified vertices of B against a two-block partition: the smaller
/// symmetric difference to either block. The blocks must partition
/// [0, |C1| + |C2|).
std::size_t misclassification_error(std::span<const VertexId> vertices, std::span<const VertexId> block1,
                                    std::span<const VertexId> block2);

/// Vertices of [0, n) that belong to none of the communities.
VertexSet background_vertices(std::size_t n, std::span<const Community> communities);

/// Vertex sets of a community list, in order.
VertexFamily vertex_family(std::span<const Community> communities);

}  // namespace mlx
