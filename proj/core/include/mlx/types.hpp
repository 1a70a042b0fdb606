#pragma once

#include <cstdint>
#include <vector>

namespace mlx {

using VertexId = std::uint32_t;
using LayerId = std::uint32_t;

/// Sorted, duplicate-free list of vertex ids.
using VertexSet = std::vector<VertexId>;
/// Sorted, duplicate-free list of layer ids.
using LayerSet = std::vector<LayerId>;

}  // namespace mlx
