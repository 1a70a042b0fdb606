#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlx/types.hpp"

namespace mlx {

/// One ingestion row: an undirected edge {u, v} in `layer`.
struct EdgeRecord {
  LayerId layer = 0;
  VertexId u = 0;
  VertexId v = 0;

  friend bool operator==(const EdgeRecord&, const EdgeRecord&) = default;
};

/// Counts of rows removed while cleaning an edge list.
struct CleaningStats {
  std::size_t self_loops = 0;
  std::size_t duplicates = 0;
};

/// An immutable stack of `m` simple undirected graphs on the vertex set [0, n).
///
/// Neighbor lists are sorted ascending. Degrees and per-layer degree totals are
/// precomputed, so the object can be shared read-only between threads.
class MultilayerNetwork {
public:
  MultilayerNetwork() = default;

  std::size_t num_vertices() const noexcept { return n_; }
  std::size_t num_layers() const noexcept { return degree_totals_.size(); }

  std::span<const VertexId> neighbors(LayerId layer, VertexId u) const {
    const auto& offsets = offsets_[layer];
    return {targets_[layer].data() + offsets[u], targets_[layer].data() + offsets[u + 1]};
  }

  std::int64_t degree(LayerId layer, VertexId u) const {
    return degrees_[layer][u];
  }
  /// Degree sequence of one layer.
  std::span<const std::int64_t> degrees(LayerId layer) const { return degrees_[layer]; }
  /// Same values as degrees(), stored as doubles for the scoring kernels.
  std::span<const double> degree_values(LayerId layer) const { return degree_values_[layer]; }
  /// Sum of degrees in a layer (twice its edge count).
  std::int64_t degree_total(LayerId layer) const { return degree_totals_[layer]; }
  std::size_t num_edges(LayerId layer) const {
    return static_cast<std::size_t>(degree_totals_[layer] / 2);
  }
  std::size_t total_edges() const;

  bool has_edge(LayerId layer, VertexId u, VertexId v) const;

  /// All edges with u < v, sorted by (layer, u, v).
  std::vector<EdgeRecord> edges() const;

  friend bool operator==(const MultilayerNetwork& a, const MultilayerNetwork& b) {
    return a.n_ == b.n_ && a.offsets_ == b.offsets_ && a.targets_ == b.targets_;
  }

private:
  friend MultilayerNetwork build_network(std::size_t, std::size_t,
                                         std::span<const EdgeRecord>, CleaningStats*);

  std::size_t n_ = 0;
  // CSR per layer.
  std::vector<std::vector<std::size_t>> offsets_;
  std::vector<std::vector<VertexId>> targets_;
  std::vector<std::vector<std::int64_t>> degrees_;
  std::vector<std::vector<double>> degree_values_;
  std::vector<std::int64_t> degree_totals_;
};

/// Builds a network from raw records. Self-loops are dropped and repeated
/// undirected pairs collapsed; `stats` (when given) receives the counts.
/// Throws BoundsError if any id is outside [0, n) or [0, m), or if n or m is 0.
MultilayerNetwork build_network(std::size_t n, std::size_t m,
                                std::span<const EdgeRecord> edges,
                                CleaningStats* stats = nullptr);
inline MultilayerNetwork build_network(std::size_t n, std::size_t m, std::initializer_list<EdgeRecord> edges,
                                       CleaningStats* stats = nullptr) {
  return build_network(n, m, std::span<const EdgeRecord>(edges.begin(), edges.size()), stats);
}

/// Open neighborhood of `u` in `layer` (u itself excluded), ascending.
VertexSet neighborhood(const MultilayerNetwork& net, VertexId u, LayerId layer);

struct LoadOptions {
  std::optional<std::size_t> declared_n;
  std::optional<std::size_t> declared_m;
  /// Treat vertex and layer tokens as arbitrary names and assign dense ids in
  /// order of first appearance.
  bool labeled = false;
};

struct LoadResult {
  MultilayerNetwork network;
  CleaningStats cleaning;
  std::size_t rows = 0;
  /// Populated only for labeled input: id -> original token.
  std::vector<std::string> vertex_labels;
  std::vector<std::string> layer_labels;
};

/// Parses `layer u v` rows (whitespace or comma separated, `#` starts a comment,
/// extra columns ignored).
LoadResult read_edge_list(std::istream& in, const LoadOptions& options = {});
LoadResult load_edge_list(const std::filesystem::path& path, const LoadOptions& options = {});

/// Canonical text form: one `layer u v` row per edge, u < v, sorted.
void write_edge_list(std::ostream& out, const MultilayerNetwork& net);
void save_edge_list(const std::filesystem::path& path, const MultilayerNetwork& net);

}  // namespace mlx
