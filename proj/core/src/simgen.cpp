#include "mlx/simgen.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <string>

#include "mlx/error.hpp"

namespace mlx {

VertexFamily GroundTruth::vertex_family() const {
  VertexFamily out;
  out.reserve(communities.size());
  for (const auto& c : communities) out.push_back(c.vertices);
  return out;
}

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Draws every unordered pair of every layer once; probability(layer, u, v)
// gives the connection probability.
template <typename Probability>
MultilayerNetwork sample_network(std::size_t n, std::size_t m, std::uint64_t seed,
                                 Probability&& probability) {
  std::vector<EdgeRecord> edges;
  for (std::size_t l = 0; l < m; ++l) {
    const auto layer = static_cast<LayerId>(l);
    for (VertexId u = 0; u + 1 < n; ++u) {
      for (VertexId v = u + 1; v < n; ++v) {
        if (pair_uniform(seed, layer, u, v) < probability(layer, u, v)) edges.push_back({layer, u, v});
      }
    }
  }
  return build_network(n, m, edges);
}

LayerSet all_layers(std::size_t m) {
  LayerSet out(m);
  for (std::size_t l = 0; l < m; ++l) out[l] = static_cast<LayerId>(l);
  return out;
}

VertexSet id_range(std::size_t begin, std::size_t end) {
  VertexSet out;
  for (std::size_t u = begin; u < end; ++u) out.push_back(static_cast<VertexId>(u));
  return out;
}

}  // namespace

double pair_uniform(std::uint64_t seed, LayerId layer, VertexId u, VertexId v) {
  std::uint64_t h = mix64(seed ^ mix64(0x6d6c785f6c617972ULL + layer));
  h = mix64(h ^ ((static_cast<std::uint64_t>(u) << 32) | v));
  return static_cast<double>(h >> 11) * 0x1p-53;
}

std::vector<std::size_t> block_sizes(std::size_t n, std::span<const double> proportions) {
  std::vector<std::size_t> sizes;
  sizes.reserve(proportions.size());
  double cumulative = 0.0;
  std::size_t previous_end = 0;
  for (std::size_t i = 0; i < proportions.size(); ++i) {
    cumulative += proportions[i];
    std::size_t end = n;
    if (i + 1 < proportions.size()) {
      // The small slack keeps exact products such as 0.3 * 1000 from rounding up.
      end = static_cast<std::size_t>(std::ceil(cumulative * static_cast<double>(n) - 1e-9));
      end = std::clamp(end, previous_end, n);
    }
    sizes.push_back(end - previous_end);
    previous_end = end;
  }
  return sizes;
}

std::vector<double> standard_proportions(std::size_t k) {
  if (k == 2) return {0.4, 0.6};
  if (k == 5) return {0.2, 0.1, 0.2, 0.1, 0.4};
  if (k == 0) throw ParameterError("block count must be positive");
  return std::vector<double>(k, 1.0 / static_cast<double>(k));
}

MsbmParams standard_msbm_params(std::size_t k, double r, std::size_t m) {
  MsbmParams params;
  params.proportions = standard_proportions(k);
  params.layers.assign(m, BlockMatrix::uniform(k, r + 0.05, 0.05));
  return params;
}

Simulation generate_msbm(std::size_t n, std::size_t m, const MsbmParams& params, std::uint64_t seed) {
  params.validate();
  const std::size_t k = params.num_blocks();
  if (k < 2) throw ParameterError("block model needs at least two blocks");
  if (params.num_layers() != m && params.num_layers() != 1) {
    throw ParameterError("expected " + std::to_string(m) + " layer matrices or a single shared one");
  }
  if (n < k) throw ParameterError("fewer vertices than blocks");

  const auto sizes = block_sizes(n, params.proportions);
  std::vector<int> labels(n);
  Simulation sim;
  std::size_t start = 0;
  for (std::size_t b = 0; b < k; ++b) {
    std::fill(labels.begin() + static_cast<std::ptrdiff_t>(start),
              labels.begin() + static_cast<std::ptrdiff_t>(start + sizes[b]), static_cast<int>(b));
    if (sizes[b] > 0) sim.truth.communities.push_back({id_range(start, start + sizes[b]), all_layers(m)});
    start += sizes[b];
  }
  sim.network = sample_network(n, m, seed, [&](LayerId l, VertexId u, VertexId v) {
    const auto& P = params.layers[params.num_layers() == 1 ? 0 : l];
    return P(static_cast<std::size_t>(labels[u]), static_cast<std::size_t>(labels[v]));
  });
  sim.truth.labels = std::move(labels);
  return sim;
}

Simulation generate_persistence(std::size_t n, std::size_t m, double tau, std::size_t k,
                                std::uint64_t seed) {
  if (!(tau > 0.0 && tau <= 1.0)) throw ParameterError("tau must lie in (0, 1]");
  const auto structured = static_cast<std::size_t>(std::lround(tau * static_cast<double>(m)));
  if (structured < 1) throw ParameterError("tau * m must round to at least one layer");

  MsbmParams params;
  params.proportions = standard_proportions(k);
  params.layers.assign(m, BlockMatrix::uniform(k, 0.15, 0.05));
  for (std::size_t l = structured; l < m; ++l) params.layers[l] = BlockMatrix::uniform(k, 0.10, 0.10);

  auto sim = generate_msbm(n, m, params, seed);
  const LayerSet signal(all_layers(structured));
  for (auto& c : sim.truth.communities) c.layers = signal;
  return sim;
}

Simulation generate_embedded(std::size_t n, std::size_t m, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw ParameterError("embed fraction must lie in (0, 1)");
  if (m == 0) throw ParameterError("at least one layer required");
  const auto size = static_cast<std::size_t>(std::lround(fraction * static_cast<double>(n)));
  if (size < 2) throw ParameterError("embedded community needs at least two vertices");

  Simulation sim;
  sim.network = sample_network(n, m, seed, [size](LayerId, VertexId u, VertexId v) {
    return (u < size && v < size) ? 0.15 : 0.05;
  });
  sim.truth.communities.push_back({id_range(0, size), all_layers(m)});
  return sim;
}

namespace {

// Planted rectangles as fractions of [0, n) x [0, m): {v_begin, v_end, l_begin, l_end}.
using Rect = std::array<double, 4>;

std::vector<Rect> layout_fractions(TestbedCase c) {
  switch (c) {
    case TestbedCase::disjoint:
      return {{0.00, 0.15, 0.0, 1.0 / 3}, {0.15, 0.30, 1.0 / 3, 2.0 / 3}, {0.30, 0.45, 2.0 / 3, 1.0}};
    case TestbedCase::overlapping:
      return {{0.00, 0.20, 0.0, 0.5}, {0.10, 0.30, 0.5, 1.0}, {0.50, 0.70, 0.25, 0.75}};
    case TestbedCase::persistent:
      return {{0.00, 0.15, 0.0, 1.0}, {0.15, 0.30, 0.0, 1.0}, {0.30, 0.45, 0.0, 1.0}};
    case TestbedCase::nonpersistent:
      return {{0.00, 0.20, 0.0, 0.1}, {0.20, 0.40, 0.1, 0.3}, {0.40, 0.60, 0.3, 0.6}, {0.60, 0.80, 0.6, 1.0}};
    case TestbedCase::hierarchical_a:
      return {{0.00, 0.60, 0.0, 0.6}, {0.00, 0.20, 0.0, 0.3}};
    case TestbedCase::hierarchical_b:
      return {{0.00, 0.30, 0.0, 2.0 / 3}, {0.00, 0.15, 0.0, 1.0 / 3}};
  }
  return {};
}

}  // namespace

TestbedCase parse_testbed_case(std::string_view name) {
  static constexpr std::array<std::pair<std::string_view, TestbedCase>, 12> names{{
      {"I", TestbedCase::disjoint},
      {"II", TestbedCase::overlapping},
      {"III", TestbedCase::persistent},
      {"IV", TestbedCase::nonpersistent},
      {"V", TestbedCase::hierarchical_a},
      {"VI", TestbedCase::hierarchical_b},
      {"disjoint", TestbedCase::disjoint},
      {"overlapping", TestbedCase::overlapping},
      {"persistent", TestbedCase::persistent},
      {"nonpersistent", TestbedCase::nonpersistent},
      {"hierarchical_a", TestbedCase::hierarchical_a},
      {"hierarchical_b", TestbedCase::hierarchical_b},
  }};
  for (const auto& [key, value] : names) {
    if (key == name) return value;
  }
  throw ParameterError("unknown testbed case '" + std::string(name) + "'");
}

std::string_view to_string(TestbedCase c) {
  switch (c) {
    case TestbedCase::disjoint:
      return "I";
    case TestbedCase::overlapping:
      return "II";
    case TestbedCase::persistent:
      return "III";
    case TestbedCase::nonpersistent:
      return "IV";
    case TestbedCase::hierarchical_a:
      return "V";
    case TestbedCase::hierarchical_b:
      return "VI";
  }
  return "?";
}

std::vector<PlantedCommunity> testbed_layout(TestbedCase c, std::size_t n, std::size_t m) {
  auto scale = [](double f, std::size_t total) {
    return static_cast<std::size_t>(std::lround(f * static_cast<double>(total)));
  };
  std::vector<PlantedCommunity> out;
  for (const auto& r : layout_fractions(c)) {
    PlantedCommunity p;
    p.vertices = id_range(scale(r[0], n), scale(r[1], n));
    for (std::size_t l = scale(r[2], m); l < scale(r[3], m); ++l) p.layers.push_back(static_cast<LayerId>(l));
    if (p.vertices.size() < 2 || p.layers.empty()) {
      throw ParameterError("testbed " + std::string(to_string(c)) + " does not fit " + std::to_string(n) +
                           " vertices and " + std::to_string(m) + " layers");
    }
    out.push_back(std::move(p));
  }
  return out;
}

Simulation generate_testbed(TestbedCase c, std::size_t n, std::size_t m, std::uint64_t seed) {
  Simulation sim;
  sim.truth.communities = testbed_layout(c, n, m);
  const auto& planted = sim.truth.communities;
  if (planted.size() > 64) throw UnsupportedError("too many planted communities");

  // membership[l][u]: bit i set when community i covers vertex u in layer l.
  std::vector<std::vector<std::uint64_t>> membership(m, std::vector<std::uint64_t>(n, 0));
  for (std::size_t i = 0; i < planted.size(); ++i) {
    for (LayerId l : planted[i].layers) {
      for (VertexId u : planted[i].vertices) membership[l][u] |= std::uint64_t{1} << i;
    }
  }
  std::array<double, 65> shared_probability{};
  shared_probability[0] = 0.05;
  for (std::size_t s = 1; s < shared_probability.size(); ++s) {
    shared_probability[s] = 1.0 - std::pow(0.85, static_cast<double>(s));
  }
  sim.network = sample_network(n, m, seed, [&](LayerId l, VertexId u, VertexId v) {
    return shared_probability[static_cast<std::size_t>(std::popcount(membership[l][u] & membership[l][v]))];
  });
  return sim;
}

}  // namespace mlx
