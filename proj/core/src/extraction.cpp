#include "mlx/extraction.hpp"

#include <algorithm>
#include <memory>
#include <numeric>
#include <random>
#include <set>

#include "parallel.hpp"

namespace mlx {

bool community_order(const Community& a, const Community& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.vertices.size() != b.vertices.size()) return a.vertices.size() < b.vertices.size();
  if (a.vertices != b.vertices) return a.vertices < b.vertices;
  return a.layers < b.layers;
}

std::vector<VertexSet> seed_sets(const MultilayerNetwork& net, const ExtractionConfig& config) {
  std::vector<VertexSet> seeds;
  std::set<VertexSet> seen;
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    for (std::size_t u = 0; u < net.num_vertices(); ++u) {
      auto nb = net.neighbors(static_cast<LayerId>(l), static_cast<VertexId>(u));
      if (nb.empty()) continue;
      VertexSet seed(nb.begin(), nb.end());
      seed.insert(std::lower_bound(seed.begin(), seed.end(), static_cast<VertexId>(u)),
                  static_cast<VertexId>(u));
      if (seen.insert(seed).second) seeds.push_back(std::move(seed));
    }
  }
  if (config.seed_policy == SeedPolicy::sampled && config.sample_count < seeds.size()) {
    std::vector<std::size_t> index(seeds.size());
    std::iota(index.begin(), index.end(), std::size_t{0});
    std::mt19937_64 rng(config.rng_seed);
    std::shuffle(index.begin(), index.end(), rng);
    index.resize(config.sample_count);
    std::sort(index.begin(), index.end());
    std::vector<VertexSet> picked;
    picked.reserve(index.size());
    for (std::size_t i : index) picked.push_back(std::move(seeds[i]));
    seeds = std::move(picked);
  }
  return seeds;
}

LayerSet propose_layers(std::span<const double> modularities, ScalingPolicy scaling) {
  const std::size_t m = modularities.size();
  if (m == 0) throw ParameterError("layer proposal needs at least one layer");
  std::vector<LayerId> order(m);
  std::iota(order.begin(), order.end(), LayerId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](LayerId a, LayerId b) { return modularities[a] > modularities[b]; });

  // Prefix scores H_k = (sum of the first k positive parts)^2 / gamma(k).
  auto prefix_score = [&](double sum, std::size_t k) { return sum * sum / scaling_factor(scaling, k); };
  std::size_t k = m;
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    sum += std::max(modularities[order[i]], 0.0);
    const double next = sum + std::max(modularities[order[i + 1]], 0.0);
    if (prefix_score(sum, i + 1) >= prefix_score(next, i + 2)) {
      k = i + 1;
      break;
    }
  }
  LayerSet proposed(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(proposed.begin(), proposed.end());
  return proposed;
}

LayerSet layer_set_search(const ScoreState& state, std::span<const LayerId> previous,
                          ScalingPolicy scaling) {
  if (state.size() < 2) throw ParameterError("layer search needs at least two vertices");
  const auto proposed = propose_layers(state.layer_modularities(), scaling);
  if (previous.empty()) return proposed;
  if (state.score(proposed, scaling) > state.score(previous, scaling)) return proposed;
  return LayerSet(previous.begin(), previous.end());
}

LayerSet layer_set_search(const MultilayerNetwork& net, std::span<const VertexId> vertices,
                          std::span<const LayerId> previous, ScalingPolicy scaling) {
  if (vertices.size() < 2) throw ParameterError("layer search needs at least two vertices");
  ScoreState state(net, vertices);
  return layer_set_search(state, previous, scaling);
}

std::size_t vertex_set_search(ScoreState& state, std::span<const LayerId> layers,
                              const ExtractionConfig& config, SearchTrace* trace) {
  if (layers.empty()) throw ParameterError("vertex search needs a non-empty layer set");
  if (state.size() < 2) throw ParameterError("vertex search needs at least two vertices");
  const std::size_t n = state.network().num_vertices();
  const std::size_t limit = config.max_iterations > 0 ? config.max_iterations : 10 * n;

  double current = state.score(layers, config.scaling);
  if (trace) trace->scores.push_back(current);
  std::size_t toggles = 0;
  while (true) {
    const auto move = state.best_toggle(layers, config.scaling, 2, config.frontier_only);
    if (move.vertex >= n || !(move.score > current)) break;
    if (toggles >= limit) {
      throw IterationLimitError(state.vertices(), LayerSet(layers.begin(), layers.end()));
    }
    state.toggle(move.vertex);
    current = move.score;
    ++toggles;
    if (trace) {
      trace->scores.push_back(current);
      trace->toggled.push_back(move.vertex);
    }
  }
  return toggles;
}

VertexSet vertex_set_search(const MultilayerNetwork& net, std::span<const VertexId> vertices,
                            std::span<const LayerId> layers, const ExtractionConfig& config,
                            SearchTrace* trace) {
  ScoreState state(net, vertices);
  vertex_set_search(state, layers, config, trace);
  return state.vertices();
}

namespace {

std::optional<Community> extract_in(ScoreState& state, std::span<const VertexId> seed,
                                    const ExtractionConfig& config) {
  if (seed.size() < 2) throw ParameterError("extraction seed needs at least two vertices");
  state.assign(seed);
  if (state.size() < 2) throw ParameterError("extraction seed needs two distinct vertices");

  LayerSet layers;
  while (true) {
    auto updated = layer_set_search(state, layers, config.scaling);
    const bool layers_changed = updated != layers;
    layers = std::move(updated);
    const std::size_t toggles = vertex_set_search(state, layers, config);
    if (!layers_changed && toggles == 0) break;
  }

  Community c;
  c.vertices = state.vertices();
  c.layers = std::move(layers);
  c.score = multilayer_score(state.network(), c.vertices, c.layers, config.scaling);
  if (c.vertices.size() < 2 || !(c.score > 0.0)) return std::nullopt;
  return c;
}

}  // namespace

std::optional<Community> extract(const MultilayerNetwork& net, std::span<const VertexId> seed,
                                 const ExtractionConfig& config) {
  ScoreState state(net);
  return extract_in(state, seed, config);
}

std::vector<Community> extract_all(const MultilayerNetwork& net, const ExtractionConfig& config,
                                   ExtractionReport* report) {
  const auto seeds = seed_sets(net, config);
  const std::size_t workers =
      std::min(detail::resolve_workers(config.worker_count), std::max<std::size_t>(seeds.size(), 1));

  enum class Outcome : std::uint8_t { extracted, degenerate, failed };
  std::vector<std::optional<Community>> found(seeds.size());
  std::vector<Outcome> outcome(seeds.size(), Outcome::degenerate);
  std::vector<std::unique_ptr<ScoreState>> states(workers);

  detail::parallel_for(seeds.size(), workers, [&](std::size_t worker, std::size_t i) {
    auto& state = states[worker];
    if (!state) state = std::make_unique<ScoreState>(net);
    try {
      found[i] = extract_in(*state, seeds[i], config);
      outcome[i] = found[i] ? Outcome::extracted : Outcome::degenerate;
    } catch (const IterationLimitError&) {
      outcome[i] = Outcome::failed;
    }
  });

  std::vector<Community> out;
  ExtractionReport local;
  local.seeds = seeds.size();
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    switch (outcome[i]) {
      case Outcome::extracted:
        ++local.extracted;
        out.push_back(std::move(*found[i]));
        break;
      case Outcome::degenerate:
        ++local.degenerate;
        break;
      case Outcome::failed:
        ++local.failed;
        break;
    }
  }
  std::sort(out.begin(), out.end(), community_order);
  out.erase(std::unique(out.begin(), out.end(),
                        [](const Community& a, const Community& b) {
                          return a.vertices == b.vertices && a.layers == b.layers;
                        }),
            out.end());
  local.unique = out.size();
  if (local.failed > 0) {
    local.warnings.push_back(std::to_string(local.failed) + " seed(s) hit the iteration limit");
  }
  if (report) *report = std::move(local);
  return out;
}

}  // namespace mlx
