#include "mlx/scoring.hpp"

#include <cmath>
#include <numeric>

#include "kernels.hpp"
#include "mlx/error.hpp"

namespace mlx {

double scaling_factor(ScalingPolicy policy, std::size_t layer_count) {
  const auto count = static_cast<double>(layer_count);
  switch (policy) {
    case ScalingPolicy::constant:
      return 1.0;
    case ScalingPolicy::linear:
      return count;
    case ScalingPolicy::quadratic:
      return count * count;
  }
  return count;
}

std::string_view to_string(ScalingPolicy policy) {
  switch (policy) {
    case ScalingPolicy::constant:
      return "constant";
    case ScalingPolicy::linear:
      return "linear";
    case ScalingPolicy::quadratic:
      return "quadratic";
  }
  return "linear";
}

ScalingPolicy parse_scaling(std::string_view name) {
  if (name == "constant") return ScalingPolicy::constant;
  if (name == "linear") return ScalingPolicy::linear;
  if (name == "quadratic") return ScalingPolicy::quadratic;
  throw ParameterError("unknown scaling '" + std::string(name) +
                       "' (expected constant, linear or quadratic)");
}

double set_modularity(const MultilayerNetwork& net, std::span<const VertexId> vertices,
                      LayerId layer) {
  const std::size_t n = net.num_vertices();
  if (layer >= net.num_layers()) throw BoundsError("layer " + std::to_string(layer) + " out of range");
  for (VertexId u : vertices) {
    if (u >= n) throw BoundsError("vertex " + std::to_string(u) + " out of range");
  }
  if (vertices.size() < 2) return 0.0;

  std::vector<std::uint8_t> member(n, 0);
  for (VertexId u : vertices) member[u] = 1;

  std::int64_t twice_intra = 0, deg_sum = 0, deg_sq_sum = 0;
  for (VertexId u : vertices) {
    const std::int64_t d = net.degree(layer, u);
    deg_sum += d;
    deg_sq_sum += d * d;
    for (VertexId v : net.neighbors(layer, u)) twice_intra += member[v];
  }
  const double ex = detail::excess(static_cast<double>(twice_intra / 2),
                                   static_cast<double>(detail::degree_pair_sum(deg_sum, deg_sq_sum)),
                                   detail::inverse_total(net.degree_total(layer)));
  return ex * detail::modularity_norm(n, vertices.size());
}

double score_from_modularities(std::span<const double> modularities, ScalingPolicy scaling) {
  if (modularities.empty()) throw ParameterError("score needs a non-empty layer set");
  double sum = 0.0;
  for (double q : modularities) sum += detail::positive_part(q);
  return sum * sum / scaling_factor(scaling, modularities.size());
}

double multilayer_score(const MultilayerNetwork& net, std::span<const VertexId> vertices,
                        std::span<const LayerId> layers, ScalingPolicy scaling) {
  if (layers.empty()) throw ParameterError("score needs a non-empty layer set");
  std::vector<double> q;
  q.reserve(layers.size());
  for (LayerId l : layers) q.push_back(set_modularity(net, vertices, l));
  return score_from_modularities(q, scaling);
}

BlockMatrix::BlockMatrix(std::size_t k, std::vector<double> entries)
    : k_(k), entries_(std::move(entries)) {
  if (entries_.size() != k * k) throw ParameterError("block matrix needs k*k entries");
}

BlockMatrix BlockMatrix::uniform(std::size_t k, double diagonal, double off_diagonal) {
  std::vector<double> e(k * k, off_diagonal);
  for (std::size_t i = 0; i < k; ++i) e[i * k + i] = diagonal;
  return BlockMatrix(k, std::move(e));
}

void MsbmParams::validate() const {
  const std::size_t k = num_blocks();
  if (k < 1) throw ParameterError("at least one block required");
  double total = 0.0;
  for (double p : proportions) {
    if (!(p > 0.0)) throw ParameterError("block proportions must be positive");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ParameterError("block proportions must sum to 1");
  if (layers.empty()) throw ParameterError("at least one layer matrix required");
  for (const auto& P : layers) {
    if (P.size() != k) throw ParameterError("layer matrix size does not match block count");
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        if (!(P(i, j) > 0.0 && P(i, j) < 1.0)) {
          throw ParameterError("connection probabilities must lie in (0, 1)");
        }
        if (P(i, j) != P(j, i)) throw ParameterError("layer matrices must be symmetric");
      }
    }
  }
}

double MsbmParams::determinant(LayerId layer) const {
  if (num_blocks() != 2) throw UnsupportedError("determinant is only defined here for two blocks");
  const auto& P = layers.at(layer);
  return P(0, 0) * P(1, 1) - P(0, 1) * P(1, 0);
}

double MsbmParams::kappa(LayerId layer) const {
  const auto& P = layers.at(layer);
  double sum = 0.0;
  for (std::size_t i = 0; i < num_blocks(); ++i) {
    for (std::size_t j = 0; j < num_blocks(); ++j) sum += proportions[i] * P(i, j) * proportions[j];
  }
  return sum;
}

namespace {

void check_population_args(const MsbmParams& params, LayerId layer, double s, double rho) {
  params.validate();
  if (params.num_blocks() != 2) {
    throw UnsupportedError("population modularity is defined for two-block models only");
  }
  if (layer >= params.num_layers()) throw BoundsError("layer " + std::to_string(layer) + " out of range");
  if (!(s > 0.0 && s <= 1.0)) throw ParameterError("size fraction must lie in (0, 1]");
  if (!(rho >= 0.0 && rho <= 1.0)) throw ParameterError("rho must lie in [0, 1]");
}

}  // namespace

double population_modularity(const MsbmParams& params, LayerId layer, double size_fraction,
                             double rho) {
  check_population_args(params, layer, size_fraction, rho);
  const double gap = params.proportions[0] - rho;
  // No factor 1/2 here: det/kappa is what the quadratic form reduces to, and it
  // is what sampled networks concentrate around.
  return size_fraction / std::sqrt(2.0) * gap * gap * params.determinant(layer) / params.kappa(layer);
}

double population_modularity_quadratic(const MsbmParams& params, LayerId layer,
                                       double size_fraction, double rho) {
  check_population_args(params, layer, size_fraction, rho);
  const auto& P = params.layers[layer];
  const double v[2] = {rho, 1.0 - rho};
  const auto& pi = params.proportions;
  double vpv = 0.0, vppi = 0.0;
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      vpv += v[i] * P(i, j) * v[j];
      vppi += v[i] * P(i, j) * pi[j];
    }
  }
  return size_fraction / std::sqrt(2.0) * (vpv - vppi * vppi / params.kappa(layer));
}

double population_score(const MsbmParams& params, double size_fraction, double rho,
                        std::span<const LayerId> layers, ScalingPolicy scaling) {
  if (layers.empty()) throw ParameterError("score needs a non-empty layer set");
  double sum = 0.0;
  for (LayerId l : layers) sum += population_modularity(params, l, size_fraction, rho);
  return sum * sum / scaling_factor(scaling, layers.size());
}

}  // namespace mlx
