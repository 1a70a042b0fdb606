#include <algorithm>

#include "kernels.hpp"
#include "mlx/error.hpp"
#include "mlx/scoring.hpp"

namespace mlx {

namespace {

// Every tally product stays below 2^53, so double arithmetic on them is exact.
constexpr std::int64_t kMaxExactDegreeTotal = std::int64_t{1} << 26;

}  // namespace

ScoreState::ScoreState(const MultilayerNetwork& net)
    : net_(&net), n_(net.num_vertices()), m_(net.num_layers()) {
  member_.assign(n_, 0);
  intra_.assign(m_, 0);
  deg_sum_.assign(m_, 0);
  deg_sq_sum_.assign(m_, 0);
  inv_total_.resize(m_);
  for (std::size_t l = 0; l < m_; ++l) {
    const auto total = net.degree_total(static_cast<LayerId>(l));
    if (total > kMaxExactDegreeTotal) {
      throw UnsupportedError("layer " + std::to_string(l) + " has too many edges for exact scoring");
    }
    inv_total_[l] = detail::inverse_total(total);
  }
  nbr_in_set_.assign(n_ * m_, 0.0);
}

ScoreState::ScoreState(const MultilayerNetwork& net, std::span<const VertexId> vertices)
    : ScoreState(net) {
  assign(vertices);
}

void ScoreState::assign(std::span<const VertexId> vertices) {
  for (VertexId u : vertices) {
    if (u >= n_) throw BoundsError("vertex " + std::to_string(u) + " out of range");
  }
  std::fill(member_.begin(), member_.end(), 0);
  std::fill(intra_.begin(), intra_.end(), 0);
  std::fill(deg_sum_.begin(), deg_sum_.end(), 0);
  std::fill(deg_sq_sum_.begin(), deg_sq_sum_.end(), 0);
  std::fill(nbr_in_set_.begin(), nbr_in_set_.end(), 0.0);
  size_ = 0;
  for (VertexId u : vertices) {
    if (!member_[u]) toggle(u);
  }
}

void ScoreState::toggle(VertexId u) {
  if (u >= n_) throw BoundsError("vertex " + std::to_string(u) + " out of range");
  const bool adding = member_[u] == 0;
  const double step = adding ? 1.0 : -1.0;
  for (std::size_t l = 0; l < m_; ++l) {
    const auto layer = static_cast<LayerId>(l);
    const std::int64_t d = net_->degree(layer, u);
    const auto inside = static_cast<std::int64_t>(nbr_in_set_[l * n_ + u]);
    double* counts = nbr_in_set_.data() + l * n_;
    if (adding) {
      intra_[l] += inside;
      deg_sum_[l] += d;
      deg_sq_sum_[l] += d * d;
    } else {
      intra_[l] -= inside;
      deg_sum_[l] -= d;
      deg_sq_sum_[l] -= d * d;
    }
    for (VertexId v : net_->neighbors(layer, u)) counts[v] += step;
  }
  member_[u] = adding ? 1 : 0;
  size_ = adding ? size_ + 1 : size_ - 1;
}

VertexSet ScoreState::vertices() const {
  VertexSet out;
  out.reserve(size_);
  for (std::size_t u = 0; u < n_; ++u) {
    if (member_[u]) out.push_back(static_cast<VertexId>(u));
  }
  return out;
}

double ScoreState::excess(LayerId layer) const {
  return detail::excess(static_cast<double>(intra_[layer]),
                        static_cast<double>(detail::degree_pair_sum(deg_sum_[layer], deg_sq_sum_[layer])),
                        inv_total_[layer]);
}

double ScoreState::norm(std::size_t size) const { return detail::modularity_norm(n_, size); }

double ScoreState::layer_modularity(LayerId layer) const {
  if (layer >= m_) throw BoundsError("layer " + std::to_string(layer) + " out of range");
  return excess(layer) * norm(size_);
}

std::vector<double> ScoreState::layer_modularities() const {
  std::vector<double> q(m_);
  const double scale = norm(size_);
  for (std::size_t l = 0; l < m_; ++l) q[l] = excess(static_cast<LayerId>(l)) * scale;
  return q;
}

double ScoreState::score(std::span<const LayerId> layers, ScalingPolicy scaling) const {
  if (layers.empty()) throw ParameterError("score needs a non-empty layer set");
  double sum = 0.0;
  for (LayerId l : layers) {
    if (l >= m_) throw BoundsError("layer " + std::to_string(l) + " out of range");
    sum += detail::positive_part(excess(l));
  }
  const double t = sum * norm(size_);
  return t * t / scaling_factor(scaling, layers.size());
}

double ScoreState::toggled_score(VertexId u, std::span<const LayerId> layers,
                                 ScalingPolicy scaling) const {
  if (layers.empty()) throw ParameterError("score needs a non-empty layer set");
  if (u >= n_) throw BoundsError("vertex " + std::to_string(u) + " out of range");
  const bool removing = member_[u] != 0;
  const double sign = removing ? -1.0 : 1.0;
  const double drop = removing ? 1.0 : 0.0;
  double sum = 0.0;
  for (LayerId l : layers) {
    if (l >= m_) throw BoundsError("layer " + std::to_string(l) + " out of range");
    const double intra = static_cast<double>(intra_[l]);
    const double degsum = static_cast<double>(deg_sum_[l]);
    const double pair = static_cast<double>(detail::degree_pair_sum(deg_sum_[l], deg_sq_sum_[l]));
    const double c = nbr_in_set_[l * n_ + u];
    const double d = net_->degree_values(l)[u];
    const double ex = detail::excess(intra + sign * c, pair + sign * d * degsum + drop * d * d,
                                     inv_total_[l]);
    sum += detail::positive_part(ex);
  }
  const double t = sum * norm(removing ? size_ - 1 : size_ + 1);
  return t * t / scaling_factor(scaling, layers.size());
}

ScoreState::Move ScoreState::best_toggle(std::span<const LayerId> layers, ScalingPolicy scaling,
                                         std::size_t min_size, bool frontier_only) const {
  if (layers.empty()) throw ParameterError("score needs a non-empty layer set");
  // scratch_ layout: [sum of positive excess | sign | drop | frontier]
  scratch_.assign(4 * n_, 0.0);
  double* acc = scratch_.data();
  double* sign = acc + n_;
  double* drop = sign + n_;
  double* frontier = drop + n_;
  for (std::size_t u = 0; u < n_; ++u) {
    sign[u] = member_[u] ? -1.0 : 1.0;
    drop[u] = member_[u] ? 1.0 : 0.0;
  }

  for (LayerId l : layers) {
    if (l >= m_) throw BoundsError("layer " + std::to_string(l) + " out of range");
    const double intra = static_cast<double>(intra_[l]);
    const double degsum = static_cast<double>(deg_sum_[l]);
    const double pair = static_cast<double>(detail::degree_pair_sum(deg_sum_[l], deg_sq_sum_[l]));
    const double inv = inv_total_[l];
    const double* counts = nbr_in_set_.data() + l * n_;
    const double* deg = net_->degree_values(l).data();
    for (std::size_t u = 0; u < n_; ++u) {
      const double c = counts[u];
      const double d = deg[u];
      const double ex = detail::excess(intra + sign[u] * c, pair + sign[u] * d * degsum + drop[u] * d * d, inv);
      acc[u] += ex > 0.0 ? ex : 0.0;
      frontier[u] += c;
    }
  }

  const double gamma = scaling_factor(scaling, layers.size());
  const double norm_add = norm(size_ + 1);
  const double norm_remove = size_ > 0 ? norm(size_ - 1) : 0.0;
  const bool can_remove = size_ >= min_size + 1;

  Move best{static_cast<VertexId>(n_), 0.0};
  bool found = false;
  for (std::size_t u = 0; u < n_; ++u) {
    const bool inside = member_[u] != 0;
    if (inside && !can_remove) continue;
    if (frontier_only && !inside && frontier[u] == 0.0) continue;
    const double t = acc[u] * (inside ? norm_remove : norm_add);
    const double h = t * t / gamma;
    if (!found || h > best.score) {
      best = {static_cast<VertexId>(u), h};
      found = true;
    }
  }
  return best;
}

bool ScoreState::consistent() const {
  std::size_t count = 0;
  for (std::size_t u = 0; u < n_; ++u) count += member_[u];
  if (count != size_) return false;
  for (std::size_t l = 0; l < m_; ++l) {
    const auto layer = static_cast<LayerId>(l);
    std::int64_t twice_intra = 0, s = 0, s2 = 0;
    for (std::size_t u = 0; u < n_; ++u) {
      std::int64_t inside = 0;
      for (VertexId v : net_->neighbors(layer, static_cast<VertexId>(u))) inside += member_[v];
      if (static_cast<double>(inside) != nbr_in_set_[l * n_ + u]) return false;
      if (member_[u]) {
        const auto d = net_->degree(layer, static_cast<VertexId>(u));
        twice_intra += inside;
        s += d;
        s2 += d * d;
      }
    }
    if (twice_intra / 2 != intra_[l] || s != deg_sum_[l] || s2 != deg_sq_sum_[l]) return false;
  }
  return true;
}

double score_delta(const ScoreState& state, std::span<const LayerId> layers, VertexId u,
                   ScalingPolicy scaling) {
  return state.toggled_score(u, layers, scaling) - state.score(layers, scaling);
}

}  // namespace mlx
