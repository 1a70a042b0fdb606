#include "mlx/refinement.hpp"

#include <algorithm>
#include <bit>
#include <bitset>
#include <cstdint>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

#include "mlx/error.hpp"
#include "mlx/metrics.hpp"
#include "parallel.hpp"

namespace mlx {

double jaccard_match(const Community& a, const Community& b) {
  return 0.5 * jaccard(a.vertices, b.vertices) + 0.5 * jaccard(a.layers, b.layers);
}

namespace {

std::vector<Community> ranked_unique(std::span<const Community> candidates) {
  std::vector<Community> ranked(candidates.begin(), candidates.end());
  std::sort(ranked.begin(), ranked.end(), community_order);
  ranked.erase(std::unique(ranked.begin(), ranked.end(),
                           [](const Community& a, const Community& b) {
                             return a.vertices == b.vertices && a.layers == b.layers;
                           }),
               ranked.end());
  return ranked;
}

// Overlaps computed from membership bitsets when they fit in memory, with the
// same integer counts (hence the same doubles) as jaccard_match.
class PackedOverlap {
public:
  static constexpr std::size_t kMaxWords = std::size_t{1} << 24;

  explicit PackedOverlap(const std::vector<Community>& ranked) : ranked_(ranked) {
    std::size_t max_vertex = 0, max_layer = 0;
    for (const auto& c : ranked) {
      if (!c.vertices.empty()) max_vertex = std::max<std::size_t>(max_vertex, c.vertices.back() + 1);
      if (!c.layers.empty()) max_layer = std::max<std::size_t>(max_layer, c.layers.back() + 1);
    }
    vwords_ = (max_vertex + 63) / 64;
    lwords_ = (max_layer + 63) / 64;
    if (ranked.size() * (vwords_ + lwords_) > kMaxWords) return;
    bits_.assign(ranked.size() * (vwords_ + lwords_), 0);
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      std::uint64_t* v = bits_.data() + i * (vwords_ + lwords_);
      std::uint64_t* l = v + vwords_;
      for (VertexId u : ranked[i].vertices) v[u / 64] |= std::uint64_t{1} << (u % 64);
      for (LayerId x : ranked[i].layers) l[x / 64] |= std::uint64_t{1} << (x % 64);
    }
  }

  double operator()(std::size_t i, std::size_t j) const {
    if (bits_.empty()) return jaccard_match(ranked_[i], ranked_[j]);
    const std::size_t stride = vwords_ + lwords_;
    const std::uint64_t* a = bits_.data() + i * stride;
    const std::uint64_t* b = bits_.data() + j * stride;
    std::size_t vcommon = 0, lcommon = 0;
    for (std::size_t w = 0; w < vwords_; ++w) vcommon += static_cast<std::size_t>(std::popcount(a[w] & b[w]));
    for (std::size_t w = vwords_; w < stride; ++w) lcommon += static_cast<std::size_t>(std::popcount(a[w] & b[w]));
    return 0.5 * ratio(vcommon, ranked_[i].vertices.size() + ranked_[j].vertices.size()) +
           0.5 * ratio(lcommon, ranked_[i].layers.size() + ranked_[j].layers.size());
  }

private:
  static double ratio(std::size_t common, std::size_t total) {
    const std::size_t joint = total - common;
    return joint == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(joint);
  }

  const std::vector<Community>& ranked_;
  std::size_t vwords_ = 0;
  std::size_t lwords_ = 0;
  std::vector<std::uint64_t> bits_;
};

// Smallest grid index k with overlap <= beta_grid_value(k).
std::uint8_t grid_threshold(double overlap) {
  auto k = static_cast<std::size_t>(std::clamp(overlap * 100.0, 0.0, 100.0));
  while (k > 0 && !(overlap > beta_grid_value(k - 1))) --k;
  while (k + 1 < kBetaGridSize && overlap > beta_grid_value(k)) ++k;
  return static_cast<std::uint8_t>(k);
}

// Grid points 0..k-1 as a bitmask over the 101-point sweep.
using GridMask = std::bitset<kBetaGridSize>;

GridMask grid_prefix(std::size_t k) {
  GridMask mask;
  for (std::size_t i = 0; i < k; ++i) mask.set(i);
  return mask;
}

template <typename Overlaps>
std::vector<std::size_t> greedy_select(std::size_t count, Overlaps&& too_close) {
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < count; ++i) {
    bool admissible = true;
    for (std::size_t j : kept) {
      if (too_close(i, j)) {
        admissible = false;
        break;
      }
    }
    if (admissible) kept.push_back(i);
  }
  return kept;
}

std::vector<Community> pick(const std::vector<Community>& ranked, const std::vector<std::size_t>& index) {
  std::vector<Community> out;
  out.reserve(index.size());
  for (std::size_t i : index) out.push_back(ranked[i]);
  return out;
}

}  // namespace

std::vector<Community> refine(std::span<const Community> candidates, double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw ParameterError("beta must lie in [0, 1]");
  const auto ranked = ranked_unique(candidates);
  const PackedOverlap overlap(ranked);
  auto kept = greedy_select(ranked.size(), [&](std::size_t i, std::size_t j) { return overlap(i, j) > beta; });
  return pick(ranked, kept);
}

RefinementResult refine_at(std::span<const Community> candidates, double beta) {
  RefinementResult result;
  result.kept = refine(candidates, beta);
  result.beta_used = beta;
  return result;
}

std::size_t stable_window_index(std::span<const std::size_t> counts) {
  if (counts.empty()) throw ParameterError("beta profile is empty");
  struct Tally {
    std::size_t frequency = 0;
    std::size_t longest_run = 0;
  };
  std::map<std::size_t, Tally> tally;
  std::size_t run = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    run = (i > 0 && counts[i] == counts[i - 1]) ? run + 1 : 1;
    auto& t = tally[counts[i]];
    ++t.frequency;
    t.longest_run = std::max(t.longest_run, run);
  }
  // std::map iterates counts ascending, so strict comparisons keep the smaller count on ties.
  std::size_t mode = tally.begin()->first;
  Tally best = tally.begin()->second;
  for (const auto& [value, t] : tally) {
    if (t.frequency > best.frequency ||
        (t.frequency == best.frequency && t.longest_run > best.longest_run)) {
      mode = value;
      best = t;
    }
  }
  return static_cast<std::size_t>(std::find(counts.begin(), counts.end(), mode) - counts.begin());
}

RefinementResult default_beta(std::span<const Community> candidates, std::size_t workers) {
  if (candidates.empty()) throw ParameterError("default beta needs at least one candidate");
  const auto ranked = ranked_unique(candidates);

  // One pass over ranked pairs decides every grid point at once: candidate i
  // is kept at grid point k unless some earlier candidate kept at k overlaps
  // it by more than beta_grid_value(k).
  const PackedOverlap overlap(ranked);
  std::vector<GridMask> prefixes(kBetaGridSize + 1);
  for (std::size_t k = 0; k <= kBetaGridSize; ++k) prefixes[k] = grid_prefix(k);
  std::vector<GridMask> kept_at(ranked.size());
  std::vector<GridMask> partial(detail::resolve_workers(workers));
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    for (auto& p : partial) p.reset();
    constexpr std::size_t kChunk = 256;
    const std::size_t chunks = (i + kChunk - 1) / kChunk;
    detail::parallel_for(chunks, workers, [&](std::size_t worker, std::size_t c) {
      GridMask blocked;
      for (std::size_t j = c * kChunk; j < std::min(i, (c + 1) * kChunk); ++j) {
        if (kept_at[j].none()) continue;
        blocked |= kept_at[j] & prefixes[grid_threshold(overlap(i, j))];
      }
      partial[worker] |= blocked;
    });
    GridMask blocked;
    for (const auto& p : partial) blocked |= p;
    kept_at[i] = ~blocked;
  }
  std::vector<std::vector<std::size_t>> selections(kBetaGridSize);
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    for (std::size_t k = 0; k < kBetaGridSize; ++k) {
      if (kept_at[i].test(k)) selections[k].push_back(i);
    }
  }

  RefinementResult result;
  std::vector<std::size_t> counts(kBetaGridSize);
  result.beta_profile.reserve(kBetaGridSize);
  for (std::size_t i = 0; i < kBetaGridSize; ++i) {
    counts[i] = selections[i].size();
    result.beta_profile.push_back({beta_grid_value(i), counts[i]});
  }
  const std::size_t chosen = stable_window_index(counts);
  result.beta_used = beta_grid_value(chosen);
  result.kept = pick(ranked, selections[chosen]);
  return result;
}

void write_beta_profile(std::ostream& out, std::span<const BetaPoint> profile) {
  out << "beta\tk\n";
  char buffer[32];
  for (const auto& p : profile) {
    std::snprintf(buffer, sizeof buffer, "%.2f", p.beta);
    out << buffer << '\t' << p.count << '\n';
  }
}

}  // namespace mlx
