#include "mlx/metrics.hpp"

#include <algorithm>

#include "mlx/error.hpp"

namespace mlx {

std::size_t intersection_size(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
  std::size_t count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

double jaccard(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
  const std::size_t common = intersection_size(a, b);
  const std::size_t joint = a.size() + b.size() - common;
  return joint == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(joint);
}

namespace {

void check_family(const VertexFamily& family) {
  if (family.empty()) throw ParameterError("vertex family must not be empty");
  for (const auto& s : family) {
    if (s.empty()) throw ParameterError("vertex family members must not be empty");
  }
}

}  // namespace

double coverage(const VertexFamily& covered, const VertexFamily& by) {
  check_family(covered);
  check_family(by);
  double total = 0.0;
  for (const auto& b : covered) {
    double best = 0.0;
    for (const auto& c : by) best = std::max(best, jaccard(b, c));
    total += best;
  }
  return total / static_cast<double>(covered.size());
}

double match_score(const VertexFamily& a, const VertexFamily& b) {
  return 0.5 * coverage(a, b) + 0.5 * coverage(b, a);
}

std::size_t misclassification_error(std::span<const VertexId> vertices, std::span<const VertexId> block1,
                                    std::span<const VertexId> block2) {
  const std::size_t n = block1.size() + block2.size();
  std::vector<std::uint8_t> label(n, 0);
  for (auto [block, tag] : {std::pair{block1, std::uint8_t{1}}, std::pair{block2, std::uint8_t{2}}}) {
    for (VertexId u : block) {
      if (u >= n || label[u] != 0) throw ParameterError("blocks do not partition the vertex set");
      label[u] = tag;
    }
  }
  std::size_t in1 = 0, in2 = 0, outside = 0;
  std::vector<std::uint8_t> seen(n, 0);
  for (VertexId u : vertices) {
    if (u >= n) {
      ++outside;
      continue;
    }
    if (seen[u]) continue;
    seen[u] = 1;
    (label[u] == 1 ? in1 : in2)++;
  }
  const std::size_t size = in1 + in2 + outside;
  // |B xor C| = |B| + |C| - 2 |B ∩ C|
  const std::size_t d1 = size + block1.size() - 2 * in1;
  const std::size_t d2 = size + block2.size() - 2 * in2;
  return std::min(d1, d2);
}

VertexSet background_vertices(std::size_t n, std::span<const Community> communities) {
  std::vector<std::uint8_t> covered(n, 0);
  for (const auto& c : communities) {
    for (VertexId u : c.vertices) {
      if (u < n) covered[u] = 1;
    }
  }
  VertexSet out;
  for (std::size_t u = 0; u < n; ++u) {
    if (!covered[u]) out.push_back(static_cast<VertexId>(u));
  }
  return out;
}

VertexFamily vertex_family(std::span<const Community> communities) {
  VertexFamily out;
  out.reserve(communities.size());
  for (const auto& c : communities) out.push_back(c.vertices);
  return out;
}

}  // namespace mlx
