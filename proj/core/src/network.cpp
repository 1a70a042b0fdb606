#include "mlx/network.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <tuple>
#include <unordered_map>

#include "mlx/error.hpp"

namespace mlx {

std::size_t MultilayerNetwork::total_edges() const {
  std::size_t total = 0;
  for (std::size_t l = 0; l < num_layers(); ++l) total += num_edges(static_cast<LayerId>(l));
  return total;
}

bool MultilayerNetwork::has_edge(LayerId layer, VertexId u, VertexId v) const {
  auto nb = neighbors(layer, u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<EdgeRecord> MultilayerNetwork::edges() const {
  std::vector<EdgeRecord> out;
  out.reserve(total_edges());
  for (std::size_t l = 0; l < num_layers(); ++l) {
    const auto layer = static_cast<LayerId>(l);
    for (VertexId u = 0; u < n_; ++u) {
      for (VertexId v : neighbors(layer, u)) {
        if (u < v) out.push_back({layer, u, v});
      }
    }
  }
  return out;
}

MultilayerNetwork build_network(std::size_t n, std::size_t m,
                                std::span<const EdgeRecord> edges,
                                CleaningStats* stats) {
  if (n == 0 || m == 0) throw BoundsError("network needs at least one vertex and one layer");
  if (n > UINT32_MAX) throw BoundsError("vertex count exceeds 32-bit id range");

  std::vector<EdgeRecord> clean;
  clean.reserve(edges.size());
  CleaningStats local;
  for (const auto& e : edges) {
    if (e.layer >= m || e.u >= n || e.v >= n) {
      throw BoundsError("edge (" + std::to_string(e.layer) + ", " + std::to_string(e.u) + ", " +
                        std::to_string(e.v) + ") outside n=" + std::to_string(n) +
                        ", m=" + std::to_string(m));
    }
    if (e.u == e.v) {
      ++local.self_loops;
      continue;
    }
    clean.push_back({e.layer, std::min(e.u, e.v), std::max(e.u, e.v)});
  }
  std::sort(clean.begin(), clean.end(), [](const EdgeRecord& a, const EdgeRecord& b) {
    return std::tie(a.layer, a.u, a.v) < std::tie(b.layer, b.u, b.v);
  });
  auto last = std::unique(clean.begin(), clean.end());
  local.duplicates = static_cast<std::size_t>(clean.end() - last);
  clean.erase(last, clean.end());

  MultilayerNetwork net;
  net.n_ = n;
  net.offsets_.assign(m, std::vector<std::size_t>(n + 1, 0));
  net.targets_.resize(m);
  net.degrees_.assign(m, std::vector<std::int64_t>(n, 0));
  net.degree_totals_.assign(m, 0);

  for (const auto& e : clean) {
    ++net.degrees_[e.layer][e.u];
    ++net.degrees_[e.layer][e.v];
  }
  for (std::size_t l = 0; l < m; ++l) {
    auto& off = net.offsets_[l];
    for (std::size_t u = 0; u < n; ++u) off[u + 1] = off[u] + static_cast<std::size_t>(net.degrees_[l][u]);
    net.targets_[l].resize(off[n]);
    net.degree_totals_[l] = static_cast<std::int64_t>(off[n]);
    net.degree_values_.emplace_back(net.degrees_[l].begin(), net.degrees_[l].end());
  }
  std::vector<std::vector<std::size_t>> cursor(m);
  for (std::size_t l = 0; l < m; ++l) cursor[l].assign(net.offsets_[l].begin(), net.offsets_[l].end() - 1);
  for (const auto& e : clean) {
    net.targets_[e.layer][cursor[e.layer][e.u]++] = e.v;
    net.targets_[e.layer][cursor[e.layer][e.v]++] = e.u;
  }
  for (std::size_t l = 0; l < m; ++l) {
    for (std::size_t u = 0; u < n; ++u) {
      auto first = net.targets_[l].begin() + static_cast<std::ptrdiff_t>(net.offsets_[l][u]);
      auto stop = net.targets_[l].begin() + static_cast<std::ptrdiff_t>(net.offsets_[l][u + 1]);
      std::sort(first, stop);
    }
  }

  if (stats) *stats = local;
  return net;
}

VertexSet neighborhood(const MultilayerNetwork& net, VertexId u, LayerId layer) {
  if (u >= net.num_vertices() || layer >= net.num_layers()) {
    throw BoundsError("neighborhood query (" + std::to_string(u) + ", " + std::to_string(layer) +
                      ") out of range");
  }
  auto nb = net.neighbors(layer, u);
  return {nb.begin(), nb.end()};
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  auto is_sep = [](char c) { return c == ',' || c == ' ' || c == '\t' || c == '\r'; };
  while (i < line.size()) {
    while (i < line.size() && is_sep(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_sep(line[j])) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::uint64_t parse_id(std::string_view token, std::size_t line_no) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError("expected a non-negative integer, got '" + std::string(token) + "'", line_no);
  }
  return value;
}

class LabelMap {
public:
  std::uint64_t intern(std::string_view token) {
    auto [it, inserted] = ids_.try_emplace(std::string(token), labels_.size());
    if (inserted) labels_.emplace_back(token);
    return it->second;
  }
  std::vector<std::string> take() { return std::move(labels_); }

private:
  std::unordered_map<std::string, std::uint64_t> ids_;
  std::vector<std::string> labels_;
};

}  // namespace

LoadResult read_edge_list(std::istream& in, const LoadOptions& options) {
  std::vector<EdgeRecord> records;
  LabelMap vertex_names;
  LabelMap layer_names;
  std::uint64_t max_vertex = 0;
  std::uint64_t max_layer = 0;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    auto fields = split_fields(view);
    if (fields.empty()) continue;
    if (fields.size() < 3) {
      throw ParseError("expected 'layer u v', found " + std::to_string(fields.size()) + " field(s)",
                       line_no);
    }

    std::uint64_t layer = 0, u = 0, v = 0;
    if (options.labeled) {
      layer = layer_names.intern(fields[0]);
      u = vertex_names.intern(fields[1]);
      v = vertex_names.intern(fields[2]);
    } else {
      layer = parse_id(fields[0], line_no);
      u = parse_id(fields[1], line_no);
      v = parse_id(fields[2], line_no);
    }
    if (options.declared_m && layer >= *options.declared_m) {
      throw BoundsError("line " + std::to_string(line_no) + ": layer " + std::to_string(layer) +
                        " >= declared m=" + std::to_string(*options.declared_m));
    }
    if (options.declared_n && std::max(u, v) >= *options.declared_n) {
      throw BoundsError("line " + std::to_string(line_no) + ": vertex " +
                        std::to_string(std::max(u, v)) +
                        " >= declared n=" + std::to_string(*options.declared_n));
    }
    if (std::max({layer, u, v}) > UINT32_MAX) {
      throw BoundsError("line " + std::to_string(line_no) + ": id exceeds 32-bit range");
    }
    max_layer = std::max(max_layer, layer);
    max_vertex = std::max({max_vertex, u, v});
    records.push_back({static_cast<LayerId>(layer), static_cast<VertexId>(u), static_cast<VertexId>(v)});
  }
  if (records.empty()) throw ParseError("edge list contains no edges", 0);

  LoadResult result;
  result.rows = records.size();
  const std::size_t n = options.declared_n.value_or(max_vertex + 1);
  const std::size_t m = options.declared_m.value_or(max_layer + 1);
  result.network = build_network(n, m, records, &result.cleaning);
  if (options.labeled) {
    result.vertex_labels = vertex_names.take();
    result.layer_labels = layer_names.take();
  }
  return result;
}

LoadResult load_edge_list(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open edge list '" + path.string() + "'");
  return read_edge_list(in, options);
}

void write_edge_list(std::ostream& out, const MultilayerNetwork& net) {
  for (const auto& e : net.edges()) out << e.layer << ' ' << e.u << ' ' << e.v << '\n';
}

void save_edge_list(const std::filesystem::path& path, const MultilayerNetwork& net) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  write_edge_list(out, net);
}

}  // namespace mlx
