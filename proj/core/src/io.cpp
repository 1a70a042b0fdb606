#include "mlx/io.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include "json.hpp"
#include "mlx/error.hpp"

namespace mlx {

using json = nlohmann::ordered_json;

namespace {

template <typename Set>
Set sorted_ids(const json& array, const char* what) {
  if (!array.is_array()) throw ParseError(std::string(what) + " must be an array", 0);
  Set out;
  out.reserve(array.size());
  for (const auto& v : array) {
    if (!v.is_number_unsigned()) throw ParseError(std::string(what) + " must hold non-negative integers", 0);
    out.push_back(v.get<typename Set::value_type>());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

json parse_document(std::istream& in) {
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), 0);
  }
}

}  // namespace

void write_communities_json(std::ostream& out, const CommunityReport& report) {
  json doc;
  doc["communities"] = json::array();
  for (const auto& c : report.communities) {
    doc["communities"].push_back({{"vertices", c.vertices}, {"layers", c.layers}, {"score", c.score}});
  }
  doc["background"] = report.background;
  doc["beta"] = report.beta;
  out << doc.dump(1) << '\n';
}

CommunityReport read_communities_json(std::istream& in) {
  const json doc = parse_document(in);
  CommunityReport report;
  try {
    for (const auto& entry : doc.at("communities")) {
      Community c;
      c.vertices = sorted_ids<VertexSet>(entry.at("vertices"), "vertices");
      c.layers = sorted_ids<LayerSet>(entry.at("layers"), "layers");
      c.score = entry.at("score").get<double>();
      report.communities.push_back(std::move(c));
    }
    if (doc.contains("background")) report.background = sorted_ids<VertexSet>(doc["background"], "background");
    if (doc.contains("beta")) report.beta = doc["beta"].get<double>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed community document: ") + e.what(), 0);
  }
  return report;
}

void write_ground_truth_json(std::ostream& out, const GroundTruth& truth) {
  json doc;
  doc["communities"] = json::array();
  for (const auto& c : truth.communities) {
    doc["communities"].push_back({{"vertices", c.vertices}, {"layers", c.layers}});
  }
  doc["labels"] = truth.labels;
  out << doc.dump() << '\n';
}

GroundTruth read_ground_truth_json(std::istream& in) {
  const json doc = parse_document(in);
  GroundTruth truth;
  try {
    for (const auto& entry : doc.at("communities")) {
      truth.communities.push_back({sorted_ids<VertexSet>(entry.at("vertices"), "vertices"),
                                   sorted_ids<LayerSet>(entry.at("layers"), "layers")});
    }
    if (doc.contains("labels")) truth.labels = doc["labels"].get<std::vector<int>>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed ground truth document: ") + e.what(), 0);
  }
  return truth;
}

void write_metric_rows(std::ostream& out, const std::vector<std::pair<std::string, double>>& rows) {
  out << "metric\tvalue\n";
  const auto flags = out.flags();
  const auto precision = out.precision(10);
  for (const auto& [name, value] : rows) out << name << '\t' << value << '\n';
  out.precision(precision);
  out.flags(flags);
}

}  // namespace mlx
