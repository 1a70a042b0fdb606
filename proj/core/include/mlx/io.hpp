#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "mlx/extraction.hpp"
#include "mlx/simgen.hpp"

namespace mlx {

/// Final result of an extraction run as written to disk.
struct CommunityReport {
  std::vector<Community> communities;
  VertexSet background;
  double beta = 0.0;
};

/// {"communities":[{"vertices":[..],"layers":[..],"score":x}],"background":[..],"beta":x}
void write_communities_json(std::ostream& out, const CommunityReport& report);
/// Throws ParseError on malformed documents.
CommunityReport read_communities_json(std::istream& in);

/// {"communities":[{"vertices":[..],"layers":[..]}],"labels":[..]}
void write_ground_truth_json(std::ostream& out, const GroundTruth& truth);
GroundTruth read_ground_truth_json(std::istream& in);

/// `metric\tvalue` rows with a header line.
void write_metric_rows(std::ostream& out, const std::vector<std::pair<std::string, double>>& rows);

}  // namespace mlx
