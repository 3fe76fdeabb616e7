#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "pq/congestion.hpp"
#include "pq/continua.hpp"
#include "pq/metric_space.hpp"
#include "pq/quotient.hpp"

namespace pq::io {

using json = nlohmann::ordered_json;

struct MalformedInputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Point-cloud JSON: {"points": [[x,y],...], "labels": [...]?, "truth": [...]?,
// "name"?, "params"?}. Distances are Euclidean on load; duplicate points are
// rejected with a merge suggestion.
GeneratedCorpus load_point_cloud(const std::string& path);
void save_point_cloud(const std::string& path, const GeneratedCorpus& corpus);

// Plain-decimal n x n CSV; a header row is detected by a non-numeric first
// token and skipped.
MetricSpace load_distance_csv(const std::string& path);
void save_matrix_csv(const std::string& path, int rows, int cols,
                     const std::vector<double>& values);

// Accepts either a bare JSON array of ints or an object wrapping one under
// any of the given keys.
std::vector<int> load_int_array(const std::string& path,
                                const std::vector<std::string>& keys);
Partition load_partition(const std::string& path, int n);
SubsetRef load_subset(const std::string& path, int n);

json to_json(const PropertyReport& report);
json to_json(const ValidationReport& report);
json to_json(const CongestionParams& params);

// Matrices above this edge length go to sidecar CSV files referenced by path.
inline constexpr int kInlineMatrixLimit = 64;

// Writes quotient artifacts: <prefix>.quotient.json plus <prefix>.nabla.csv.
// The JSON carries pi, the partition, metadata, and either the inline nabla
// or a reference to the sidecar.
void save_quotient(const std::string& prefix, const QuotientSpace& qspace,
                   double tau_merge, const std::string& solver,
                   const std::vector<StringWitness>* witnesses = nullptr);

json pipeline_report_json(const PipelineReport& report, const std::string& prefix);

// Serializes the report, writing any oversized matrices next to `prefix`.
void save_pipeline_report(const std::string& path, const PipelineReport& report);

void save_json(const std::string& path, const json& j);
json load_json(const std::string& path);

std::string format_double(double v);  // fixed 17-significant-digit decimal

}  // namespace pq::io
