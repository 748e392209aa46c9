#pragma once

#include "brknn/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace brknn::workload {

enum class FacilityMode { kAllVertices, kSample };

struct WorkloadSpec {
    std::uint64_t seed = 42;
    std::size_t num_objects = 100000;
    std::size_t batch_size = 100;
    int k = 10;
    FacilityMode facility_mode = FacilityMode::kAllVertices;
    double facility_fraction = 1.0;        // kSample only, in (0, 1]
    bool length_weighted_placement = false; // default: uniform over edges
};

struct Workload {
    std::vector<MovingObject> objects;
    QuerySpec spec;
};

/// Seeded deterministic generation: facilities are drawn first, then objects
/// (edge picked uniformly, offset uniform in [0, w)), then the query batch is
/// sampled from the facilities without replacement. Throws
/// std::invalid_argument when batch_size exceeds the facility count.
Workload generate(const RoadNetwork& net, const WorkloadSpec& ws);

// Text formats (1-based vertex ids):
//   objects:    header "objects <count>", lines "o <id> <u> <v> <offset>"
//   queries:    header "queries <count> k=<k>", lines "q <vertex-id>"
//   facilities: header "facilities <count>", lines "f <vertex-id>"

void save_objects(std::ostream& out, std::span<const MovingObject> objects);
std::vector<MovingObject> load_objects(std::istream& in, const RoadNetwork& net);

struct QueryFile {
    std::vector<VertexId> queries;
    int k = 1;
};

void save_queries(std::ostream& out, std::span<const VertexId> queries, int k);
QueryFile load_queries(std::istream& in, const RoadNetwork& net);

void save_facilities(std::ostream& out, std::span<const VertexId> facilities);
std::vector<VertexId> load_facilities(std::istream& in, const RoadNetwork& net);

} // namespace brknn::workload
