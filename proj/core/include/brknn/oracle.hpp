#pragma once

#include "brknn/types.hpp"

#include <map>
#include <span>
#include <vector>

namespace brknn::oracle {

/// Brute-force ground truth: a full plain Dijkstra from every object, a
/// literal k-nearest-neighbor evaluation over all facilities with the shared
/// (distance, id) tie rule, then inversion onto the query facilities. Shares
/// only the graph container with the engine; no pruning, no spatial index,
/// no caching. Intended for small inputs.
std::map<VertexId, std::vector<ObjectId>> rknn_oracle(const RoadNetwork& net,
                                                      const QuerySpec& spec,
                                                      std::span<const MovingObject> objects);

} // namespace brknn::oracle
