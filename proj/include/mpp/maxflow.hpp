#pragma once

#include <vector>

#include "mpp/grid.hpp"

namespace mpp {

// Result of routing vertex-disjoint paths between two equal-sized vertex
// sets inside a region. If the region cannot carry |sources| disjoint
// paths, `paths` holds the achievable subset and value < |sources|.
struct DisjointPathSet {
  std::vector<std::vector<Vertex>> paths;  // each starts at a source, ends at a sink
  int value = 0;
};

// Unit-capacity max-flow on the vertex-split digraph of the region (every
// region vertex becomes an in/out node pair joined by a capacity-1 arc),
// augmented one BFS path at a time. Sources and sinks must be distinct
// vertices inside the region.
DisjointPathSet find_disjoint_paths_maxflow(const GridSpec& grid,
                                            const Region& region,
                                            const std::vector<Vertex>& sources,
                                            const std::vector<Vertex>& sinks);

}  // namespace mpp
