#pragma once

#include <vector>

#include "mpp/grid.hpp"
#include "mpp/matching.hpp"

namespace mpp {

// Move the (indistinguishable) robots currently on `sources` so they occupy
// exactly `targets`; every other robot stays inside the region (arbitrary
// final cells). All motion is confined to `region`.
struct GroupReconfigTask {
  Region region;
  std::vector<Vertex> sources, targets;
};

// Several disjoint groups moved at once: the robots on sources[i] end up
// occupying exactly targets[i] (indistinguishable within a group, but never
// traded across groups); everyone else stays inside the region.
struct MultiGroupTask {
  Region region;
  std::vector<std::vector<Vertex>> sources, targets;
};

Plan shuffle_groups(const GridSpec& grid, const MultiGroupTask& task);

// The column graph behind the three-phase scheme: columns run along the
// region's shortest non-unit axis; left vertices are source columns, right
// vertices target columns. Each cell contributes one edge — group cells by
// the sequential source/target pairing (ascending vertex order), complement
// cells likewise — so the graph is column-length-regular.
BipartiteMultigraph build_column_bipartite(const GridSpec& grid,
                                           const GroupReconfigTask& task);

// Three-phase reconfiguration: per-column permutation into matching layers,
// one (k-1)-dimensional recursive shuffle per layer, final per-column
// permutation. Makespan is O(sum of region sides).
Plan shuffle_kd(const GridSpec& grid, const GroupReconfigTask& task);

// 2D entry point (region must have exactly two non-unit axes).
Plan shuffle_2d(const GridSpec& grid, const GroupReconfigTask& task);

// Variant whose gadget helpers may roam anywhere inside `bound` (a superset
// of the task region); useful when the task region is a bare line.
Plan shuffle_kd_in(const GridSpec& grid, const Region& bound,
                   const GroupReconfigTask& task);

}  // namespace mpp
