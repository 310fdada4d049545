#pragma once

#include <vector>

#include "mpp/grid.hpp"
#include "mpp/io.hpp"

namespace mpp {

// Tiling of a grid into axis-aligned box cells. The cells form a skeleton
// grid (one node per cell, one edge per shared boundary) that the global
// flow machinery runs on.
struct CellPartition {
  GridSpec grid;
  int dg = 0;
  std::vector<std::vector<int>> cuts;  // per axis: 0 = c_0 < c_1 < ... = m
  GridSpec skeleton;

  int q(int axis) const { return static_cast<int>(cuts[axis].size()) - 1; }
  int cell_coord(int axis, int coord) const;
  int32_t cell_of(Vertex v) const;  // skeleton vertex index
  Region cell_region(int32_t cell) const;
  int64_t cell_count() const { return skeleton.vertex_count; }
};

// Uniform cells of side cell_side; every grid side must be divisible.
CellPartition build_partition(const GridSpec& grid, int dg, int cell_side);

// Balanced tiling with q_i = floor(m_i / (factor*dg)) cells per axis, so
// cell sides land in [factor*dg, 2*factor*dg). Requires m_i >= factor*dg.
CellPartition build_partition_balanced(const GridSpec& grid, int dg,
                                       int factor);

// --- flow orientation --------------------------------------------------
// Both operations physically swap robots (applying the returned plan to
// occ as they go). occ[v] = robot id, goal_of[r] = goal vertex.

// Eliminates every diagonal cell crossing: afterwards each robot's goal
// cell equals its current cell or an edge-adjacent one. Crossers are
// start-swapped with interior donor robots of an adjacent cell, solved as
// identity-plus-swaps sub-instances on two-cell boxes.
Plan diagonal_reroute(const GridSpec& grid, const CellPartition& part,
                      std::vector<int32_t>& occ,
                      const std::vector<Vertex>& goal_of);

// Start-swaps opposing crosser pairs across each shared boundary, making
// every boundary flow uni-directional.
Plan flow_cancellation(const GridSpec& grid, const CellPartition& part,
                       std::vector<int32_t>& occ,
                       const std::vector<Vertex>& goal_of);

// Net crossing counts on the skeleton grid. Requires oriented flows
// (diagonal-free; callers run the two operations above first).
Circulation extract_circulation(const GridSpec& grid,
                                const CellPartition& part,
                                const std::vector<int32_t>& occ,
                                const std::vector<Vertex>& goal_of);

// Vertex-disjoint directed cycles, each carrying one unit of flow.
struct UnitCirculation {
  std::vector<std::vector<int32_t>> cycles;
};

// Splits a conserved circulation into f unit circulations whose flows sum
// back to the input exactly. Works on arbitrary graphs: builds the
// two-copy bipartite multigraph (one edge per flow unit, self edges pad
// every degree to f) and peels f perfect matchings.
std::vector<UnitCirculation> decompose_circulation(const Circulation& c,
                                                   int64_t f);

}  // namespace mpp
