#pragma once

#include <vector>

#include "mpp/flow.hpp"
#include "mpp/grid.hpp"

namespace mpp {

// Fast path for instances whose distance gap is at most one: resolve
// adjacent transpositions with parallel 3x2 block gadgets, then execute
// all remaining displacement cycles in one synchronous step.
Plan solve_dg1(const Instance& instance);

// Special case 5*d_g > second-longest side: slice the longest axis into
// floor(m1/d_g) slabs and run two rounds of pairwise slab solves (odd
// pairs, then even pairs). Makespan O(d_g).
Plan solve_special(const Instance& instance);

// One synchronous step realizing a batch of unit circulations whose
// designated boundary crossers are already staged in the queue lanes.
// Exposed pieces of the global router, mainly for tests: the full
// multibatch driver below stages and executes the batches itself.
struct BatchGeometry;

// Routes up to (queue batches) x (lane capacity) unit circulations:
// one staging sweep (parallel per-cell solves filling the queues), then
// one step per batch. Applies the motion to occ as it goes.
Plan route_multibatch(const GridSpec& grid, const CellPartition& part,
                      const std::vector<UnitCirculation>& units,
                      std::vector<int32_t>& occ,
                      const std::vector<Vertex>& goal_of);

// Lane capacity of the partition: how many unit circulations one batch
// step can carry (d_g in 2D cells, d_g^2 in 3D cells).
int64_t batch_capacity(const CellPartition& part);

// Full worst-case solver: dispatches between the d_g <= 1 fast path, the
// divide-and-conquer solver (when cells would not fit), the slab special
// case, and the main partition-and-route pipeline. Supports 2 and 3
// dimensional grids of any occupancy (virtual robots fill the rest).
Plan paf_solve(const Instance& instance);

}  // namespace mpp
