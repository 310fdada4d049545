#pragma once

#include <vector>

#include "mpp/grid.hpp"

namespace mpp {

// Divide-and-conquer labeled solver: split the region in half along a
// round-robin axis, move every robot into the half containing its goal
// (matching-based grouping), recurse into both halves in parallel.
// Makespan is O(k * sum of side lengths). Requires full occupancy
// (embed virtual robots first).
Plan isag_solve(const Instance& instance);

// Region form: region_verts is the ascending vertex list of the region and
// target[i] is the goal vertex (inside the region) of the robot currently
// standing on region_verts[i]. All motion stays inside the region.
Plan isag_solve_region(const GridSpec& grid, const Region& region,
                       const std::vector<Vertex>& region_verts,
                       const std::vector<Vertex>& target);

// Grouping step, exposed for inspection: side_of[i] says which half of the
// split (0 = below cut, 1 = at/above cut along `axis`) the robot on
// region_verts[i] belongs to. After the returned plan, every robot is in
// its half. Counts must match the half capacities.
Plan group_across_split(const GridSpec& grid, const Region& region, int axis,
                        int cut, const std::vector<int>& side_of);

}  // namespace mpp
