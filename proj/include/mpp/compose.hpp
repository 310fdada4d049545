#pragma once

#include <vector>

#include "mpp/grid.hpp"

namespace mpp {

// Plans whose footprints are vertex-disjoint can run simultaneously: step i
// of the result is the union of the step-i cycles of every fragment
// (fragments shorter than the longest contribute nothing after they end).
// The caller guarantees disjointness; merged steps still go through the
// validator downstream.
Plan zip_plans(std::vector<Plan> fragments);

// A plan fragment together with the set of vertices it may ever touch.
struct Fragment {
  Plan plan;
  std::vector<Vertex> footprint;  // need not be sorted
};

// Schedules fragments whose footprints may overlap: greedily colors them
// into waves of pairwise-disjoint fragments (first-fit in input order, so
// deterministic), zips each wave, and concatenates the waves. Makespan is
// bounded by (number of waves) x (longest fragment).
Plan compose_fragments(const GridSpec& grid, std::vector<Fragment> fragments);

// Union of the vertices of every cycle of every step.
std::vector<Vertex> plan_footprint(const Plan& plan);

}  // namespace mpp
