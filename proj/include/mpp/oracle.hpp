#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mpp/grid.hpp"

namespace mpp {

// Seeded instance generators. All families produce fully occupied
// instances with start = identity (robot i starts on vertex i).
enum class FamilyKind {
  RandomPermutation,    // uniformly random goal permutation
  BoundedGap,           // random permutation with d_g equal to the target
  RingRotation,         // outer boundary ring rotated by one (d_g = 1)
  DisjointLocalCycles,  // sparse unit squares + spaced adjacent swaps (d_g = 1)
  CornerSwap,           // two opposite corner robots exchanged (maximal d_g)
};

struct InstanceFamily {
  FamilyKind kind = FamilyKind::RandomPermutation;
  std::vector<int> dims;
  int dg_target = 0;  // BoundedGap only
  uint64_t seed = 0;
};

Instance generate(const InstanceFamily& family);

FamilyKind family_kind_from_name(const std::string& name);

// Exact minimum makespan by breadth-first search over all configurations.
// Refuses grids with more than 9 vertices.
struct OracleResult {
  int makespan = 0;
  Plan plan;
};
OracleResult bfs_optimal_makespan(const Instance& instance);

}  // namespace mpp
