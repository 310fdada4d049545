#pragma once

#include <vector>

#include "mpp/grid.hpp"

namespace mpp {

// Exhaustive BFS over all fully-occupied configurations of a tiny grid
// (at most 9 vertices, so at most 9! states). Distances are measured from
// the solved state; the move set is closed under reversal, so the table
// answers both directions.
//
// States are "displacement" permutations: target[v] is the vertex where the
// robot currently on v has to end up. The solved state is the identity.
class SmallGridSolver {
 public:
  explicit SmallGridSolver(std::vector<int> dims);

  // Process-wide cache keyed by dims. Thread-safe.
  static const SmallGridSolver& cached(const std::vector<int>& dims);

  int n() const { return n_; }
  const GridSpec& grid() const { return grid_; }
  const std::vector<Step>& moves() const { return moves_; }
  int diameter() const { return diameter_; }

  int optimal_makespan(const std::vector<Vertex>& target) const;
  // Optimal plan in local vertex ids.
  Plan solve(const std::vector<Vertex>& target) const;

 private:
  int64_t rank(const std::vector<Vertex>& p) const;
  std::vector<Vertex> apply_move(const std::vector<Vertex>& s,
                                 const Step& m) const;

  GridSpec grid_;
  int n_;
  std::vector<Step> moves_;
  std::vector<uint8_t> dist_;
  std::vector<int64_t> fact_;
  int diameter_ = 0;
};

// Solves an arbitrary full-occupancy sub-problem on a tiny region of a
// larger grid: every robot inside `region` must move from its current
// vertex to target_of[v] (a global vertex inside the region). Returns a
// global-plan fragment.
Plan solve_tiny_region(const GridSpec& grid, const Region& region,
                       const std::vector<Vertex>& region_verts,
                       const std::vector<Vertex>& global_target);

}  // namespace mpp
